//! `caspectral` — experiment harness for gridless constant-amplitude
//! frequency estimation.
//!
//! ```text
//! caspectral <experiment> [--config <path>] [--set key=value]... --out <csv>
//!            [--seed U64] [--jobs N] [--no-header-comment]
//!            [--deterministic-timing]
//! ```
//!
//! Exit codes: 0 on success, 2 on configuration errors, 3 on I/O errors.

mod config;
mod csv;
mod experiments;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use config::{ExperimentConfig, ExperimentKind};
use experiments::{run, RunError, RunFlags};

#[derive(Parser, Debug)]
#[command(
    name = "caspectral",
    about = "Reproducible frequency-estimation experiments for constant-amplitude multichannel sinusoids",
    after_help = "Configs are flat key=value files; every key can also be set with --set. \
Run an experiment name with no config to use its desk-scale preset."
)]
struct Cli {
    /// Experiment to run.
    #[arg(value_enum)]
    experiment: ExperimentKind,

    /// Flat key=value config file overriding the experiment preset.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Individual overrides, applied after the config file.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,

    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,

    /// Master seed; trial t of config point p derives its own seed.
    #[arg(long)]
    seed: Option<u64>,

    /// Worker threads for the trial pool.
    #[arg(long)]
    jobs: Option<usize>,

    /// Suppress the timestamped comment line at the top of the CSV.
    #[arg(long = "no-header-comment")]
    no_header_comment: bool,

    /// Record solve times as zero so reruns are byte-identical.
    #[arg(long = "deterministic-timing")]
    deterministic_timing: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    let mut config = ExperimentConfig::preset(cli.experiment);
    if let Some(path) = &cli.config {
        if let Err(e) = config.apply_file(path) {
            eprintln!("config error: {e}");
            return ExitCode::from(2);
        }
    }
    for item in &cli.set {
        let Some((key, value)) = item.split_once('=') else {
            eprintln!("config error: --set expects KEY=VALUE, got `{item}`");
            return ExitCode::from(2);
        };
        if let Err(e) = config.set(key.trim(), value.trim()) {
            eprintln!("config error: {e}");
            return ExitCode::from(2);
        }
    }
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }

    let flags = RunFlags {
        out: cli.out,
        jobs: cli.jobs.unwrap_or_else(|| {
            std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
        }),
        no_header_comment: cli.no_header_comment,
        deterministic_timing: cli.deterministic_timing,
    };

    match run(&config, &flags) {
        Ok(()) => ExitCode::SUCCESS,
        Err(RunError::Config(e)) => {
            eprintln!("config error: {e}");
            ExitCode::from(2)
        }
        Err(RunError::Io(e)) => {
            eprintln!("io error: {e}");
            ExitCode::from(3)
        }
    }
}
