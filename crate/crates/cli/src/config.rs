//! Flat `key=value` experiment configuration: per-experiment presets, an
//! optional config file, and `--set` overrides, applied in that order.

use std::fmt;
use std::path::Path;

use caspectral_core::solver::AdmmOptions;

/// The seven built-in experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ExperimentKind {
    /// Number of identifiable frequencies vs model order (full data,
    /// unknown order, block-dimension sweep).
    Identifiability,
    /// Success rate over the (observed samples, channels) plane for random
    /// subsampling (noiseless).
    PhaseTransition,
    /// RMSE vs the separation of a close frequency pair (noisy, full data).
    SeparationSweep,
    /// RMSE vs the number of channels (noisy, full data).
    ChannelSweep,
    /// RMSE vs SNR, full data or the two-missing-samples preset.
    SnrSweep,
    /// Single denoising configuration with a printed estimate table.
    DenoiseDemo,
    /// RMSE and solve time vs signal length.
    Bench,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::Identifiability => "identifiability",
            ExperimentKind::PhaseTransition => "phase-transition",
            ExperimentKind::SeparationSweep => "separation-sweep",
            ExperimentKind::ChannelSweep => "channel-sweep",
            ExperimentKind::SnrSweep => "snr-sweep",
            ExperimentKind::DenoiseDemo => "denoise-demo",
            ExperimentKind::Bench => "bench",
        }
    }
}

/// Estimation methods the harness can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Saca,
    Anm,
    InterForm,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Saca => "saca",
            Method::Anm => "anm",
            Method::InterForm => "interform",
        }
    }

    fn parse(s: &str) -> Result<Self, ConfigError> {
        match s.trim() {
            "saca" => Ok(Method::Saca),
            "anm" => Ok(Method::Anm),
            "interform" => Ok(Method::InterForm),
            other => Err(ConfigError::new(format!("unknown method `{other}`"))),
        }
    }
}

/// A configuration error (maps to exit code 2).
#[derive(Debug)]
pub struct ConfigError {
    pub message: String,
}

impl ConfigError {
    pub fn new(message: impl Into<String>) -> Self {
        Self {
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for ConfigError {}

/// Declarative sweep description, resolved from presets, a config file, and
/// command-line overrides.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    /// Signal length per channel.
    pub num_samples: usize,
    /// Channels.
    pub num_channels: usize,
    /// Model order.
    pub order: usize,
    /// Observed samples; `None` means full data.
    pub num_observed: Option<usize>,
    /// 1-based complement of the observation set (overrides `m`).
    pub omega_complement: Option<Vec<usize>>,
    /// Use the two-missing-samples preset (complement {2, 10}, 1-based).
    pub missing_preset: bool,
    /// SNR in dB; `None` means noiseless.
    pub snr_db: Option<f64>,
    /// Fixed frequency list (overrides per-experiment generation).
    pub freqs: Option<Vec<f64>>,
    /// Separation parameter (close-pair offset or random minimum).
    pub delta_f: Option<f64>,
    /// Amplitude draw range; equal bounds pin the amplitudes.
    pub amp_lo: f64,
    pub amp_hi: f64,
    pub trials: usize,
    pub methods: Vec<Method>,
    /// Multiplier on the closed-form dual-norm bound for the denoising
    /// regularizer.
    pub tau_scale: f64,
    /// Relative eigenvalue threshold for rank decisions in the sweep.
    pub rank_eps: f64,
    /// Cap on the block half-dimension for the identifiability sweep.
    pub max_half_dim: Option<usize>,
    /// Sweep lists.
    pub k_list: Vec<usize>,
    pub l_list: Vec<usize>,
    pub m_list: Vec<usize>,
    pub snr_list: Vec<f64>,
    pub delta_list: Vec<f64>,
    pub n_list: Vec<usize>,
    /// Solver options shared by all solves of the run.
    pub solver: AdmmOptions,
    pub seed: u64,
}

/// Noiseless completion solves need residuals well below the default
/// stopping rule for the 1e-4-RMSE success metric; these values reproduce
/// interior-point-quality retrieval at desk scale.
fn noiseless_solver() -> AdmmOptions {
    AdmmOptions {
        abs_tol: 1e-6,
        rel_tol: 1e-7,
        max_iter: 10_000,
        ..Default::default()
    }
}

impl ExperimentConfig {
    /// Desk-scale preset for one experiment.
    pub fn preset(experiment: ExperimentKind) -> Self {
        let base = Self {
            experiment,
            num_samples: 11,
            num_channels: 20,
            order: 3,
            num_observed: None,
            omega_complement: None,
            missing_preset: false,
            snr_db: Some(20.0),
            freqs: None,
            delta_f: None,
            amp_lo: 1.0,
            amp_hi: 1.0,
            trials: 20,
            methods: vec![Method::Saca, Method::Anm],
            tau_scale: 2.0,
            rank_eps: 1e-3,
            max_half_dim: None,
            k_list: Vec::new(),
            l_list: Vec::new(),
            m_list: Vec::new(),
            snr_list: Vec::new(),
            delta_list: Vec::new(),
            n_list: Vec::new(),
            solver: AdmmOptions::default(),
            seed: 0,
        };
        match experiment {
            ExperimentKind::Identifiability => Self {
                num_samples: 5,
                num_channels: 10,
                snr_db: None,
                trials: 10,
                k_list: (2..=8).collect(),
                rank_eps: 0.05,
                solver: AdmmOptions {
                    rho0: Some(0.05),
                    adapt_rho: false,
                    ..noiseless_solver()
                },
                ..base
            },
            ExperimentKind::PhaseTransition => Self {
                order: 4,
                num_channels: 10,
                snr_db: None,
                delta_f: Some(1.2 / 11.0),
                amp_lo: 0.5,
                amp_hi: 1.5,
                trials: 10,
                methods: vec![Method::Saca, Method::InterForm, Method::Anm],
                m_list: (2..=9).collect(),
                l_list: (1..=10).chain([20]).collect(),
                solver: noiseless_solver(),
                ..base
            },
            ExperimentKind::SeparationSweep => Self {
                delta_list: [0.1f64, 0.2, 0.3, 0.5, 0.8, 1.2, 2.0]
                    .iter()
                    .map(|c| c / 11.0)
                    .collect(),
                ..base
            },
            ExperimentKind::ChannelSweep => Self {
                freqs: Some(vec![-0.01, 0.0, 0.35]),
                l_list: vec![2, 3, 5, 7, 10, 15, 20, 30],
                ..base
            },
            ExperimentKind::SnrSweep => Self {
                freqs: Some(vec![-0.01, 0.0, 0.35]),
                snr_list: vec![0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0],
                ..base
            },
            ExperimentKind::DenoiseDemo => Self {
                freqs: Some(vec![-0.01, 0.0, 0.35]),
                trials: 1,
                methods: vec![Method::Saca],
                ..base
            },
            ExperimentKind::Bench => Self {
                num_channels: 30,
                n_list: vec![11, 51],
                trials: 3,
                ..base
            },
        }
    }

    /// Applies a config file (lines of `key=value`, `#` comments).
    pub fn apply_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::new(format!("cannot read config {}: {e}", path.display())))?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| ConfigError::new(format!("line {}: expected key=value, got `{line}`", lineno + 1)))?;
            self.set(key.trim(), value.trim())?;
        }
        Ok(())
    }

    /// Applies one `key=value` override.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let bad = |what: &str| ConfigError::new(format!("invalid value `{value}` for key `{key}` ({what})"));
        match key {
            "n" => self.num_samples = parse_num(key, value)?,
            "l" => self.num_channels = parse_num(key, value)?,
            "k" => self.order = parse_num(key, value)?,
            "m" => {
                let m: usize = parse_num(key, value)?;
                self.num_observed = if m == 0 { None } else { Some(m) };
            }
            "omega_complement" => {
                self.omega_complement = Some(parse_list(key, value)?);
            }
            "missing" => self.missing_preset = parse_bool(key, value)?,
            "snr_db" => {
                self.snr_db = if value == "inf" || value == "none" {
                    None
                } else {
                    Some(value.parse().map_err(|_| bad("expected a number, inf, or none"))?)
                };
            }
            "freqs" => self.freqs = Some(parse_list(key, value)?),
            "delta_f" => self.delta_f = Some(value.parse().map_err(|_| bad("expected a number"))?),
            "amp_lo" => self.amp_lo = value.parse().map_err(|_| bad("expected a number"))?,
            "amp_hi" => self.amp_hi = value.parse().map_err(|_| bad("expected a number"))?,
            "trials" => self.trials = parse_num(key, value)?,
            "methods" => {
                let mut methods = Vec::new();
                for item in value.split(',') {
                    methods.push(Method::parse(item)?);
                }
                self.methods = methods;
            }
            "tau_scale" => self.tau_scale = value.parse().map_err(|_| bad("expected a number"))?,
            "rank_eps" => self.rank_eps = value.parse().map_err(|_| bad("expected a number"))?,
            "max_half_dim" => self.max_half_dim = Some(parse_num(key, value)?),
            "k_list" => self.k_list = parse_list(key, value)?,
            "l_list" => self.l_list = parse_list(key, value)?,
            "m_list" => self.m_list = parse_list(key, value)?,
            "snr_list" => self.snr_list = parse_list(key, value)?,
            "delta_list" => self.delta_list = parse_list(key, value)?,
            "n_list" => self.n_list = parse_list(key, value)?,
            "rho0" => self.solver.rho0 = Some(value.parse().map_err(|_| bad("expected a number"))?),
            "adapt_rho" => self.solver.adapt_rho = parse_bool(key, value)?,
            "abs_tol" => self.solver.abs_tol = value.parse().map_err(|_| bad("expected a number"))?,
            "rel_tol" => self.solver.rel_tol = value.parse().map_err(|_| bad("expected a number"))?,
            "max_iter" => self.solver.max_iter = parse_num(key, value)?,
            "half_dim" => self.solver.half_dim = Some(parse_num(key, value)?),
            "seed" => self.seed = value.parse().map_err(|_| bad("expected an unsigned integer"))?,
            other => {
                return Err(ConfigError::new(format!("unknown config key `{other}`")));
            }
        }
        Ok(())
    }

    /// Structural validation shared by all experiments.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.trials < 1 {
            return Err(ConfigError::new("trials must be at least 1"));
        }
        if self.num_samples == 0 || self.num_channels == 0 {
            return Err(ConfigError::new("n and l must be positive"));
        }
        if self.methods.is_empty() {
            return Err(ConfigError::new("methods list is empty"));
        }
        let list_ok = |name: &str, empty: bool| {
            if empty {
                Err(ConfigError::new(format!("{name} must be non-empty for this experiment")))
            } else {
                Ok(())
            }
        };
        match self.experiment {
            ExperimentKind::Identifiability => list_ok("k_list", self.k_list.is_empty())?,
            ExperimentKind::PhaseTransition => {
                list_ok("m_list", self.m_list.is_empty())?;
                list_ok("l_list", self.l_list.is_empty())?;
            }
            ExperimentKind::SeparationSweep => list_ok("delta_list", self.delta_list.is_empty())?,
            ExperimentKind::ChannelSweep => list_ok("l_list", self.l_list.is_empty())?,
            ExperimentKind::SnrSweep => list_ok("snr_list", self.snr_list.is_empty())?,
            ExperimentKind::DenoiseDemo => {}
            ExperimentKind::Bench => list_ok("n_list", self.n_list.is_empty())?,
        }
        Ok(())
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError> {
    value
        .parse()
        .map_err(|_| ConfigError::new(format!("invalid value `{value}` for key `{key}`")))
}

fn parse_list<T: std::str::FromStr>(key: &str, value: &str) -> Result<Vec<T>, ConfigError> {
    value
        .split(',')
        .map(|item| {
            item.trim()
                .parse()
                .map_err(|_| ConfigError::new(format!("invalid list item `{item}` for key `{key}`")))
        })
        .collect()
}

fn parse_bool(key: &str, value: &str) -> Result<bool, ConfigError> {
    match value {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(ConfigError::new(format!("invalid boolean `{value}` for key `{key}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_key_is_reported_by_name() {
        let mut cfg = ExperimentConfig::preset(ExperimentKind::SnrSweep);
        let err = cfg.set("bogus_key", "1").unwrap_err();
        assert!(err.message.contains("bogus_key"), "{}", err.message);
    }

    #[test]
    fn overrides_apply_in_order() {
        let mut cfg = ExperimentConfig::preset(ExperimentKind::PhaseTransition);
        assert_eq!(cfg.trials, 10);
        cfg.set("trials", "20").unwrap();
        cfg.set("l_list", "1,2,5").unwrap();
        cfg.set("methods", "saca,interform").unwrap();
        assert_eq!(cfg.trials, 20);
        assert_eq!(cfg.l_list, vec![1, 2, 5]);
        assert_eq!(cfg.methods, vec![Method::Saca, Method::InterForm]);
        cfg.validate().unwrap();
    }

    #[test]
    fn empty_sweep_list_rejected() {
        let mut cfg = ExperimentConfig::preset(ExperimentKind::SnrSweep);
        cfg.snr_list.clear();
        assert!(cfg.validate().is_err());
        cfg.set("snr_list", "0,10").unwrap();
        cfg.validate().unwrap();
    }
}
