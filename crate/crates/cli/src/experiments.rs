//! Experiment engine: config-point expansion, seeded instance generation,
//! method dispatch, CSV persistence, and the stdout summary.
//!
//! Determinism: trial `t` of config point `p` derives its RNG seed from
//! `mix(seed, p, t)` (a splitmix64-style finalizer), so results are
//! reproducible for a fixed `--seed` regardless of the worker count. Every
//! method sees the same instance of a given (point, trial). Rows are ordered
//! by (config point, trial, method) no matter which worker finished first.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use caspectral_core::baselines::{anm_solve, interform_solve, Regularization};
use caspectral_core::dual::{tau_bound, TauParams};
use caspectral_core::retrieval::{
    estimate_rank, identifiability_sweep, recover_gains, vandermonde_decompose, SweepOptions,
};
use caspectral_core::signal::{
    matched_rmse, min_separation, observe, random_amplitudes, random_frequencies, random_phases,
    snr_to_sigma, synthesize, NoiseSpec, Observation, SpectralModel,
};
use caspectral_core::solver::{solve_denoising, solve_noiseless};
use caspectral_core::structured::ConjSymVec;
use caspectral_core::CMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::config::{ConfigError, ExperimentConfig, ExperimentKind, Method};
use crate::csv::{write_csv, TrialRecord};

/// Command-line execution options that sit outside the experiment config.
#[derive(Debug, Clone)]
pub struct RunFlags {
    pub out: PathBuf,
    pub jobs: usize,
    pub no_header_comment: bool,
    /// Write zero solve times so reruns are byte-identical.
    pub deterministic_timing: bool,
}

/// Errors mapped to process exit codes by `main`.
#[derive(Debug)]
pub enum RunError {
    Config(ConfigError),
    Io(std::io::Error),
}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        RunError::Config(e)
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Io(e)
    }
}

/// The observation set of the two-missing-samples preset: N = 11 with the
/// 1-based indices {2, 10} removed, i.e. 0-based {1, 9}. Size 9, sorted.
pub fn missing_data_preset() -> Vec<usize> {
    (0..11).filter(|j| *j != 1 && *j != 9).collect()
}

#[derive(Debug, Clone)]
enum FreqGen {
    Fixed(Vec<f64>),
    /// `-0.45 + (k - 1) / K`, the maximally-spread layout.
    Uniform(usize),
    /// Rejection-sampled with a wrapped minimum separation.
    RandomMinSep { order: usize, sep: f64 },
    /// `[-0.01, -0.01 + delta, 0.35]`, the close-pair layout.
    ClosePair { delta: f64 },
}

impl FreqGen {
    fn order(&self) -> usize {
        match self {
            FreqGen::Fixed(f) => f.len(),
            FreqGen::Uniform(k) => *k,
            FreqGen::RandomMinSep { order, .. } => *order,
            FreqGen::ClosePair { .. } => 3,
        }
    }

    fn draw(&self, rng: &mut ChaCha12Rng) -> Result<Vec<f64>, String> {
        match self {
            FreqGen::Fixed(f) => Ok(f.clone()),
            FreqGen::Uniform(k) => Ok((0..*k).map(|i| -0.45 + i as f64 / *k as f64).collect()),
            FreqGen::RandomMinSep { order, sep } => {
                random_frequencies(rng, *order, *sep).map_err(|e| e.to_string())
            }
            FreqGen::ClosePair { delta } => Ok(vec![-0.01, -0.01 + delta, 0.35]),
        }
    }
}

#[derive(Debug, Clone)]
enum ObservedSpec {
    Full,
    Count(usize),
    /// 0-based indices to keep.
    Keep(Vec<usize>),
}

/// One resolved configuration point of the sweep.
#[derive(Debug, Clone)]
struct Point {
    num_samples: usize,
    num_channels: usize,
    freq_gen: FreqGen,
    observed: ObservedSpec,
    snr_db: Option<f64>,
    amp: (f64, f64),
}

fn expand_points(config: &ExperimentConfig) -> Result<Vec<Point>, ConfigError> {
    let n = config.num_samples;
    let base_observed = || -> ObservedSpec {
        if config.missing_preset {
            ObservedSpec::Keep(missing_data_preset())
        } else if let Some(comp) = &config.omega_complement {
            let keep: Vec<usize> = (0..n).filter(|j| !comp.contains(&(j + 1))).collect();
            ObservedSpec::Keep(keep)
        } else if let Some(m) = config.num_observed {
            ObservedSpec::Count(m)
        } else {
            ObservedSpec::Full
        }
    };
    let fixed_freqs = |fallback: FreqGen| -> FreqGen {
        match &config.freqs {
            Some(f) => FreqGen::Fixed(f.clone()),
            None => fallback,
        }
    };
    let points = match config.experiment {
        ExperimentKind::Identifiability => config
            .k_list
            .iter()
            .map(|&k| Point {
                num_samples: n,
                num_channels: config.num_channels,
                freq_gen: fixed_freqs(FreqGen::Uniform(k)),
                observed: ObservedSpec::Full,
                snr_db: None,
                amp: (config.amp_lo, config.amp_hi),
            })
            .collect(),
        ExperimentKind::PhaseTransition => {
            let sep = config.delta_f.unwrap_or(1.2 / n as f64);
            let mut points = Vec::new();
            for &l in &config.l_list {
                for &m in &config.m_list {
                    points.push(Point {
                        num_samples: n,
                        num_channels: l,
                        freq_gen: fixed_freqs(FreqGen::RandomMinSep {
                            order: config.order,
                            sep,
                        }),
                        observed: ObservedSpec::Count(m),
                        snr_db: None,
                        amp: (config.amp_lo, config.amp_hi),
                    });
                }
            }
            points
        }
        ExperimentKind::SeparationSweep => config
            .delta_list
            .iter()
            .map(|&delta| Point {
                num_samples: n,
                num_channels: config.num_channels,
                freq_gen: FreqGen::ClosePair { delta },
                observed: base_observed(),
                snr_db: config.snr_db,
                amp: (config.amp_lo, config.amp_hi),
            })
            .collect(),
        ExperimentKind::ChannelSweep => config
            .l_list
            .iter()
            .map(|&l| Point {
                num_samples: n,
                num_channels: l,
                freq_gen: fixed_freqs(FreqGen::ClosePair { delta: 0.01 }),
                observed: base_observed(),
                snr_db: config.snr_db,
                amp: (config.amp_lo, config.amp_hi),
            })
            .collect(),
        ExperimentKind::SnrSweep => config
            .snr_list
            .iter()
            .map(|&snr| Point {
                num_samples: n,
                num_channels: config.num_channels,
                freq_gen: fixed_freqs(FreqGen::ClosePair { delta: 0.01 }),
                observed: base_observed(),
                snr_db: Some(snr),
                amp: (config.amp_lo, config.amp_hi),
            })
            .collect(),
        ExperimentKind::DenoiseDemo => vec![Point {
            num_samples: n,
            num_channels: config.num_channels,
            freq_gen: fixed_freqs(FreqGen::ClosePair { delta: 0.01 }),
            observed: base_observed(),
            snr_db: config.snr_db,
            amp: (config.amp_lo, config.amp_hi),
        }],
        ExperimentKind::Bench => config
            .n_list
            .iter()
            .map(|&nn| Point {
                num_samples: nn,
                num_channels: config.num_channels,
                freq_gen: fixed_freqs(FreqGen::ClosePair {
                    delta: 0.05 / nn as f64,
                }),
                observed: ObservedSpec::Full,
                snr_db: config.snr_db,
                amp: (config.amp_lo, config.amp_hi),
            })
            .collect(),
    };
    Ok(points)
}

/// splitmix64-style finalizer combining the master seed, the config-point
/// index, and the trial index.
fn mix(seed: u64, point: u64, trial: u64) -> u64 {
    let mut h = seed
        ^ point.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ trial.wrapping_mul(0xBF58_476D_1CE4_E5B9).rotate_left(17);
    h = (h ^ (h >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    h = (h ^ (h >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    h ^ (h >> 31)
}

fn random_subset(rng: &mut ChaCha12Rng, n: usize, m: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n).collect();
    for i in 0..m.min(n) {
        let j = rng.random_range(i..n);
        idx.swap(i, j);
    }
    let mut keep: Vec<usize> = idx[..m.min(n)].to_vec();
    keep.sort_unstable();
    keep
}

struct Instance {
    model: SpectralModel,
    obs: Observation,
    sigma: f64,
}

fn build_instance(point: &Point, seed: u64) -> Result<Instance, String> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let freqs = point.freq_gen.draw(&mut rng)?;
    let order = freqs.len();
    let amps = if point.amp.0 == point.amp.1 {
        vec![point.amp.0; order]
    } else {
        random_amplitudes(&mut rng, order, point.amp.0, point.amp.1)
    };
    let phases = random_phases(&mut rng, order, point.num_channels);
    let model = SpectralModel::new(freqs, amps, phases, point.num_samples).map_err(|e| e.to_string())?;
    let x = synthesize(&model);
    let indices = match &point.observed {
        ObservedSpec::Full => (0..point.num_samples).collect(),
        ObservedSpec::Count(m) => random_subset(&mut rng, point.num_samples, *m),
        ObservedSpec::Keep(keep) => keep.clone(),
    };
    let x_omega = CMatrix::from_fn(indices.len(), x.ncols(), |r, c| x[(indices[r], c)]);
    let (sigma, noise) = match point.snr_db {
        Some(snr) => {
            let sigma = snr_to_sigma(&x_omega, snr);
            (sigma, NoiseSpec::new(sigma, rng.random::<u64>()).map_err(|e| e.to_string())?)
        }
        None => (0.0, NoiseSpec::none()),
    };
    let obs = observe(&x, &indices, &noise).map_err(|e| e.to_string())?;
    Ok(Instance { model, obs, sigma })
}

/// Per-method outcome for one trial.
struct Outcome {
    rmse: f64,
    iters: usize,
    converged: bool,
    solve_secs: f64,
    retrieval_secs: f64,
    ca_spread: f64,
    frequencies: Vec<f64>,
    amplitudes: Vec<f64>,
}

impl Outcome {
    fn failed(iters: usize, solve_secs: f64) -> Self {
        Self {
            rmse: f64::NAN,
            iters,
            converged: false,
            solve_secs,
            retrieval_secs: 0.0,
            ca_spread: f64::NAN,
            frequencies: Vec::new(),
            amplitudes: Vec::new(),
        }
    }
}

/// Self-normalized constant-amplitude diagnostic: mean over components of
/// spread divided by the recovered amplitude.
fn spread_statistic(amplitudes: &[f64], spread: &[f64]) -> f64 {
    if amplitudes.is_empty() {
        return f64::NAN;
    }
    let mut total = 0.0;
    for (a, s) in amplitudes.iter().zip(spread.iter()) {
        total += s / a.max(1e-12);
    }
    total / amplitudes.len() as f64
}

fn finish_outcome(
    f_true: &[f64],
    t: &ConjSymVec,
    order: usize,
    gain_rows: &CMatrix,
    iters: usize,
    converged: bool,
    solve_secs: f64,
) -> Outcome {
    let start = Instant::now();
    let est = match vandermonde_decompose(t, order) {
        Ok(est) => est,
        Err(_) => return Outcome::failed(iters, solve_secs),
    };
    let gains = recover_gains(gain_rows, &est.frequencies);
    let retrieval_secs = start.elapsed().as_secs_f64();
    let rmse = matched_rmse(f_true, &est.frequencies).unwrap_or(f64::NAN);
    let (ca_spread, amplitudes) = match gains {
        Ok(g) => (spread_statistic(&g.amplitudes, &g.modulus_spread), g.amplitudes),
        Err(_) => (f64::NAN, Vec::new()),
    };
    Outcome {
        rmse,
        iters,
        converged,
        solve_secs,
        retrieval_secs,
        ca_spread,
        frequencies: est.frequencies,
        amplitudes,
    }
}

fn run_method(
    config: &ExperimentConfig,
    instance: &Instance,
    method: Method,
) -> Outcome {
    let f_true = instance.model.frequencies();
    let order = instance.model.order();
    let obs = &instance.obs;
    let num_samples = obs.num_samples();
    let noiseless = instance.sigma == 0.0;

    // regularization: tau_scale times the closed-form dual-norm bound; the
    // l2-coupled baselines drop the sqrt(L) factor of the l1 dual norm
    let tau_for = |method: Method| -> f64 {
        let bound = tau_bound(&TauParams {
            sigma: instance.sigma,
            num_observed: obs.num_observed(),
            num_channels: obs.num_channels(),
            span: obs.span(),
        })
        .unwrap_or(f64::NAN);
        let scaled = config.tau_scale * bound;
        match method {
            Method::Saca => scaled,
            Method::Anm | Method::InterForm => scaled / (obs.num_channels() as f64).sqrt(),
        }
    };

    if config.experiment == ExperimentKind::Identifiability {
        // unknown model order: SACA grows the block dimension until the
        // solution is rank-deficient; the baselines rank-estimate their
        // fixed-size Toeplitz solution
        return match method {
            Method::Saca => {
                let sweep = SweepOptions {
                    max_half_dim: config.max_half_dim,
                    rank_eps: config.rank_eps,
                    admm: config.solver.clone(),
                };
                let x = synthesize(&instance.model);
                let start = Instant::now();
                match identifiability_sweep(&x, &sweep) {
                    Ok(out) => {
                        let solve_secs = start.elapsed().as_secs_f64();
                        let rmse = if out.estimate.order() == order {
                            matched_rmse(f_true, &out.estimate.frequencies).unwrap_or(f64::NAN)
                        } else {
                            f64::NAN
                        };
                        let gstart = Instant::now();
                        let gains = recover_gains(
                            &out.solve.z.rows(0, num_samples).into_owned(),
                            &out.estimate.frequencies,
                        );
                        let (ca_spread, amplitudes) = match gains {
                            Ok(g) => (spread_statistic(&g.amplitudes, &g.modulus_spread), g.amplitudes),
                            Err(_) => (f64::NAN, Vec::new()),
                        };
                        Outcome {
                            rmse,
                            iters: out.solve.iters,
                            converged: out.solve.converged,
                            solve_secs,
                            retrieval_secs: gstart.elapsed().as_secs_f64(),
                            ca_spread,
                            frequencies: out.estimate.frequencies,
                            amplitudes,
                        }
                    }
                    Err(_) => Outcome::failed(config.solver.max_iter, start.elapsed().as_secs_f64()),
                }
            }
            Method::Anm => {
                let start = Instant::now();
                let Ok(result) = anm_solve(obs, Regularization::Noiseless, &config.solver) else {
                    return Outcome::failed(config.solver.max_iter, start.elapsed().as_secs_f64());
                };
                let solve_secs = start.elapsed().as_secs_f64();
                let rank = estimate_rank(&result.t, config.rank_eps).unwrap_or(0);
                let capped = rank.min(num_samples - 1);
                let mut out = finish_outcome(
                    f_true,
                    &result.t,
                    capped,
                    &result.x,
                    result.iters,
                    result.converged,
                    solve_secs,
                );
                if capped != order {
                    out.rmse = f64::NAN;
                }
                out
            }
            Method::InterForm => {
                let start = Instant::now();
                let Ok(result) = interform_solve(obs, Regularization::Noiseless, &config.solver) else {
                    return Outcome::failed(config.solver.max_iter, start.elapsed().as_secs_f64());
                };
                let solve_secs = start.elapsed().as_secs_f64();
                let rank = estimate_rank(&result.t, config.rank_eps).unwrap_or(0);
                let capped = rank.min(num_samples - 1);
                let mut out = finish_outcome(
                    f_true,
                    &result.t,
                    capped,
                    &result.x,
                    result.iters,
                    result.converged,
                    solve_secs,
                );
                if capped != order {
                    out.rmse = f64::NAN;
                }
                out
            }
        };
    }

    // known model order (the paper feeds the true K to all methods)
    match method {
        Method::Saca => {
            let start = Instant::now();
            let solved = if noiseless {
                solve_noiseless(obs, &config.solver)
            } else {
                solve_denoising(obs, tau_for(method), &config.solver)
            };
            let Ok(result) = solved else {
                return Outcome::failed(config.solver.max_iter, start.elapsed().as_secs_f64());
            };
            let solve_secs = start.elapsed().as_secs_f64();
            finish_outcome(
                f_true,
                &result.t,
                order,
                &result.z.rows(0, num_samples).into_owned(),
                result.iters,
                result.converged,
                solve_secs,
            )
        }
        Method::Anm => {
            let reg = if noiseless {
                Regularization::Noiseless
            } else {
                Regularization::Denoising(tau_for(method))
            };
            let start = Instant::now();
            let Ok(result) = anm_solve(obs, reg, &config.solver) else {
                return Outcome::failed(config.solver.max_iter, start.elapsed().as_secs_f64());
            };
            let solve_secs = start.elapsed().as_secs_f64();
            finish_outcome(f_true, &result.t, order, &result.x, result.iters, result.converged, solve_secs)
        }
        Method::InterForm => {
            let reg = if noiseless {
                Regularization::Noiseless
            } else {
                Regularization::Denoising(tau_for(method))
            };
            let start = Instant::now();
            let Ok(result) = interform_solve(obs, reg, &config.solver) else {
                return Outcome::failed(config.solver.max_iter, start.elapsed().as_secs_f64());
            };
            let solve_secs = start.elapsed().as_secs_f64();
            finish_outcome(f_true, &result.t, order, &result.x, result.iters, result.converged, solve_secs)
        }
    }
}

/// Per-(point, method) aggregation for the stdout summary.
#[derive(Default, Clone)]
struct Aggregate {
    trials: usize,
    successes: usize,
    rmse_sum: f64,
    rmse_count: usize,
    iters_sum: usize,
    nonconverged: usize,
    solve_sum: f64,
    retrieval_sum: f64,
    spread_sum: f64,
    spread_count: usize,
}

impl Aggregate {
    fn add(&mut self, outcome: &Outcome) {
        self.trials += 1;
        if outcome.rmse <= caspectral_core::signal::SUCCESS_THRESHOLD {
            self.successes += 1;
        }
        if outcome.rmse.is_finite() {
            self.rmse_sum += outcome.rmse;
            self.rmse_count += 1;
        }
        self.iters_sum += outcome.iters;
        if !outcome.converged {
            self.nonconverged += 1;
        }
        self.solve_sum += outcome.solve_secs;
        self.retrieval_sum += outcome.retrieval_secs;
        if outcome.ca_spread.is_finite() {
            self.spread_sum += outcome.ca_spread;
            self.spread_count += 1;
        }
    }
}

/// Runs the experiment described by `config`, writes the CSV, and prints a
/// per-point summary table.
pub fn run(config: &ExperimentConfig, flags: &RunFlags) -> Result<(), RunError> {
    config.validate()?;
    let points = expand_points(config)?;
    let jobs: Vec<(usize, usize)> = (0..points.len())
        .flat_map(|p| (0..config.trials).map(move |t| (p, t)))
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(flags.jobs.max(1))
        .build()
        .map_err(|e| RunError::Config(ConfigError::new(format!("worker pool: {e}"))))?;

    use rayon::prelude::*;
    let results: Vec<(usize, usize, Vec<(Method, Outcome)>)> = pool.install(|| {
        jobs.par_iter()
            .map(|&(p, t)| {
                let seed = mix(config.seed, p as u64, t as u64);
                let outcomes = match build_instance(&points[p], seed) {
                    Ok(instance) => config
                        .methods
                        .iter()
                        .map(|&m| (m, run_method(config, &instance, m)))
                        .collect(),
                    Err(_) => config
                        .methods
                        .iter()
                        .map(|&m| (m, Outcome::failed(0, 0.0)))
                        .collect(),
                };
                (p, t, outcomes)
            })
            .collect()
    });

    // deterministic ordering: (point, trial, method position)
    let mut ordered = results;
    ordered.sort_by_key(|(p, t, _)| (*p, *t));

    let mut records = Vec::new();
    let mut aggregates: Vec<Vec<Aggregate>> =
        vec![vec![Aggregate::default(); config.methods.len()]; points.len()];
    let mut demo_lines = Vec::new();
    for (p, t, outcomes) in &ordered {
        let point = &points[*p];
        // the instance's scalar descriptors, recomputed deterministically
        let seed = mix(config.seed, *p as u64, *t as u64);
        let (order, delta_f, m_count) = match build_instance(point, seed) {
            Ok(instance) => (
                instance.model.order(),
                min_separation(instance.model.frequencies()).unwrap_or(f64::INFINITY),
                instance.obs.num_observed(),
            ),
            Err(_) => (point.freq_gen.order(), f64::NAN, 0),
        };
        for (slot, (method, outcome)) in outcomes.iter().enumerate() {
            aggregates[*p][slot].add(outcome);
            records.push(TrialRecord {
                experiment: config.experiment.name(),
                num_samples: point.num_samples,
                num_channels: point.num_channels,
                order,
                num_observed: m_count,
                snr_db: point.snr_db.unwrap_or(f64::INFINITY),
                delta_f,
                method: method.name(),
                trial: *t,
                rmse: outcome.rmse,
                iters: outcome.iters,
                solve_secs: if flags.deterministic_timing { 0.0 } else { outcome.solve_secs },
                ca_spread: outcome.ca_spread,
            });
            if config.experiment == ExperimentKind::DenoiseDemo && *t == 0 {
                demo_lines.push(format!(
                    "  {}: f_hat {:?}  b_hat {:?}",
                    method.name(),
                    outcome.frequencies.iter().map(|f| format!("{f:.6}")).collect::<Vec<_>>(),
                    outcome.amplitudes.iter().map(|b| format!("{b:.4}")).collect::<Vec<_>>(),
                ));
            }
        }
    }

    let header_comment = if flags.no_header_comment {
        None
    } else {
        let stamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Some(format!("generated by caspectral at unix {stamp}"))
    };
    let file = File::create(&flags.out)?;
    let mut writer = BufWriter::new(file);
    write_csv(&mut writer, &records, header_comment.as_deref())?;
    writer.flush()?;

    print_summary(config, &points, &aggregates, &demo_lines);
    Ok(())
}

fn point_label(point: &Point) -> String {
    let m = match &point.observed {
        ObservedSpec::Full => point.num_samples,
        ObservedSpec::Count(m) => *m,
        ObservedSpec::Keep(keep) => keep.len(),
    };
    let snr = point
        .snr_db
        .map(|s| format!("{s:.0}dB"))
        .unwrap_or_else(|| "noiseless".to_string());
    format!(
        "N={} L={} K={} M={} {}",
        point.num_samples,
        point.num_channels,
        point.freq_gen.order(),
        m,
        snr
    )
}

fn print_summary(
    config: &ExperimentConfig,
    points: &[Point],
    aggregates: &[Vec<Aggregate>],
    demo_lines: &[String],
) {
    println!(
        "{}: {} config points x {} trials, methods [{}]",
        config.experiment.name(),
        points.len(),
        config.trials,
        config
            .methods
            .iter()
            .map(|m| m.name())
            .collect::<Vec<_>>()
            .join(", ")
    );
    println!(
        "{:<34} {:<10} {:>8} {:>11} {:>7} {:>8} {:>9} {:>9}",
        "point", "method", "success", "mean_rmse", "iters", "nonconv", "solve_s", "retr_s"
    );
    for (p, point) in points.iter().enumerate() {
        for (slot, method) in config.methods.iter().enumerate() {
            let a = &aggregates[p][slot];
            let mean_rmse = if a.rmse_count > 0 {
                a.rmse_sum / a.rmse_count as f64
            } else {
                f64::NAN
            };
            println!(
                "{:<34} {:<10} {:>8.2} {:>11.3e} {:>7} {:>8} {:>9.3} {:>9.4}",
                point_label(point),
                method.name(),
                a.successes as f64 / a.trials.max(1) as f64,
                mean_rmse,
                a.iters_sum / a.trials.max(1),
                a.nonconverged,
                a.solve_sum / a.trials.max(1) as f64,
                a.retrieval_sum / a.trials.max(1) as f64,
            );
        }
    }
    if !demo_lines.is_empty() {
        println!("estimates (trial 0):");
        for line in demo_lines {
            println!("{line}");
        }
    }
}
