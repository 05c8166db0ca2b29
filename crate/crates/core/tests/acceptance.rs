//! Acceptance suite: one numbered check per release criterion, each printed
//! as a PASS/FAIL line. Run with `cargo test --test acceptance -- --nocapture`
//! to see the lines; the test fails if any criterion fails.

use std::time::Instant;

use caspectral_core::baselines::{anm_solve, interform_solve, Regularization};
use caspectral_core::dual::{dual_atomic_norm, tau_bound, TauParams};
use caspectral_core::retrieval::{
    estimate_rank, identifiability_sweep, recover_gains, vandermonde_decompose, SweepOptions,
};
use caspectral_core::signal::{
    matched_rmse, min_separation, observe, random_amplitudes, random_phases, steering,
    success, synthesize, NoiseSpec, Observation, SpectralModel, SUCCESS_THRESHOLD,
};
use caspectral_core::solver::{slra_solve, solve_denoising, solve_noiseless, AdmmOptions};
use caspectral_core::structured::{
    hankel_adjoint, hankel_lift, toeplitz_adjoint, toeplitz_lift, ConjSymVec, HermitianMatrix,
};
use caspectral_core::{CMatrix, CVector, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// Experiment default: the denoising regularizer is twice the closed-form
/// dual-norm bound (see the crate README for the calibration note).
const TAU_SCALE: f64 = 2.0;

/// Tracks whether each solve reached the standard 1e-4/1e-5 stopping rule
/// within 1000 iterations.
#[derive(Default)]
struct ConvergenceTally {
    reached: usize,
    total: usize,
}

impl ConvergenceTally {
    fn record(&mut self, converged: bool, iters: usize) {
        self.total += 1;
        if converged && iters <= 1000 {
            self.reached += 1;
        }
    }

    fn rate(&self) -> f64 {
        if self.total == 0 {
            1.0
        } else {
            self.reached as f64 / self.total as f64
        }
    }
}

struct Report {
    failures: Vec<String>,
}

impl Report {
    fn check(&mut self, criterion: usize, name: &str, ok: bool, detail: String) {
        let status = if ok { "PASS" } else { "FAIL" };
        println!("[{status}] criterion {criterion} ({name}): {detail}");
        if !ok {
            self.failures.push(format!("criterion {criterion}: {detail}"));
        }
    }
}

fn full_indices(n: usize) -> Vec<usize> {
    (0..n).collect()
}

fn noiseless_observation(x: &CMatrix) -> Observation {
    observe(x, &full_indices(x.nrows()), &NoiseSpec::none()).unwrap()
}

/// K frequencies spread `-0.45 + (k - 1) / K` across the torus.
fn uniform_frequencies(k: usize) -> Vec<f64> {
    (0..k).map(|i| -0.45 + i as f64 / k as f64).collect()
}

/// Three frequencies with plain spacing at least 0.4 on `[-1/2, 1/2)`;
/// the wrapped separation of the outer pair stays above 0.16.
fn spread_triple(rng: &mut ChaCha12Rng) -> Vec<f64> {
    let f1 = -0.48 + 0.04 * rng.random::<f64>();
    let f2 = f1 + 0.40 + 0.02 * rng.random::<f64>();
    let f3 = f2 + 0.40 + 0.02 * rng.random::<f64>();
    vec![f1, f2, f3]
}

fn criterion_1(report: &mut Report) {
    let start = Instant::now();
    let mut rng = ChaCha12Rng::seed_from_u64(101);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let n = rng.random_range(2..=16usize);
        let x = CVector::from_fn(2 * n - 1, |_, _| {
            C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        let m = CMatrix::from_fn(n, n, |_, _| {
            C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        let lhs: C64 = hankel_lift(&x)
            .unwrap()
            .iter()
            .zip(m.iter())
            .map(|(a, b)| a.conj() * b)
            .sum();
        let rhs: C64 = x
            .iter()
            .zip(hankel_adjoint(&m).unwrap().iter())
            .map(|(a, b)| a.conj() * b)
            .sum();
        worst = worst.max((lhs - rhs).norm());

        let t = ConjSymVec::symmetrized(CVector::from_fn(2 * n - 1, |_, _| {
            C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        }))
        .unwrap();
        let h = HermitianMatrix::symmetrized(CMatrix::from_fn(n, n, |_, _| {
            C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        }))
        .unwrap();
        let lhs: C64 = toeplitz_lift(&t)
            .matrix()
            .iter()
            .zip(h.matrix().iter())
            .map(|(a, b)| a.conj() * b)
            .sum();
        let rhs: C64 = t
            .entries()
            .iter()
            .zip(toeplitz_adjoint(&h).entries().iter())
            .map(|(a, b)| a.conj() * b)
            .sum();
        worst = worst.max((lhs - rhs).norm());
    }
    let elapsed = start.elapsed().as_secs_f64();
    report.check(
        1,
        "operator adjoint identities",
        worst < 1e-10 && elapsed < 1.0,
        format!("worst residual {worst:.2e} over 100 instances in {elapsed:.2}s"),
    );
}

fn criterion_2(report: &mut Report, tally: &mut ConvergenceTally) {
    let start = Instant::now();
    let mut rng = ChaCha12Rng::seed_from_u64(202);
    let mut worst_rel: f64 = 0.0;
    let mut rank_failures = 0;
    for _ in 0..20 {
        let f = spread_triple(&mut rng);
        let b = random_amplitudes(&mut rng, 3, 0.5, 1.5);
        let sum: f64 = b.iter().sum();
        let model = SpectralModel::new(f, b, random_phases(&mut rng, 3, 5), 11).unwrap();
        let x = synthesize(&model);
        let solve = slra_solve(&x, 6, &AdmmOptions::default()).unwrap();
        tally.record(solve.converged, solve.iters);
        worst_rel = worst_rel.max((solve.objective - sum).abs() / sum);
        if estimate_rank(&solve.t, 1e-3).unwrap() != 3 {
            rank_failures += 1;
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report.check(
        2,
        "SLRA tightness",
        worst_rel <= 1e-2 && rank_failures == 0 && elapsed < 120.0,
        format!(
            "worst relative value error {worst_rel:.2e}, {rank_failures} rank mismatches, {elapsed:.1}s"
        ),
    );
}

fn criterion_3(report: &mut Report, tally: &mut ConvergenceTally) {
    let opts = AdmmOptions {
        max_iter: 20_000,
        ..Default::default()
    };
    let mut rng = ChaCha12Rng::seed_from_u64(303);
    let mut violations = 0;
    let mut worst_gap: f64 = f64::MIN;
    for trial in 0..10 {
        let k = 2 + trial % 2;
        let f = caspectral_core::signal::random_frequencies(&mut rng, k, 0.12).unwrap();
        let b = random_amplitudes(&mut rng, k, 0.5, 1.5);
        let model = SpectralModel::new(f, b, random_phases(&mut rng, k, 3), 11).unwrap();
        let x = synthesize(&model);
        let mut prev: Option<f64> = None;
        for n in 6..=10 {
            let solve = slra_solve(&x, n, &opts).unwrap();
            tally.record(solve.converged, solve.iters);
            let value = solve.objective;
            if let Some(p) = prev {
                let gap = p - (value + 1e-3 * (1.0 + value));
                worst_gap = worst_gap.max(gap);
                if gap > 0.0 {
                    violations += 1;
                }
            }
            prev = Some(value);
        }
    }
    report.check(
        3,
        "SLRA monotonicity in n",
        violations == 0,
        format!("{violations} violations, worst slack excess {worst_gap:.2e}"),
    );
}

/// One identifiability-sweep trial; returns (success, order matched).
fn saca_sweep_trial(x: &CMatrix, f_true: &[f64], tally: &mut ConvergenceTally) -> bool {
    let out = match identifiability_sweep(x, &SweepOptions::default()) {
        Ok(out) => out,
        Err(_) => return false,
    };
    tally.record(out.solve.converged, out.solve.iters);
    out.estimate.order() == f_true.len() && success(f_true, &out.estimate.frequencies)
}

/// ANM trial in the unknown-order regime: rank-estimate the Toeplitz
/// solution, decompose, and compare.
fn anm_rank_trial(obs: &Observation, f_true: &[f64], tally: &mut ConvergenceTally) -> bool {
    let result = match anm_solve(obs, Regularization::Noiseless, &AdmmOptions::default()) {
        Ok(r) => r,
        Err(_) => return false,
    };
    tally.record(result.converged, result.iters);
    let rank = match estimate_rank(&result.t, 1e-3) {
        Ok(r) => r,
        Err(_) => return false,
    };
    let est = match vandermonde_decompose(&result.t, rank.min(obs.num_samples() - 1)) {
        Ok(e) => e,
        Err(_) => return false,
    };
    est.order() == f_true.len() && success(f_true, &est.frequencies)
}

fn criterion_4(report: &mut Report, tally: &mut ConvergenceTally) {
    let mut rng = ChaCha12Rng::seed_from_u64(404);
    let mut detail = String::new();
    let mut ok = true;
    for k in [2usize, 3, 4] {
        let f = uniform_frequencies(k);
        let mut hits = 0;
        for _ in 0..20 {
            let model =
                SpectralModel::new(f.clone(), vec![1.0; k], random_phases(&mut rng, k, 10), 5).unwrap();
            let x = synthesize(&model);
            if saca_sweep_trial(&x, &f, tally) {
                hits += 1;
            }
        }
        let rate = hits as f64 / 20.0;
        detail.push_str(&format!("K={k}: {rate:.2} "));
        ok &= rate >= 0.95;
    }
    report.check(4, "noiseless exact recovery", ok, detail);
}

fn criterion_5(report: &mut Report, tally: &mut ConvergenceTally) {
    let mut rng = ChaCha12Rng::seed_from_u64(505);

    // SACA at K = 6 with L = 100 channels
    let f6 = uniform_frequencies(6);
    let mut saca_hits = 0;
    for _ in 0..20 {
        let model =
            SpectralModel::new(f6.clone(), vec![1.0; 6], random_phases(&mut rng, 6, 100), 5).unwrap();
        let x = synthesize(&model);
        if saca_sweep_trial(&x, &f6, tally) {
            saca_hits += 1;
        }
    }
    let saca_rate = saca_hits as f64 / 20.0;

    // ANM at K = 5 and K = 6
    let mut anm_rates = Vec::new();
    for k in [5usize, 6] {
        let f = uniform_frequencies(k);
        let mut hits = 0;
        for _ in 0..20 {
            let model =
                SpectralModel::new(f.clone(), vec![1.0; k], random_phases(&mut rng, k, 100), 5).unwrap();
            let x = synthesize(&model);
            let obs = noiseless_observation(&x);
            if anm_rank_trial(&obs, &f, tally) {
                hits += 1;
            }
        }
        anm_rates.push(hits as f64 / 20.0);
    }
    let ok = saca_rate >= 0.8 && anm_rates.iter().all(|&r| r == 0.0);
    report.check(
        5,
        "super-cardinality identifiability",
        ok,
        format!("SACA K=6 rate {saca_rate:.2}; ANM rates K=5 {:.2}, K=6 {:.2}", anm_rates[0], anm_rates[1]),
    );
}

fn random_subset(rng: &mut ChaCha12Rng, n: usize, m: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n).collect();
    for i in 0..m {
        let j = rng.random_range(i..n);
        idx.swap(i, j);
    }
    let mut take: Vec<usize> = idx[..m].to_vec();
    take.sort_unstable();
    take
}

/// True-order decomposition success for a Toeplitz vector.
fn order_k_success(t: &ConjSymVec, f_true: &[f64]) -> bool {
    match vandermonde_decompose(t, f_true.len()) {
        Ok(est) => success(f_true, &est.frequencies),
        Err(_) => false,
    }
}

fn criterion_6(report: &mut Report, tally: &mut ConvergenceTally) {
    let n_samples = 11;
    let k = 4;
    let sep = 1.2 / n_samples as f64;
    let l = 10;
    let trials = 10;
    let mut rng = ChaCha12Rng::seed_from_u64(606);
    let mut ok = true;
    let mut detail = String::new();
    for m in 2..=9usize {
        let mut hits = [0usize; 3]; // saca, interform, anm
        for _ in 0..trials {
            let f = caspectral_core::signal::random_frequencies(&mut rng, k, sep).unwrap();
            let b = random_amplitudes(&mut rng, k, 0.5, 1.5);
            let model = SpectralModel::new(f.clone(), b, random_phases(&mut rng, k, l), n_samples).unwrap();
            let x = synthesize(&model);
            let omega = random_subset(&mut rng, n_samples, m);
            let obs = observe(&x, &omega, &NoiseSpec::none()).unwrap();

            if let Ok(r) = solve_noiseless(&obs, &AdmmOptions::default()) {
                tally.record(r.converged, r.iters);
                if order_k_success(&r.t, &f) {
                    hits[0] += 1;
                }
            }
            if let Ok(r) = interform_solve(&obs, Regularization::Noiseless, &AdmmOptions::default()) {
                tally.record(r.converged, r.iters);
                if order_k_success(&r.t, &f) {
                    hits[1] += 1;
                }
            }
            if let Ok(r) = anm_solve(&obs, Regularization::Noiseless, &AdmmOptions::default()) {
                tally.record(r.converged, r.iters);
                if order_k_success(&r.t, &f) {
                    hits[2] += 1;
                }
            }
        }
        let saca = hits[0] as f64 / trials as f64;
        let inter = hits[1] as f64 / trials as f64;
        let anm = hits[2] as f64 / trials as f64;
        let point_ok = saca >= inter && inter >= anm - 0.1;
        ok &= point_ok;
        detail.push_str(&format!("M={m}:[{saca:.1}/{inter:.1}/{anm:.1}] "));
    }
    report.check(6, "phase-transition ordering", ok, detail);
}

fn criterion_7(report: &mut Report, tally: &mut ConvergenceTally) {
    let n_samples = 11;
    let k = 4;
    let sep = 1.2 / n_samples as f64;
    let l = 10;
    let m = 6;
    let mut rng = ChaCha12Rng::seed_from_u64(707);
    let mut saca_spread = 0.0;
    let mut anm_spread = 0.0;
    let trials = 20;
    for _ in 0..trials {
        let f = caspectral_core::signal::random_frequencies(&mut rng, k, sep).unwrap();
        let b = random_amplitudes(&mut rng, k, 0.5, 1.5);
        let model = SpectralModel::new(f.clone(), b.clone(), random_phases(&mut rng, k, l), n_samples).unwrap();
        let x = synthesize(&model);
        let omega = random_subset(&mut rng, n_samples, m);
        let obs = observe(&x, &omega, &NoiseSpec::none()).unwrap();

        let saca = solve_noiseless(&obs, &AdmmOptions::default()).unwrap();
        tally.record(saca.converged, saca.iters);
        let est = vandermonde_decompose(&saca.t, k).unwrap();
        let gains = recover_gains(&saca.z.rows(0, n_samples).into_owned(), &est.frequencies).unwrap();
        // match estimated components to true ones for the normalization
        saca_spread += normalized_spread(&est.frequencies, &gains.modulus_spread, &f, &b);

        let anm = anm_solve(&obs, Regularization::Noiseless, &AdmmOptions::default()).unwrap();
        tally.record(anm.converged, anm.iters);
        let est = vandermonde_decompose(&anm.t, k).unwrap();
        let gains = recover_gains(&anm.x, &est.frequencies).unwrap();
        anm_spread += normalized_spread(&est.frequencies, &gains.modulus_spread, &f, &b);
    }
    saca_spread /= trials as f64;
    anm_spread /= trials as f64;
    let ok = saca_spread <= 1e-2 && anm_spread >= 10.0 * saca_spread;
    report.check(
        7,
        "constant-amplitude fidelity",
        ok,
        format!("mean normalized spread: SACA {saca_spread:.2e}, ANM {anm_spread:.2e}"),
    );
}

/// Mean over components of spread / true amplitude, pairing each estimated
/// frequency with its nearest true one.
fn normalized_spread(f_est: &[f64], spread: &[f64], f_true: &[f64], b_true: &[f64]) -> f64 {
    let mut total = 0.0;
    for (i, &fe) in f_est.iter().enumerate() {
        let nearest = f_true
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                caspectral_core::signal::wrapped_distance(fe, **a)
                    .partial_cmp(&caspectral_core::signal::wrapped_distance(fe, **b))
                    .unwrap()
            })
            .map(|(idx, _)| idx)
            .unwrap();
        total += spread[i] / b_true[nearest];
    }
    total / f_est.len() as f64
}

fn criterion_8(report: &mut Report, tally: &mut ConvergenceTally) {
    let n_samples = 11;
    let f = vec![-0.01, -0.01 + 0.05 / n_samples as f64, 0.35];
    let trials = 100u64;
    let mut total_rmse = 0.0;
    let mut total_secs = 0.0;
    for seed in 0..trials {
        let mut rng = ChaCha12Rng::seed_from_u64(808_000 + seed);
        let model =
            SpectralModel::new(f.clone(), vec![1.0; 3], random_phases(&mut rng, 3, 30), n_samples).unwrap();
        let x = synthesize(&model);
        let sigma = caspectral_core::signal::snr_to_sigma(&x, 20.0);
        let obs = observe(&x, &full_indices(n_samples), &NoiseSpec::new(sigma, seed).unwrap()).unwrap();
        let tau = TAU_SCALE
            * tau_bound(&TauParams {
                sigma,
                num_observed: obs.num_observed(),
                num_channels: obs.num_channels(),
                span: obs.span(),
            })
            .unwrap();
        let start = Instant::now();
        let result = solve_denoising(&obs, tau, &AdmmOptions::default()).unwrap();
        total_secs += start.elapsed().as_secs_f64();
        tally.record(result.converged, result.iters);
        let est = vandermonde_decompose(&result.t, 3).unwrap();
        total_rmse += matched_rmse(&f, &est.frequencies).unwrap();
    }
    let mean_rmse = total_rmse / trials as f64;
    let mean_secs = total_secs / trials as f64;
    let ok = (1.5e-3..=1.3e-2).contains(&mean_rmse);
    report.check(
        8,
        "denoising accuracy",
        ok,
        format!("mean RMSE {mean_rmse:.3e} over {trials} trials (band [1.5e-3, 1.3e-2]); mean solve {mean_secs:.3}s"),
    );
}

fn criterion_9(report: &mut Report) {
    let mut ok = true;
    let mut detail = String::new();
    for l in [1usize, 5, 20] {
        let params = TauParams {
            sigma: 1.0,
            num_observed: 11,
            num_channels: l,
            span: 11,
        };
        let bound = tau_bound(&params).unwrap();
        let mut mean = 0.0;
        for seed in 0..500u64 {
            let noise = NoiseSpec::new(1.0, 909_000 + 1000 * l as u64 + seed).unwrap();
            let e = observe(&CMatrix::zeros(11, l), &full_indices(11), &noise).unwrap();
            mean += dual_atomic_norm(e.values(), 1 << 12).unwrap();
        }
        mean /= 500.0;
        detail.push_str(&format!("L={l}: MC {mean:.2} <= bound {bound:.2}; "));
        ok &= mean <= bound;
    }

    // independent closed-form recomputation at sigma=1, M=11, L=20, Nbar=11
    let reference = {
        let l = 20.0f64;
        let nbar = 11.0f64;
        let p1 = 4.0 * (l * (8.0 * std::f64::consts::PI).ln() + nbar.ln()).ln();
        let p2 = 4.0;
        let c = p1 * p2 / (p1 * p2 - p1 - p2);
        c * (1.0 * 11.0 * l * (l + nbar.ln())).sqrt()
    };
    let implemented = tau_bound(&TauParams {
        sigma: 1.0,
        num_observed: 11,
        num_channels: 20,
        span: 11,
    })
    .unwrap();
    let rel = (implemented - reference).abs() / reference;
    detail.push_str(&format!("closed-form rel diff {rel:.2e}"));
    ok &= rel <= 1e-6;
    report.check(9, "tau consistency", ok, detail);
}

fn criterion_10(report: &mut Report, tally: &ConvergenceTally) {
    let rate = tally.rate();
    report.check(
        10,
        "ADMM convergence hygiene",
        rate >= 0.95,
        format!(
            "{}/{} solves reached the 1e-4/1e-5 rule within 1000 iterations ({:.1}%); non-converged runs are flagged in the CSV via iters == max_iter",
            tally.reached,
            tally.total,
            100.0 * rate
        ),
    );
}

#[test]
fn acceptance_criteria() {
    let mut report = Report { failures: Vec::new() };
    let mut tally = ConvergenceTally::default();

    criterion_1(&mut report);
    criterion_2(&mut report, &mut tally);
    criterion_3(&mut report, &mut tally);
    criterion_4(&mut report, &mut tally);
    criterion_5(&mut report, &mut tally);
    criterion_6(&mut report, &mut tally);
    criterion_7(&mut report, &mut tally);
    criterion_8(&mut report, &mut tally);
    criterion_9(&mut report);
    criterion_10(&mut report, &tally);

    assert!(
        report.failures.is_empty(),
        "failed criteria:\n{}",
        report.failures.join("\n")
    );
}

// quiet the unused-import lint for items used only in some criteria builds
#[allow(dead_code)]
fn _keep(_: &SpectralModel) {
    let _ = steering(0.0, 1);
    let _ = min_separation(&[]);
    let _ = SUCCESS_THRESHOLD;
}
