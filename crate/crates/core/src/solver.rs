//! Consensus ADMM solver for the Hankel-Toeplitz structured low-rank
//! approximation (SLRA) programs.
//!
//! Two programs are solved over a conjugate-symmetric vector `t` (length
//! `2n - 1`) and an extended signal matrix `Z` (`(2n - 1) x L`), both subject
//! to one PSD constraint per channel on the assembled block
//! `[[T conj(t), (H Z_l)^H], [H Z_l, T t]]`:
//!
//! * completion: minimize `tr(T t) / n` with `Z` pinned to the observed data
//!   on the observation rows;
//! * denoising: minimize `||Y - Z_Omega||_F^2 / 2 + tau tr(T t) / n`.
//!
//! The splitting introduces one auxiliary PSD consensus copy `Q_l` per
//! channel. Each iteration projects `Q_l` onto the PSD cone, solves the
//! `(Z, t)` block in closed form from diagonal-sum adjoints, and ascends the
//! multipliers. Stopping uses the standard scaled primal/dual residual rule
//! over the concatenation of all `L` consensus constraints; the penalty
//! parameter follows the usual rebalancing scheme (factor 2, threshold 10).
//!
//! Each solve owns its state: concurrent solves are safe. Within a solve the
//! `L` eigen-projections are independent given `(t, Z, multipliers)` and form
//! a parallelizable stage, though this implementation runs them sequentially
//! (desk-scale problems spend well under a second per solve).

use alloc::format;
use alloc::vec::Vec;

use num_traits::Float;

use crate::signal::{Observation, SpectralModel};
use crate::structured::{
    assemble_block_raw, diagonal_weights, hankel_adjoint, psd_project_raw, split_block,
    toeplitz_adjoint_raw, ConjSymVec, PSD_CLAMP_TOL,
};
use crate::{CMatrix, CVector, Error, Result, C64};

/// Options for the ADMM solvers.
#[derive(Debug, Clone)]
pub struct AdmmOptions {
    /// Initial penalty parameter; `None` selects `1 / sqrt(N)`.
    pub rho0: Option<f64>,
    /// Rebalance the penalty from the residual ratio (see [`adapt_rho`]).
    pub adapt_rho: bool,
    /// Absolute stopping tolerance.
    pub abs_tol: f64,
    /// Relative stopping tolerance.
    pub rel_tol: f64,
    /// Iteration cap.
    pub max_iter: usize,
    /// Toeplitz half-dimension `n`; `None` selects `ceil((N + 1) / 2)`.
    pub half_dim: Option<usize>,
}

impl Default for AdmmOptions {
    fn default() -> Self {
        Self {
            rho0: None,
            adapt_rho: true,
            abs_tol: 1e-4,
            rel_tol: 1e-5,
            max_iter: 1000,
            half_dim: None,
        }
    }
}

impl AdmmOptions {
    /// Smallest admissible half-dimension for a signal of length `N`.
    pub fn min_half_dim(num_samples: usize) -> usize {
        (num_samples + 2) / 2
    }

    pub(crate) fn resolve(&self, num_samples: usize) -> Result<(usize, f64)> {
        let n_min = Self::min_half_dim(num_samples);
        let n = self.half_dim.unwrap_or(n_min);
        if n < n_min {
            return Err(Error::InvalidParameter(format!(
                "half-dimension {n} below minimum {n_min} for {num_samples} samples"
            )));
        }
        let rho = self.rho0.unwrap_or(1.0 / Float::sqrt(num_samples as f64));
        if !(rho > 0.0) {
            return Err(Error::InvalidParameter(format!("penalty {rho} must be positive")));
        }
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) || self.max_iter == 0 {
            return Err(Error::InvalidParameter(
                "tolerances must be positive and max_iter nonzero".into(),
            ));
        }
        Ok((n, rho))
    }
}

/// One entry of the per-iteration residual history.
#[derive(Debug, Clone, Copy)]
pub struct ResidualSample {
    pub primal: f64,
    pub dual: f64,
    pub rho: f64,
}

/// Optimizer pair and convergence diagnostics from one ADMM run.
#[derive(Debug, Clone)]
pub struct SolveResult {
    /// Optimized Toeplitz vector (length `2n - 1`).
    pub t: ConjSymVec,
    /// Optimized extended signal matrix (`(2n - 1) x L`).
    pub z: CMatrix,
    /// Whether the residual stopping rule fired within the iteration cap.
    pub converged: bool,
    /// Iterations performed.
    pub iters: usize,
    /// Final scaled primal residual (Frobenius, over all channels).
    pub primal_residual: f64,
    /// Final scaled dual residual.
    pub dual_residual: f64,
    /// Objective value `tr(T t) / n`.
    pub objective: f64,
    /// Residual trace, one sample per iteration.
    pub history: Vec<ResidualSample>,
}

/// Penalty rebalancing: double `rho` when the primal residual exceeds ten
/// times the dual, halve it in the mirrored case, otherwise keep it.
pub fn adapt_rho(rho: f64, primal_residual: f64, dual_residual: f64) -> f64 {
    if primal_residual > 10.0 * dual_residual {
        2.0 * rho
    } else if dual_residual > 10.0 * primal_residual {
        rho / 2.0
    } else {
        rho
    }
}

enum DataTerm {
    /// Completion: observed entries of `Z` are pinned to the data and the
    /// trace objective carries weight 1.
    Pinned,
    /// Denoising: quadratic data fidelity, trace objective weight `tau`.
    Quadratic { tau: f64 },
}

/// Solves the denoising SLRA for regularization parameter `tau > 0`.
pub fn solve_denoising(obs: &Observation, tau: f64, opts: &AdmmOptions) -> Result<SolveResult> {
    if !(tau > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "regularization parameter {tau} must be positive"
        )));
    }
    run_admm(obs, DataTerm::Quadratic { tau }, opts)
}

/// Solves the completion SLRA. The observation is treated as exact; callers
/// are responsible for passing noiseless data.
pub fn solve_noiseless(obs: &Observation, opts: &AdmmOptions) -> Result<SolveResult> {
    run_admm(obs, DataTerm::Pinned, opts)
}

/// Solves the completion SLRA on a fully observed matrix at half-dimension
/// `n` and returns the full result.
pub fn slra_solve(x: &CMatrix, half_dim: usize, opts: &AdmmOptions) -> Result<SolveResult> {
    let indices: Vec<usize> = (0..x.nrows()).collect();
    let obs = Observation::new(indices, x.clone(), x.nrows())?;
    let mut opts = opts.clone();
    opts.half_dim = Some(half_dim);
    solve_noiseless(&obs, &opts)
}

/// The SLRA value functional: optimal `tr(T t) / n` of the completion
/// program on the fully observed matrix `x`.
pub fn slra_value(x: &CMatrix, half_dim: usize) -> Result<f64> {
    Ok(slra_solve(x, half_dim, &AdmmOptions::default())?.objective)
}

fn run_admm(obs: &Observation, data: DataTerm, opts: &AdmmOptions) -> Result<SolveResult> {
    let num_samples = obs.num_samples();
    let (n, mut rho) = opts.resolve(num_samples)?;
    let len = 2 * n - 1;
    let channels = obs.num_channels();
    let d = diagonal_weights(n);

    // map sample index -> observation row
    let mut observed_row = alloc::vec![usize::MAX; len];
    for (row, &j) in obs.indices().iter().enumerate() {
        observed_row[j] = row;
    }
    let y = obs.values();

    // warm start: t = 0, Z agrees with the data on observed rows, multipliers 0
    let mut t = CVector::zeros(len);
    let mut z = CMatrix::zeros(len, channels);
    for j in 0..num_samples {
        if observed_row[j] != usize::MAX {
            for l in 0..channels {
                z[(j, l)] = y[(observed_row[j], l)];
            }
        }
    }
    // scaled multipliers U = Lambda / rho, one per channel
    let mut multipliers: Vec<CMatrix> = (0..channels).map(|_| CMatrix::zeros(2 * n, 2 * n)).collect();
    let mut blocks: Vec<CMatrix> = (0..channels)
        .map(|l| assemble_block_raw(&t, &z.column(l).into_owned()))
        .collect();

    let objective_weight = match data {
        DataTerm::Pinned => 1.0,
        DataTerm::Quadratic { tau } => tau,
    };
    let sqrt_count = Float::sqrt((channels * 4 * n * n) as f64);
    let mut history = Vec::new();
    let mut converged = false;
    let mut iters = 0;
    let (mut primal, mut dual) = (f64::NAN, f64::NAN);

    let mut projected: Vec<CMatrix> = Vec::with_capacity(channels);
    while iters < opts.max_iter {
        iters += 1;
        projected.clear();

        // per-channel PSD projection and quadrant adjoints
        let mut toeplitz_sum = CVector::zeros(len);
        let mut hankel_adj: Vec<CVector> = Vec::with_capacity(channels);
        for l in 0..channels {
            let q = psd_project_raw(&(&blocks[l] - &multipliers[l]), PSD_CLAMP_TOL)?;
            let p = &q + &multipliers[l];
            let quad = split_block(&p)?;
            let a1 = toeplitz_adjoint_raw(&quad.top_left);
            let a2 = toeplitz_adjoint_raw(&quad.bottom_right);
            for m in 0..len {
                toeplitz_sum[m] += a1[m].conj() + a2[m];
            }
            hankel_adj.push(hankel_adjoint(&quad.bottom_left)?);
            projected.push(q);
        }

        // closed-form (Z, t) block
        for l in 0..channels {
            let h = &hankel_adj[l];
            for j in 0..len {
                let row = if j < num_samples { observed_row[j] } else { usize::MAX };
                z[(j, l)] = if row != usize::MAX {
                    match data {
                        DataTerm::Pinned => y[(row, l)],
                        DataTerm::Quadratic { .. } => {
                            (y[(row, l)] + h[j] * C64::new(2.0 * rho, 0.0))
                                / C64::new(1.0 + 2.0 * rho * d[j], 0.0)
                        }
                    }
                } else {
                    h[j] / C64::new(d[j], 0.0)
                };
            }
        }
        let shrink = objective_weight / rho;
        for m in 0..len {
            let mut v = toeplitz_sum[m];
            if m == n - 1 {
                v -= C64::new(shrink, 0.0);
            }
            t[m] = v / C64::new(2.0 * channels as f64 * d[m], 0.0);
        }
        // keep t exactly conjugate-symmetric against rounding drift
        for m in 0..n - 1 {
            let avg = (t[m] + t[len - 1 - m].conj()) * C64::new(0.5, 0.0);
            t[m] = avg;
            t[len - 1 - m] = avg.conj();
        }
        t[n - 1] = C64::new(t[n - 1].re, 0.0);

        // residuals over the stacked consensus constraints
        let mut primal_sq = 0.0;
        let mut dual_sq = 0.0;
        let mut q_norm_sq = 0.0;
        let mut b_norm_sq = 0.0;
        let mut u_norm_sq = 0.0;
        for l in 0..channels {
            let fresh = assemble_block_raw(&t, &z.column(l).into_owned());
            primal_sq += (&projected[l] - &fresh).norm_squared();
            dual_sq += (&fresh - &blocks[l]).norm_squared();
            q_norm_sq += projected[l].norm_squared();
            b_norm_sq += fresh.norm_squared();
            multipliers[l] += &projected[l] - &fresh;
            u_norm_sq += multipliers[l].norm_squared();
            blocks[l] = fresh;
        }
        primal = Float::sqrt(primal_sq);
        dual = rho * Float::sqrt(dual_sq);
        if !primal.is_finite() || !dual.is_finite() {
            return Err(Error::Numerical(format!(
                "ADMM diverged at iteration {iters}: primal {primal:.3e}, dual {dual:.3e}, rho {rho:.3e}, objective {:.3e}",
                t[n - 1].re
            )));
        }
        history.push(ResidualSample { primal, dual, rho });

        let eps_pri = sqrt_count * opts.abs_tol
            + opts.rel_tol * Float::sqrt(q_norm_sq).max(Float::sqrt(b_norm_sq));
        let eps_dual = sqrt_count * opts.abs_tol + opts.rel_tol * rho * Float::sqrt(u_norm_sq);
        if primal <= eps_pri && dual <= eps_dual {
            converged = true;
            break;
        }

        if opts.adapt_rho {
            let next = adapt_rho(rho, primal, dual);
            if next != rho {
                // the scaled multipliers carry 1/rho; keep Lambda intact
                let scale = C64::new(rho / next, 0.0);
                for u in multipliers.iter_mut() {
                    *u *= scale;
                }
                rho = next;
            }
        }
    }

    let objective = t[n - 1].re;
    Ok(SolveResult {
        t: ConjSymVec::symmetrized(t)?,
        z,
        converged,
        iters,
        primal_residual: primal,
        dual_residual: dual,
        objective,
        history,
    })
}

/// The feasibility witness of the SLRA programs for an exact CA model: the
/// Toeplitz vector of `A_n diag(b) A_n^H` together with the steering
/// extension of the signal to length `2n - 1`. The assembled blocks are PSD
/// and the objective evaluates to the amplitude sum.
pub fn ca_witness(model: &SpectralModel, half_dim: usize) -> Result<(ConjSymVec, CMatrix)> {
    if half_dim < AdmmOptions::min_half_dim(model.num_samples()) {
        return Err(Error::InvalidParameter(format!(
            "half-dimension {half_dim} below minimum for {} samples",
            model.num_samples()
        )));
    }
    let t = crate::retrieval::toeplitz_from_atoms(model.frequencies(), model.amplitudes(), half_dim)?;
    let len = 2 * half_dim - 1;
    let a = crate::signal::steering_matrix(model.frequencies(), len);
    let k = model.order();
    let psi = CMatrix::from_fn(k, model.num_channels(), |r, c| {
        C64::from_polar(model.amplitudes()[r], model.phases()[(r, c)])
    });
    Ok((t, a * psi))
}
