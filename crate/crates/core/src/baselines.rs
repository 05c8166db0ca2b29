//! Atomic-norm baselines for head-to-head comparisons.
//!
//! Two programs over a length `2N - 1` Toeplitz vector:
//!
//! * multichannel ANM: minimize `(tr(T t) + tr(W)) / (2 sqrt(N))` subject to
//!   one PSD block `[[W, X^H], [X, T t]]` of size `N + L` — couples the
//!   channels only through shared frequencies;
//! * the intermediate formulation: minimize `tr(T t) / (2N) + w / 2` with a
//!   scalar `w` and one PSD block `[[w, X_l^H], [X_l, T t]]` of size `N + 1`
//!   per channel — per-channel blocks, but Toeplitz-only structure.
//!
//! Both reuse the consensus splitting of the main solver: PSD projection of
//! the block copies, closed-form `(X, W, t)` (resp. `(X, w, t)`) updates from
//! diagonal-sum adjoints, multiplier ascent, the same scaled-residual
//! stopping rule, and the same penalty rebalancing.

use alloc::format;
use alloc::vec::Vec;

use num_traits::Float;

use crate::signal::Observation;
use crate::solver::{adapt_rho, AdmmOptions, ResidualSample};
use crate::structured::{diagonal_weights, psd_project_raw, toeplitz_adjoint_raw, ConjSymVec, PSD_CLAMP_TOL};
use crate::{CMatrix, CVector, Error, Result, C64};

/// Data-fidelity mode shared by both baselines.
#[derive(Debug, Clone, Copy)]
pub enum Regularization {
    /// Pin the observed entries of `X` to the data (completion).
    Noiseless,
    /// Quadratic fidelity with trace weight `tau` (denoising).
    Denoising(f64),
}

impl Regularization {
    fn weight(&self) -> f64 {
        match self {
            Regularization::Noiseless => 1.0,
            Regularization::Denoising(tau) => *tau,
        }
    }

    fn validate(&self) -> Result<()> {
        if let Regularization::Denoising(tau) = self {
            if !(*tau > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "regularization parameter {tau} must be positive"
                )));
            }
        }
        Ok(())
    }
}

/// Multichannel-ANM optimizer and diagnostics.
#[derive(Debug, Clone)]
pub struct AnmResult {
    /// Toeplitz vector, length `2N - 1`.
    pub t: ConjSymVec,
    /// The `L x L` Hermitian coupling block.
    pub w: CMatrix,
    /// Recovered `N x L` signal matrix.
    pub x: CMatrix,
    pub converged: bool,
    pub iters: usize,
    pub primal_residual: f64,
    pub dual_residual: f64,
    /// `(tr(T t) + tr(W)) / (2 sqrt(N))`.
    pub objective: f64,
    pub history: Vec<ResidualSample>,
}

/// Intermediate-formulation optimizer and diagnostics.
#[derive(Debug, Clone)]
pub struct InterFormResult {
    /// Toeplitz vector, length `2N - 1`.
    pub t: ConjSymVec,
    /// Shared nonnegative scalar.
    pub w: f64,
    /// Recovered `N x L` signal matrix.
    pub x: CMatrix,
    pub converged: bool,
    pub iters: usize,
    pub primal_residual: f64,
    pub dual_residual: f64,
    /// `tr(T t) / (2N) + w / 2`.
    pub objective: f64,
    pub history: Vec<ResidualSample>,
}

fn resolve_rho(obs: &Observation, opts: &AdmmOptions) -> Result<f64> {
    let rho = opts
        .rho0
        .unwrap_or(1.0 / Float::sqrt(obs.num_samples() as f64));
    if !(rho > 0.0) || !(opts.abs_tol > 0.0) || !(opts.rel_tol > 0.0) || opts.max_iter == 0 {
        return Err(Error::InvalidParameter(
            "penalty and tolerances must be positive, max_iter nonzero".into(),
        ));
    }
    Ok(rho)
}

fn fill_toeplitz(out: &mut CMatrix, row0: usize, col0: usize, t: &CVector, n: usize) {
    for j in 0..n {
        for k in 0..n {
            out[(row0 + j, col0 + k)] = t[(n - 1 + k) - j];
        }
    }
}

/// Solves the multichannel ANM program.
pub fn anm_solve(obs: &Observation, reg: Regularization, opts: &AdmmOptions) -> Result<AnmResult> {
    reg.validate()?;
    let rho0 = resolve_rho(obs, opts)?;
    let mut rho = rho0;
    let n = obs.num_samples();
    let l = obs.num_channels();
    let len = 2 * n - 1;
    let dim = n + l;
    let d = diagonal_weights(n);
    let weight = reg.weight();
    let pinned = matches!(reg, Regularization::Noiseless);
    let sqrt_n = Float::sqrt(n as f64);

    let mut observed_row = alloc::vec![usize::MAX; n];
    for (row, &j) in obs.indices().iter().enumerate() {
        observed_row[j] = row;
    }
    let y = obs.values();

    let mut t = CVector::zeros(len);
    let mut w = CMatrix::zeros(l, l);
    let mut x = CMatrix::zeros(n, l);
    for j in 0..n {
        if observed_row[j] != usize::MAX {
            for c in 0..l {
                x[(j, c)] = y[(observed_row[j], c)];
            }
        }
    }
    let mut multiplier = CMatrix::zeros(dim, dim);

    let assemble = |w: &CMatrix, x: &CMatrix, t: &CVector| -> CMatrix {
        let mut out = CMatrix::zeros(dim, dim);
        out.view_mut((0, 0), (l, l)).copy_from(w);
        out.view_mut((l, 0), (n, l)).copy_from(x);
        out.view_mut((0, l), (l, n)).copy_from(&x.adjoint());
        fill_toeplitz(&mut out, l, l, t, n);
        out
    };

    let mut block = assemble(&w, &x, &t);
    let sqrt_count = dim as f64; // sqrt(dim^2)
    let mut history = Vec::new();
    let mut converged = false;
    let mut iters = 0;
    let (mut primal, mut dual) = (f64::NAN, f64::NAN);

    while iters < opts.max_iter {
        iters += 1;
        let projected = psd_project_raw(&(&block - &multiplier), PSD_CLAMP_TOL)?;
        let p = &projected + &multiplier;

        // X-update
        let p_x = p.view((l, 0), (n, l));
        for j in 0..n {
            let row = observed_row[j];
            for c in 0..l {
                x[(j, c)] = if row != usize::MAX {
                    if pinned {
                        y[(row, c)]
                    } else {
                        (y[(row, c)] + p_x[(j, c)] * C64::new(2.0 * rho, 0.0))
                            / C64::new(1.0 + 2.0 * rho, 0.0)
                    }
                } else {
                    p_x[(j, c)]
                };
            }
        }
        // W-update: Hermitian part of the top-left quadrant, diagonal shrunk
        let p_w = p.view((0, 0), (l, l)).into_owned();
        w = (&p_w + p_w.adjoint()) * C64::new(0.5, 0.0);
        let shrink = weight / (2.0 * sqrt_n * rho);
        for c in 0..l {
            w[(c, c)] -= C64::new(shrink, 0.0);
        }
        // t-update
        let p_t = p.view((l, l), (n, n)).into_owned();
        let adj = toeplitz_adjoint_raw(&p_t);
        let t_shrink = weight * sqrt_n / (2.0 * rho);
        for m in 0..len {
            let mut v = adj[m];
            if m == n - 1 {
                v -= C64::new(t_shrink, 0.0);
            }
            t[m] = v / C64::new(d[m], 0.0);
        }
        for m in 0..n - 1 {
            let avg = (t[m] + t[len - 1 - m].conj()) * C64::new(0.5, 0.0);
            t[m] = avg;
            t[len - 1 - m] = avg.conj();
        }
        t[n - 1] = C64::new(t[n - 1].re, 0.0);

        let fresh = assemble(&w, &x, &t);
        primal = (&projected - &fresh).norm();
        dual = rho * (&fresh - &block).norm();
        if !primal.is_finite() || !dual.is_finite() {
            return Err(Error::Numerical(format!(
                "ANM ADMM diverged at iteration {iters}: primal {primal:.3e}, dual {dual:.3e}, rho {rho:.3e}"
            )));
        }
        multiplier += &projected - &fresh;
        block = fresh;
        history.push(ResidualSample { primal, dual, rho });

        let eps_pri = sqrt_count * opts.abs_tol
            + opts.rel_tol * projected.norm().max(block.norm());
        let eps_dual = sqrt_count * opts.abs_tol + opts.rel_tol * rho * multiplier.norm();
        if primal <= eps_pri && dual <= eps_dual {
            converged = true;
            break;
        }
        if opts.adapt_rho {
            let next = adapt_rho(rho, primal, dual);
            if next != rho {
                multiplier *= C64::new(rho / next, 0.0);
                rho = next;
            }
        }
    }

    let objective = (n as f64 * t[n - 1].re
        + w.diagonal().iter().map(|c| c.re).sum::<f64>())
        / (2.0 * sqrt_n);
    Ok(AnmResult {
        t: ConjSymVec::symmetrized(t)?,
        w,
        x,
        converged,
        iters,
        primal_residual: primal,
        dual_residual: dual,
        objective,
        history,
    })
}

/// Solves the intermediate formulation.
pub fn interform_solve(
    obs: &Observation,
    reg: Regularization,
    opts: &AdmmOptions,
) -> Result<InterFormResult> {
    reg.validate()?;
    let rho0 = resolve_rho(obs, opts)?;
    let mut rho = rho0;
    let n = obs.num_samples();
    let l = obs.num_channels();
    let len = 2 * n - 1;
    let dim = n + 1;
    let d = diagonal_weights(n);
    let weight = reg.weight();
    let pinned = matches!(reg, Regularization::Noiseless);

    let mut observed_row = alloc::vec![usize::MAX; n];
    for (row, &j) in obs.indices().iter().enumerate() {
        observed_row[j] = row;
    }
    let y = obs.values();

    let mut t = CVector::zeros(len);
    let mut w = 0.0f64;
    let mut x = CMatrix::zeros(n, l);
    for j in 0..n {
        if observed_row[j] != usize::MAX {
            for c in 0..l {
                x[(j, c)] = y[(observed_row[j], c)];
            }
        }
    }
    let mut multipliers: Vec<CMatrix> = (0..l).map(|_| CMatrix::zeros(dim, dim)).collect();

    let assemble = |w: f64, x_col: &CVector, t: &CVector| -> CMatrix {
        let mut out = CMatrix::zeros(dim, dim);
        out[(0, 0)] = C64::new(w, 0.0);
        for j in 0..n {
            out[(1 + j, 0)] = x_col[j];
            out[(0, 1 + j)] = x_col[j].conj();
        }
        fill_toeplitz(&mut out, 1, 1, t, n);
        out
    };

    let mut blocks: Vec<CMatrix> = (0..l)
        .map(|c| assemble(w, &x.column(c).into_owned(), &t))
        .collect();
    let sqrt_count = Float::sqrt((l * dim * dim) as f64);
    let mut history = Vec::new();
    let mut converged = false;
    let mut iters = 0;
    let (mut primal, mut dual) = (f64::NAN, f64::NAN);

    while iters < opts.max_iter {
        iters += 1;
        let mut toeplitz_sum = CVector::zeros(len);
        let mut w_sum = 0.0f64;
        let mut projected: Vec<CMatrix> = Vec::with_capacity(l);
        for c in 0..l {
            let q = psd_project_raw(&(&blocks[c] - &multipliers[c]), PSD_CLAMP_TOL)?;
            let p = &q + &multipliers[c];
            w_sum += p[(0, 0)].re;
            let p_t = p.view((1, 1), (n, n)).into_owned();
            let adj = toeplitz_adjoint_raw(&p_t);
            for m in 0..len {
                toeplitz_sum[m] += adj[m];
            }
            // X column update from the first column of the block
            for j in 0..n {
                let row = observed_row[j];
                x[(j, c)] = if row != usize::MAX {
                    if pinned {
                        y[(row, c)]
                    } else {
                        (y[(row, c)] + p[(1 + j, 0)] * C64::new(2.0 * rho, 0.0))
                            / C64::new(1.0 + 2.0 * rho, 0.0)
                    }
                } else {
                    p[(1 + j, 0)]
                };
            }
            projected.push(q);
        }
        w = (w_sum - weight / (2.0 * rho)) / l as f64;
        let t_shrink = weight / (2.0 * rho);
        for m in 0..len {
            let mut v = toeplitz_sum[m];
            if m == n - 1 {
                v -= C64::new(t_shrink, 0.0);
            }
            t[m] = v / C64::new(l as f64 * d[m], 0.0);
        }
        for m in 0..n - 1 {
            let avg = (t[m] + t[len - 1 - m].conj()) * C64::new(0.5, 0.0);
            t[m] = avg;
            t[len - 1 - m] = avg.conj();
        }
        t[n - 1] = C64::new(t[n - 1].re, 0.0);

        let mut primal_sq = 0.0;
        let mut dual_sq = 0.0;
        let mut q_norm_sq = 0.0;
        let mut b_norm_sq = 0.0;
        let mut u_norm_sq = 0.0;
        for c in 0..l {
            let fresh = assemble(w, &x.column(c).into_owned(), &t);
            primal_sq += (&projected[c] - &fresh).norm_squared();
            dual_sq += (&fresh - &blocks[c]).norm_squared();
            q_norm_sq += projected[c].norm_squared();
            b_norm_sq += fresh.norm_squared();
            multipliers[c] += &projected[c] - &fresh;
            u_norm_sq += multipliers[c].norm_squared();
            blocks[c] = fresh;
        }
        primal = Float::sqrt(primal_sq);
        dual = rho * Float::sqrt(dual_sq);
        if !primal.is_finite() || !dual.is_finite() {
            return Err(Error::Numerical(format!(
                "intermediate-form ADMM diverged at iteration {iters}: primal {primal:.3e}, dual {dual:.3e}, rho {rho:.3e}"
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
                let scale = C64::new(rho / next, 0.0);
                for u in multipliers.iter_mut() {
                    *u *= scale;
                }
                rho = next;
            }
        }
    }

    let objective = 0.5 * t[n - 1].re + 0.5 * w;
    Ok(InterFormResult {
        t: ConjSymVec::symmetrized(t)?,
        w,
        x,
        converged,
        iters,
        primal_residual: primal,
        dual_residual: dual,
        objective,
        history,
    })
}
