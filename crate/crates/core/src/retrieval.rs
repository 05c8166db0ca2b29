//! Frequency retrieval from the optimized Toeplitz matrix: numerical rank
//! estimation, Vandermonde decomposition via root-MUSIC, amplitude/phase
//! recovery from the extended signal matrix, and the identifiability sweep
//! that grows the block dimension until the solution becomes rank-deficient.

use alloc::format;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_traits::Float;

use crate::nnls::nnls;
use crate::poly::polynomial_roots;
use crate::signal::steering_matrix;
use crate::solver::{slra_solve, AdmmOptions, SolveResult};
use crate::structured::{diagonal_weights, toeplitz_adjoint_raw, toeplitz_lift, ConjSymVec};
use crate::{CMatrix, CVector, Error, Result, C64};

/// Default relative eigenvalue threshold for [`estimate_rank`].
pub const RANK_EPS: f64 = 1e-3;

const TAU: f64 = core::f64::consts::TAU;

/// Retrieved frequencies with their Toeplitz powers and, when recovered,
/// per-channel phases.
#[derive(Debug, Clone)]
pub struct FrequencyEstimate {
    /// Frequencies on the torus, sorted ascending.
    pub frequencies: Vec<f64>,
    /// Powers of the Vandermonde decomposition (the shared amplitudes).
    pub powers: Vec<f64>,
    /// Optional per-channel phases (`order x L`, radians).
    pub phases: Option<DMatrix<f64>>,
}

impl FrequencyEstimate {
    pub fn empty() -> Self {
        Self {
            frequencies: Vec::new(),
            powers: Vec::new(),
            phases: None,
        }
    }

    /// Estimated model order.
    pub fn order(&self) -> usize {
        self.frequencies.len()
    }
}

/// Amplitudes and phases recovered from the signal matrix, with the
/// per-component spread of the per-channel moduli as a constant-amplitude
/// fidelity diagnostic.
#[derive(Debug, Clone)]
pub struct GainEstimate {
    /// Per-component amplitude: mean over channels of the recovered moduli.
    pub amplitudes: Vec<f64>,
    /// Per-channel phases (`order x L`, radians).
    pub phases: DMatrix<f64>,
    /// Per-component `max_l |C| - min_l |C|`; zero for exact CA data.
    pub modulus_spread: Vec<f64>,
}

/// Numerical rank of the lifted Toeplitz matrix: the number of eigenvalues
/// exceeding `eps` times the largest one.
pub fn estimate_rank(t: &ConjSymVec, eps: f64) -> Result<usize> {
    let evs = crate::structured::hermitian_eigenvalues(&toeplitz_lift(t))?;
    let top = *evs.last().expect("nonempty spectrum");
    if top <= 0.0 {
        return Ok(0);
    }
    Ok(evs.iter().filter(|&&l| l > eps * top).count())
}

/// The Toeplitz vector of `A_n diag(p) A_n^H`: the construct side of the
/// Vandermonde decomposition, used as the round-trip oracle for
/// [`vandermonde_decompose`] and to build feasibility witnesses.
pub fn toeplitz_from_atoms(frequencies: &[f64], powers: &[f64], half_dim: usize) -> Result<ConjSymVec> {
    if frequencies.len() != powers.len() {
        return Err(Error::Dimension(format!(
            "{} powers for {} frequencies",
            powers.len(),
            frequencies.len()
        )));
    }
    if half_dim == 0 {
        return Err(Error::InvalidParameter("half-dimension must be positive".into()));
    }
    let len = 2 * half_dim - 1;
    let mut entries = CVector::zeros(len);
    for m in 0..len {
        let lag = half_dim as f64 - 1.0 - m as f64;
        for (f, p) in frequencies.iter().zip(powers.iter()) {
            entries[m] += C64::from_polar(*p, TAU * f * lag);
        }
    }
    ConjSymVec::symmetrized(entries)
}

/// Vandermonde decomposition of the lifted Toeplitz matrix by root-MUSIC.
///
/// The noise subspace spans the eigenvectors of the `n - order` smallest
/// eigenvalues; the diagonal sums of its projector form a degree `2(n - 1)`
/// polynomial whose roots pair up across the unit circle. The `order` roots
/// strictly inside and closest to the circle give the frequencies; the
/// powers follow from a nonnegative least-squares fit of the Toeplitz
/// entries against the single-atom Toeplitz vectors.
pub fn vandermonde_decompose(t: &ConjSymVec, order: usize) -> Result<FrequencyEstimate> {
    let n = t.half_dim();
    if order >= n {
        return Err(Error::InvalidParameter(format!(
            "order {order} must be below the half-dimension {n}"
        )));
    }
    if order == 0 {
        return Ok(FrequencyEstimate::empty());
    }
    let lifted = toeplitz_lift(t);
    let eig = lifted
        .matrix()
        .clone()
        .try_symmetric_eigen(f64::EPSILON, 100 * n + 1000)
        .ok_or_else(|| Error::Numerical(format!("eigendecomposition failed for {n}x{n} Toeplitz")))?;
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .expect("finite eigenvalues")
    });

    // noise-subspace projector
    let mut projector = CMatrix::zeros(n, n);
    for &i in idx.iter().take(n - order) {
        let v = eig.eigenvectors.column(i).clone_owned();
        projector.gerc(C64::new(1.0, 0.0), &v, &v, C64::new(1.0, 0.0));
    }

    let coeffs = toeplitz_adjoint_raw(&projector);
    let coeff_slice: Vec<C64> = coeffs.iter().cloned().collect();
    let roots = polynomial_roots(&coeff_slice);

    // The polynomial is conjugate-reciprocal: roots come in (z, 1/conj(z))
    // pairs with equal angles. Greedily match each root with its partner and
    // keep the pair member nearest the unit circle, so that the signal roots
    // survive even when rounding pushes both members to the same side.
    let mut used = alloc::vec![false; roots.len()];
    let mut candidates: Vec<C64> = Vec::new();
    for i in 0..roots.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let zi = roots[i];
        let mut best_partner = None;
        if zi.norm() > 1e-8 {
            let target = C64::new(1.0, 0.0) / zi.conj();
            let mut best_dist = f64::INFINITY;
            for (j, &zj) in roots.iter().enumerate() {
                if !used[j] {
                    let dist = (zj - target).norm();
                    if dist < best_dist {
                        best_dist = dist;
                        best_partner = Some(j);
                    }
                }
            }
        }
        let candidate = match best_partner {
            Some(j) => {
                used[j] = true;
                let zj = roots[j];
                if Float::abs(1.0 - zj.norm()) < Float::abs(1.0 - zi.norm()) {
                    zj
                } else {
                    zi
                }
            }
            None => zi,
        };
        candidates.push(candidate);
    }
    candidates.sort_by(|a, b| {
        Float::abs(1.0 - a.norm())
            .partial_cmp(&Float::abs(1.0 - b.norm()))
            .expect("finite root moduli")
    });

    // one frequency per pair; coinciding angles signal a degenerate spectrum
    let mut frequencies: Vec<f64> = Vec::with_capacity(order);
    for z in &candidates {
        let f = {
            let f = z.arg() / TAU;
            if f >= 0.5 {
                f - 1.0
            } else {
                f
            }
        };
        if frequencies
            .iter()
            .all(|&g| crate::signal::wrapped_distance(f, g) > 1e-12)
        {
            frequencies.push(f);
        }
        if frequencies.len() == order {
            break;
        }
    }
    if frequencies.len() < order {
        return Err(Error::DegenerateSpectrum(format!(
            "only {} admissible roots for order {order}",
            frequencies.len()
        )));
    }
    frequencies.sort_by(|a, b| a.partial_cmp(b).expect("finite frequencies"));

    // powers: weighted NNLS fit of t against the atom Toeplitz vectors,
    // with the diagonal multiplicities restoring the matrix-space metric
    let len = 2 * n - 1;
    let d = diagonal_weights(n);
    let mut design = DMatrix::zeros(2 * len, order);
    let mut rhs = DVector::zeros(2 * len);
    for m in 0..len {
        let w = Float::sqrt(d[m]);
        let lag = n as f64 - 1.0 - m as f64;
        for (k, f) in frequencies.iter().enumerate() {
            let atom = C64::from_polar(1.0, TAU * f * lag);
            design[(m, k)] = w * atom.re;
            design[(len + m, k)] = w * atom.im;
        }
        rhs[m] = w * t.entries()[m].re;
        rhs[len + m] = w * t.entries()[m].im;
    }
    let powers_vec = nnls(&design, &rhs);
    let powers: Vec<f64> = (0..order).map(|k| powers_vec[k]).collect();

    Ok(FrequencyEstimate {
        frequencies,
        powers,
        phases: None,
    })
}

/// Recovers amplitudes and phases from the first `N` rows of the extended
/// signal matrix: `C = pinv(A(f_hat)) z_rows`, amplitudes as the channel
/// means of `|C|`, phases as `arg(C)`. The per-component modulus spread is
/// reported as a constant-amplitude fidelity diagnostic.
pub fn recover_gains(z_rows: &CMatrix, f_hat: &[f64]) -> Result<GainEstimate> {
    let order = f_hat.len();
    let num_samples = z_rows.nrows();
    let channels = z_rows.ncols();
    if order == 0 {
        return Ok(GainEstimate {
            amplitudes: Vec::new(),
            phases: DMatrix::zeros(0, channels),
            modulus_spread: Vec::new(),
        });
    }
    if order > num_samples {
        return Err(Error::Dimension(format!(
            "{order} frequencies exceed the {num_samples} signal rows"
        )));
    }
    let a = steering_matrix(f_hat, num_samples);
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.iter().fold(0.0f64, |acc, &s| acc.max(s));
    let smin = svd.singular_values.iter().fold(f64::INFINITY, |acc, &s| acc.min(s));
    if !(smin > 1e-10 * smax) {
        return Err(Error::IllConditioned(format!(
            "steering matrix condition {:.3e} (near-duplicate frequencies)",
            smax / smin
        )));
    }
    let coeffs = svd
        .solve(z_rows, 0.0)
        .map_err(|e| Error::Numerical(format!("least squares solve: {e}")))?;

    let mut amplitudes = Vec::with_capacity(order);
    let mut modulus_spread = Vec::with_capacity(order);
    let mut phases = DMatrix::zeros(order, channels);
    for k in 0..order {
        let mut sum = 0.0;
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for l in 0..channels {
            let c = coeffs[(k, l)];
            let m = c.norm();
            sum += m;
            lo = lo.min(m);
            hi = hi.max(m);
            phases[(k, l)] = c.arg();
        }
        amplitudes.push(sum / channels as f64);
        modulus_spread.push(hi - lo);
    }
    Ok(GainEstimate {
        amplitudes,
        phases,
        modulus_spread,
    })
}

/// Options for [`identifiability_sweep`].
#[derive(Debug, Clone)]
pub struct SweepOptions {
    /// Largest half-dimension to try; `None` selects `2N - 1`.
    pub max_half_dim: Option<usize>,
    /// Relative rank threshold handed to [`estimate_rank`].
    pub rank_eps: f64,
    /// Solver options for each inner completion solve (its `half_dim` is
    /// overridden by the sweep).
    pub admm: AdmmOptions,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            max_half_dim: None,
            rank_eps: RANK_EPS,
            admm: AdmmOptions::default(),
        }
    }
}

/// Result of a successful identifiability sweep.
#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub estimate: FrequencyEstimate,
    /// Half-dimension at which the solution became rank-deficient.
    pub half_dim: usize,
    /// The accepted solve.
    pub solve: SolveResult,
}

/// Grows the block half-dimension from `ceil((N + 1) / 2)` until the
/// completion solution's Toeplitz matrix is numerically rank-deficient, then
/// decomposes it. Errors with [`Error::Unidentifiable`] when every
/// half-dimension up to the cap yields a full-rank solution.
pub fn identifiability_sweep(x: &CMatrix, opts: &SweepOptions) -> Result<SweepOutcome> {
    let num_samples = x.nrows();
    let n_min = AdmmOptions::min_half_dim(num_samples);
    let n_max = opts.max_half_dim.unwrap_or(2 * num_samples - 1);
    if n_max < n_min {
        return Err(Error::InvalidParameter(format!(
            "maximum half-dimension {n_max} below minimum {n_min}"
        )));
    }
    for half_dim in n_min..=n_max {
        let solve = slra_solve(x, half_dim, &opts.admm)?;
        let rank = estimate_rank(&solve.t, opts.rank_eps)?;
        if rank < half_dim {
            let estimate = vandermonde_decompose(&solve.t, rank)?;
            return Ok(SweepOutcome {
                estimate,
                half_dim,
                solve,
            });
        }
    }
    Err(Error::Unidentifiable(format!(
        "no rank-deficient completion up to half-dimension {n_max}"
    )))
}
