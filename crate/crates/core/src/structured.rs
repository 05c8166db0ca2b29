//! Hankel and Toeplitz lifting operators, their adjoints, Hermitian
//! utilities, and the PSD-cone projection.
//!
//! Formulas in the estimation literature index vectors from 1; this module
//! stores everything 0-based. The offset shows up once: a conjugate-symmetric
//! vector `t` of length `2n - 1` has its real center at position `n - 1`, and
//! the lifted Toeplitz matrix is `M[j, k] = t[(n - 1) + k - j]`, the lifted
//! Hankel matrix `M[j, k] = x[j + k]`.
//!
//! All operations are pure functions on immutable inputs and safe to call
//! from any number of concurrent workers.

use alloc::format;
use alloc::vec::Vec;

use crate::{CMatrix, CVector, Error, Result, C64};

/// Relative tolerance for conjugate/Hermitian symmetry validation.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Default relative eigenvalue clamping tolerance for [`psd_project`].
pub const PSD_CLAMP_TOL: f64 = 1e-10;

/// Conjugate-symmetric vector of odd length `2n - 1`: the entry at position
/// `j` equals the conjugate of the entry at position `2n - 2 - j`, so the
/// center entry is real and the vector lifts to a Hermitian-Toeplitz matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ConjSymVec {
    entries: CVector,
}

impl ConjSymVec {
    /// Validates conjugate symmetry (within [`SYMMETRY_TOL`], relative to the
    /// largest entry) and wraps the vector.
    pub fn new(entries: CVector) -> Result<Self> {
        let len = entries.len();
        if len % 2 == 0 || len == 0 {
            return Err(Error::Dimension(format!(
                "conjugate-symmetric vector must have odd length, got {len}"
            )));
        }
        let scale = entries.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let tol = SYMMETRY_TOL * (1.0 + scale);
        for j in 0..len {
            let diff = (entries[j] - entries[len - 1 - j].conj()).norm();
            if diff > tol {
                return Err(Error::Invariant(format!(
                    "conjugate symmetry violated at index {j}: residual {diff:.3e} (tol {tol:.3e})"
                )));
            }
        }
        Ok(Self { entries })
    }

    /// Enforces conjugate symmetry by averaging mirrored entries. Used where
    /// floating-point drift may have accumulated (e.g. ADMM arithmetic).
    pub fn symmetrized(entries: CVector) -> Result<Self> {
        let len = entries.len();
        if len % 2 == 0 || len == 0 {
            return Err(Error::Dimension(format!(
                "conjugate-symmetric vector must have odd length, got {len}"
            )));
        }
        let mut out = entries.clone();
        for j in 0..len {
            out[j] = (entries[j] + entries[len - 1 - j].conj()) * C64::new(0.5, 0.0);
        }
        Ok(Self { entries: out })
    }

    /// The zero vector of half-dimension `n`.
    pub fn zeros(half_dim: usize) -> Self {
        Self {
            entries: CVector::zeros(2 * half_dim - 1),
        }
    }

    /// The unit impulse at the center: all zeros except a one at position
    /// `n - 1`. Lifts to the identity matrix.
    pub fn unit_center(half_dim: usize) -> Self {
        let mut entries = CVector::zeros(2 * half_dim - 1);
        entries[half_dim - 1] = C64::new(1.0, 0.0);
        Self { entries }
    }

    /// Half-dimension `n`; the vector has length `2n - 1`.
    pub fn half_dim(&self) -> usize {
        (self.entries.len() + 1) / 2
    }

    /// Vector length `2n - 1`.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// True only for the degenerate case, which cannot be constructed.
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Underlying entries.
    pub fn entries(&self) -> &CVector {
        &self.entries
    }

    /// The (real) center entry `t[n - 1]`; equals `tr(Tt) / n`.
    pub fn center(&self) -> f64 {
        self.entries[self.half_dim() - 1].re
    }

    /// Entry-wise complex conjugate (also conjugate-symmetric).
    pub fn conjugated(&self) -> Self {
        Self {
            entries: self.entries.map(|c| c.conj()),
        }
    }

    /// Scales all entries by a real factor.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            entries: &self.entries * C64::new(factor, 0.0),
        }
    }
}

/// Dense Hermitian matrix, validated on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    entries: CMatrix,
}

impl HermitianMatrix {
    /// Validates Hermitian symmetry within [`SYMMETRY_TOL`] relative to the
    /// Frobenius norm.
    pub fn new(entries: CMatrix) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::Dimension(format!(
                "Hermitian matrix must be square, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let asym = (&entries - entries.adjoint()).norm();
        let tol = SYMMETRY_TOL * (1.0 + entries.norm());
        if asym > tol {
            return Err(Error::Invariant(format!(
                "Hermitian symmetry violated: residual {asym:.3e} (tol {tol:.3e})"
            )));
        }
        Ok(Self { entries })
    }

    /// Enforces symmetry as `(M + M^H) / 2`.
    pub fn symmetrized(entries: CMatrix) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::Dimension(format!(
                "Hermitian matrix must be square, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let sym = (&entries + entries.adjoint()) * C64::new(0.5, 0.0);
        Ok(Self { entries: sym })
    }

    /// Side length.
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// Underlying matrix.
    pub fn matrix(&self) -> &CMatrix {
        &self.entries
    }

    /// Consumes the wrapper.
    pub fn into_matrix(self) -> CMatrix {
        self.entries
    }
}

/// Anti-diagonal/diagonal multiplicities `d = [1, 2, ..., n, ..., 2, 1]` of
/// length `2n - 1`: `d[m]` counts how often entry `m` of a vector appears in
/// its Hankel (or Toeplitz) lift.
pub fn diagonal_weights(half_dim: usize) -> Vec<f64> {
    let len = 2 * half_dim - 1;
    (0..len)
        .map(|m| (half_dim as isize - (m as isize - (half_dim as isize - 1)).abs()) as f64)
        .collect()
}

/// Lifts a vector of odd length `2n - 1` to the `n x n` Hankel matrix
/// `M[j, k] = x[j + k]` (constant anti-diagonals).
pub fn hankel_lift(x: &CVector) -> Result<CMatrix> {
    let len = x.len();
    if len % 2 == 0 || len == 0 {
        return Err(Error::Dimension(format!(
            "Hankel lift needs odd input length, got {len}"
        )));
    }
    let n = (len + 1) / 2;
    Ok(CMatrix::from_fn(n, n, |j, k| x[j + k]))
}

/// Adjoint of the Hankel lift: anti-diagonal sums, so that
/// `<hankel_lift(x), M> = <x, hankel_adjoint(M)>`.
pub fn hankel_adjoint(m: &CMatrix) -> Result<CVector> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "Hankel adjoint needs a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let n = m.nrows();
    let mut out = CVector::zeros(2 * n - 1);
    for j in 0..n {
        for k in 0..n {
            out[j + k] += m[(j, k)];
        }
    }
    Ok(out)
}

/// Lifts a conjugate-symmetric vector to the `n x n` Hermitian-Toeplitz
/// matrix `M[j, k] = t[(n - 1) + k - j]`; the main diagonal is the center
/// entry.
pub fn toeplitz_lift(t: &ConjSymVec) -> HermitianMatrix {
    let n = t.half_dim();
    let e = t.entries();
    let m = CMatrix::from_fn(n, n, |j, k| e[(n - 1 + k) - j]);
    // Hermitian by construction from the conjugate symmetry of t.
    HermitianMatrix { entries: m }
}

/// Adjoint of the Toeplitz lift: diagonal sums, so that
/// `<toeplitz_lift(t), M> = <t, toeplitz_adjoint(M)>` for Hermitian `M`.
/// The output is conjugate-symmetric because the input is Hermitian.
pub fn toeplitz_adjoint(m: &HermitianMatrix) -> ConjSymVec {
    let v = toeplitz_adjoint_raw(m.matrix());
    // Hermitian input makes the diagonal sums conjugate-symmetric up to
    // rounding; symmetrize to keep the invariant exact.
    ConjSymVec::symmetrized(v).expect("odd length by construction")
}

/// Diagonal sums of an arbitrary square matrix (no symmetry assumed):
/// entry `m` sums `M[j, k]` over `k - j = m - (n - 1)`.
pub fn toeplitz_adjoint_raw(m: &CMatrix) -> CVector {
    let n = m.nrows();
    let mut out = CVector::zeros(2 * n - 1);
    for j in 0..n {
        for k in 0..n {
            out[n - 1 + k - j] += m[(j, k)];
        }
    }
    out
}

/// Orthogonal projection onto the PSD cone with the default clamping
/// tolerance [`PSD_CLAMP_TOL`].
pub fn psd_project(m: &HermitianMatrix) -> Result<HermitianMatrix> {
    psd_project_with_tol(m, PSD_CLAMP_TOL)
}

/// Orthogonal projection onto the PSD cone: eigendecompose, zero all
/// eigenvalues below `tol` times the spectral norm, reassemble. This is the
/// nearest PSD matrix in Frobenius norm (exactly so for `tol = 0`).
///
/// The input is re-symmetrized as `(M + M^H) / 2` before decomposition to
/// neutralize accumulated floating-point asymmetry.
pub fn psd_project_with_tol(m: &HermitianMatrix, tol: f64) -> Result<HermitianMatrix> {
    let out = psd_project_raw(m.matrix(), tol)?;
    HermitianMatrix::symmetrized(out)
}

/// Unwrapped PSD projection for solver inner loops: symmetrizes, clamps,
/// reassembles. The output is Hermitian up to rounding.
pub(crate) fn psd_project_raw(m: &CMatrix, tol: f64) -> Result<CMatrix> {
    let sym = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let dim = sym.nrows();
    let norm = sym.norm();
    let eig = sym
        .try_symmetric_eigen(f64::EPSILON, eigen_iteration_cap(dim))
        .ok_or_else(|| {
            Error::Numerical(format!(
                "eigendecomposition failed for {dim}x{dim} Hermitian matrix with Frobenius norm {norm:.3e}"
            ))
        })?;
    let spectral = eig.eigenvalues.iter().fold(0.0f64, |a, &l| a.max(l.abs()));
    let clamp = tol * spectral;
    let mut out = CMatrix::zeros(dim, dim);
    for (idx, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda > clamp {
            let v = eig.eigenvectors.column(idx);
            // out += lambda * v v^H
            let scaled = v * C64::new(lambda, 0.0);
            out.gerc(C64::new(1.0, 0.0), &scaled, &v.clone_owned(), C64::new(1.0, 0.0));
        }
    }
    Ok(out)
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &HermitianMatrix) -> Result<Vec<f64>> {
    let sym = (m.matrix() + m.matrix().adjoint()) * C64::new(0.5, 0.0);
    let dim = sym.nrows();
    let eig = sym
        .try_symmetric_eigen(f64::EPSILON, eigen_iteration_cap(dim))
        .ok_or_else(|| Error::Numerical(format!("eigendecomposition failed for {dim}x{dim} matrix")))?;
    let mut vals: Vec<f64> = eig.eigenvalues.iter().cloned().collect();
    vals.sort_by(|a, b| a.partial_cmp(b).expect("eigenvalues are finite"));
    Ok(vals)
}

// QR-with-shifts needs a handful of sweeps per eigenvalue; this cap only
// trips on genuinely stuck decompositions.
fn eigen_iteration_cap(dim: usize) -> usize {
    100 * dim + 1000
}

/// One Hankel-Toeplitz block before assembly: a Toeplitz vector `t` shared
/// across channels and one channel's Hankel vector (a column of `Z`).
#[derive(Debug, Clone)]
pub struct HtBlock {
    pub toeplitz_part: ConjSymVec,
    pub hankel_column: CVector,
}

impl HtBlock {
    pub fn new(toeplitz_part: ConjSymVec, hankel_column: CVector) -> Result<Self> {
        if hankel_column.len() != toeplitz_part.len() {
            return Err(Error::Dimension(format!(
                "Hankel column length {} does not match Toeplitz vector length {}",
                hankel_column.len(),
                toeplitz_part.len()
            )));
        }
        Ok(Self {
            toeplitz_part,
            hankel_column,
        })
    }
}

/// Assembles the `2n x 2n` Hermitian block
/// `[[T conj(t), (H z)^H], [H z, T t]]`: the conjugated Toeplitz lift sits
/// top-left, the Toeplitz lift bottom-right, the Hankel lift of the channel
/// column bottom-left and its conjugate transpose top-right.
pub fn assemble_block(block: &HtBlock) -> HermitianMatrix {
    let n = block.toeplitz_part.half_dim();
    let t_lower = toeplitz_lift(&block.toeplitz_part);
    let t_upper = toeplitz_lift(&block.toeplitz_part.conjugated());
    let h = hankel_lift(&block.hankel_column).expect("lengths validated at construction");
    let mut out = CMatrix::zeros(2 * n, 2 * n);
    out.view_mut((0, 0), (n, n)).copy_from(t_upper.matrix());
    out.view_mut((n, n), (n, n)).copy_from(t_lower.matrix());
    out.view_mut((n, 0), (n, n)).copy_from(&h);
    out.view_mut((0, n), (n, n)).copy_from(&h.adjoint());
    // Hermitian by construction: Toeplitz blocks are Hermitian and the
    // off-diagonal blocks are mutual adjoints.
    HermitianMatrix { entries: out }
}

/// Block assembly on raw vectors for solver inner loops; `t` is assumed
/// conjugate-symmetric.
pub(crate) fn assemble_block_raw(t: &CVector, z: &CVector) -> CMatrix {
    let n = (t.len() + 1) / 2;
    let mut out = CMatrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        for k in 0..n {
            let tv = t[(n - 1 + k) - j];
            out[(j, k)] = tv.conj();
            out[(n + j, n + k)] = tv;
            let hv = z[j + k];
            out[(n + j, k)] = hv;
            out[(j, n + k)] = hv.conj();
        }
    }
    out
}

/// The four quadrants of a split `2n x 2n` block, named after their roles in
/// the assembled Hankel-Toeplitz matrix: `top_left` holds the conjugated
/// Toeplitz part, `bottom_right` the Toeplitz part, and `bottom_left` the
/// Hankel part (the top-right quadrant is its adjoint and is not stored).
#[derive(Debug, Clone)]
pub struct BlockQuadrants {
    pub top_left: CMatrix,
    pub bottom_right: CMatrix,
    pub bottom_left: CMatrix,
}

/// Splits a `2n x 2n` matrix into its quadrants. Errors when the dimension
/// is odd.
pub fn split_block(m: &CMatrix) -> Result<BlockQuadrants> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "block split needs a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let dim = m.nrows();
    if dim % 2 != 0 {
        return Err(Error::Dimension(format!(
            "block split needs an even dimension, got {dim}"
        )));
    }
    let n = dim / 2;
    Ok(BlockQuadrants {
        top_left: m.view((0, 0), (n, n)).into_owned(),
        bottom_right: m.view((n, n), (n, n)).into_owned(),
        bottom_left: m.view((n, 0), (n, n)).into_owned(),
    })
}
