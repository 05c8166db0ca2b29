use alloc::string::String;

/// Crate-wide result type.
pub type Result<T> = core::result::Result<T, Error>;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Input shapes do not match the operator's requirements.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A structural invariant (conjugate symmetry, Hermitian symmetry,
    /// index ordering, ...) is violated beyond tolerance.
    #[error("invariant violated: {0}")]
    Invariant(String),

    /// A scalar parameter is outside its admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An iterative numerical procedure failed (eigensolver breakdown,
    /// diverging residuals, ...). The message carries diagnostics.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// The noise-subspace polynomial does not expose enough admissible
    /// roots for the requested model order.
    #[error("degenerate spectrum: {0}")]
    DegenerateSpectrum(String),

    /// A least-squares system is too ill-conditioned to invert reliably,
    /// typically due to near-duplicate frequency estimates.
    #[error("ill-conditioned system: {0}")]
    IllConditioned(String),

    /// No rank-deficient SLRA solution exists up to the maximum block
    /// dimension: the signal's frequencies are not identifiable.
    #[error("unidentifiable signal: {0}")]
    Unidentifiable(String),
}
