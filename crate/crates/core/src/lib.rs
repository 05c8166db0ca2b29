//! Gridless frequency estimation for constant-amplitude (CA) multichannel
//! sinusoids.
//!
//! A CA signal is a superposition of complex sinusoids whose amplitudes are
//! shared across channels while the phases vary per channel. This crate
//! estimates the sinusoid frequencies from complete or subsampled, possibly
//! noisy, measurements by solving a convex structured low-rank approximation
//! (SLRA): the trace of a shared Hermitian-Toeplitz matrix is minimized
//! subject to one positive-semidefinite Hankel-Toeplitz block constraint per
//! channel. The program is solved with a consensus ADMM whose per-iteration
//! cost is dominated by the per-channel eigendecompositions, and frequencies
//! are read off the optimized Toeplitz matrix by a Vandermonde decomposition
//! computed with root-MUSIC.
//!
//! Module map:
//!
//! * [`structured`] — Hankel/Toeplitz lifting operators, their adjoints, and
//!   the PSD-cone projection.
//! * [`signal`] — CA signal synthesis, observation masking, noise, and the
//!   wrapped-frequency evaluation metrics.
//! * [`solver`] — the ADMM solver for the completion and denoising SLRA
//!   programs, and the SLRA value functional.
//! * [`retrieval`] — rank estimation, root-MUSIC Vandermonde decomposition,
//!   and amplitude/phase recovery.
//! * [`dual`] — the dual atomic norm, dual-certificate checks, and the
//!   closed-form regularization parameter for the noisy case.
//! * [`baselines`] — atomic-norm baselines that do not (fully) exploit the
//!   CA structure, solved with the same splitting machinery.
//!
//! The crate is `no_std`-compatible (requires `alloc`); disable the default
//! `std` feature for embedded or sandboxed use.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod baselines;
pub mod dual;
mod error;
mod nnls;
mod poly;
pub mod retrieval;
pub mod signal;
pub mod solver;
pub mod structured;

pub use error::{Error, Result};

/// Complex scalar used throughout the crate.
pub type C64 = num_complex::Complex64;

/// Dense complex matrix used throughout the crate.
pub type CMatrix = nalgebra::DMatrix<C64>;

/// Dense complex column vector used throughout the crate.
pub type CVector = nalgebra::DVector<C64>;
