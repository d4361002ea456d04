//! Error type shared by every module of the crate.
//!
//! The kebab-case prefixes in the messages (`ml-divergence`,
//! `invalid-jacobi-exponent`, ...) are part of the user-facing contract;
//! the CLI surfaces them verbatim.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// The Mittag-Leffler evaluation exhausted its term budget or no
    /// branch reached an acceptable error estimate.
    #[error("ml-divergence: E_{{{alpha}, {beta}}} at |z| = {z_abs:.6e} (best error estimate {estimate:.3e})")]
    MlDivergence {
        alpha: f64,
        beta: f64,
        z_abs: f64,
        estimate: f64,
    },

    /// Matrix evaluation failed on both the spectral and the series route.
    #[error("ml-matrix-failure: dim {dim} matrix, spectral path unusable and series did not converge")]
    MlMatrixFailure { dim: usize },

    #[error("invalid-jacobi-exponent: a = {a}, b = {b} (both must be finite and > -1)")]
    InvalidJacobiExponent { a: f64, b: f64 },

    #[error("out-of-range: t = {t:.6e} outside ({min:.6e}, {max:.6e}]")]
    OutOfRange { t: f64, min: f64, max: f64 },

    #[error("non-integrable-singularity: leading exponent {p} <= -1")]
    NonIntegrableSingularity { p: f64 },

    #[error("invalid-order: alpha = {alpha} must lie strictly in (1, 2)")]
    InvalidOrder { alpha: f64 },

    /// Doubling the quadrature order moved the corner integral by more
    /// than 10% of the check tolerance.
    #[error("corner-quadrature-unconverged: refinement changed the corner term by {change:.3e} (> 10% of tolerance {tolerance:.3e})")]
    CornerQuadratureUnconverged { change: f64, tolerance: f64 },

    #[error("limit-unstable: {detail}")]
    LimitUnstable { detail: String },

    #[error("different-generators: recovered generators differ by {distance:.3e} (bound {bound:.3e})")]
    DifferentGenerators { distance: f64, bound: f64 },

    #[error("tail-too-heavy: Laplace tail estimate {estimate:.3e} exceeds budget {budget:.3e}")]
    TailTooHeavy { estimate: f64, budget: f64 },

    #[error("invalid-input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
