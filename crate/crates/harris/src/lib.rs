//! Harris family of discrete distributions.
//!
//! A Harris variable lives on the lattice `{origin, origin + k, origin + 2k, …}`
//! with `origin` either 1 (the classical form, PGF `s·(m − (m−1)s^k)^{−1/k}`)
//! or 0 (its shift). The lattice count `(X − origin)/k` is negative binomial
//! with success probability `1/m` and shape `1/k`, which is what makes exact
//! probabilities, the incomplete-beta distribution function, closed-form
//! moments, and gamma–Poisson samplers all available.
//!
//! ```
//! use harris::{Harris, Variant};
//!
//! let d = Harris::new(2.0, 2, Variant::H1).unwrap();
//! assert!((d.pmf(0) - 0.7071067811865476).abs() < 1e-15);
//! assert!((d.cdf(3.0) - 0.8838834764831844).abs() < 1e-12);
//! ```
//!
//! Modules: [`numerics`] (special-function kernels), [`dist`] (the
//! distribution itself), [`moments`], [`sampling`], [`estimation`],
//! [`stability`] (divisibility and random-sum checks), and [`gof`]
//! (chi-square / Kolmogorov–Smirnov helpers used to validate samplers).

#![forbid(unsafe_code)]
// Numeric tables keep every digit their source printed, and parameter
// guards are written `!(x > 0.0)` so that NaN fails them.
#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

use thiserror::Error;

pub mod dist;
pub mod estimation;
pub mod gof;
pub mod moments;
pub mod numerics;
pub mod sampling;
pub mod stability;

pub use dist::{Harris, NbParams, Variant};
pub use estimation::{FitResult, Method, Sample, SolverDiagnostics};
pub use numerics::Tolerance;
pub use sampling::RngStream;

/// Errors shared across the crate.
#[derive(Error, Debug, Clone, PartialEq)]
#[non_exhaustive]
pub enum Error {
    /// Argument outside a kernel's mathematical domain.
    #[error("domain error: {0}")]
    Domain(&'static str),

    /// Parameters that do not describe a Harris distribution.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Transform evaluated at or beyond its convergence boundary.
    #[error("mgf/cgf diverges: t = {t} is at or beyond the boundary {boundary}")]
    Divergence { t: f64, boundary: f64 },

    /// Finite-difference step that leaves the parameter space.
    #[error(
        "step too large: h = {h} exceeds the distance {remaining} from m to the boundary at 1"
    )]
    StepTooLarge { h: f64, remaining: f64 },

    /// Sample with fewer values than the operation needs.
    #[error("sample too small: need at least 2 values, got {0}")]
    SampleTooSmall(usize),

    /// All sample values equal; nothing to fit.
    #[error("degenerate sample: all values equal")]
    DegenerateSample,

    /// Sample mean at or below the support origin on the unit scale.
    #[error("mean at boundary: unit-scale mean {0} <= 1")]
    MeanAtBoundary(f64),

    /// Likelihood score has no sign change over the search bracket.
    #[error("no root in bracket [{lo:e}, {hi:e}]: score runs {score_lo:.6} .. {score_hi:.6}")]
    NoRootInBracket {
        lo: f64,
        hi: f64,
        score_lo: f64,
        score_hi: f64,
    },

    /// Likelihood score changes sign more than once; refusing to pick one.
    #[error("ambiguous root: {0} sign changes in the search bracket")]
    AmbiguousRoot(usize),

    /// Lattice inference needs at least one value above the origin.
    #[error("all values at origin; lattice spacing undefined")]
    AllAtOrigin,

    /// Series log/pow need a positive constant term.
    #[error("series has zero or negative constant term")]
    ZeroConstantTerm,
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
