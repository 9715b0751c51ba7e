//! Geodesics in the free step-2 rank-4 Carnot group.
//!
//! The group is `R^4 x Λ²R^4` with the step-2 law
//! `(x,t)·(ξ,τ) = (x+ξ, t+τ+½ x∧ξ)`. Length-extremals from the origin are
//! driven by controls `u(s) = e^{-sτ}ξ`, i.e. sums of two rotating plane
//! waves with angular parameters `φ₁ ≥ φ₂ ≥ 0`. This crate evaluates the
//! closed forms attached to those curves:
//!
//! - [`algebra`]: wedge products, the group law, Pfaffian, and the spectral
//!   decomposition / exponential of 4x4 skew-symmetric matrices;
//! - [`specfun`]: the sinc-like special functions `T, U, V, Z, F, G, H` and
//!   the quartic coefficients `A, B, D`, with series fallbacks at every
//!   removable singularity;
//! - [`extremal`]: extremal controls and trajectories in the raw, rotated
//!   and covector coordinate systems, plus the chart maps between them;
//! - [`conjugacy`]: conjugate-point detection through the matrices `M1`,
//!   `M2`, the full 10x10 differential of the exponential chart, and the
//!   quartic equation whose zeros are candidate cut times;
//! - [`cutlocus`]: the candidate cut-locus strata `Σ₁, Σ₂, Σ₃`, exact
//!   vertical distances and rational-ratio cut times;
//! - [`oracle`]: independent brute-force validators (fixed-step RK4,
//!   finite-difference Jacobians, combinatorial minimization);
//! - [`verify`]: the seeded property suites behind `carnot-geo verify`;
//! - [`cli`]: the command-line front end.
//!
//! Runnable demonstrations of each capability live under `examples/`.

pub mod algebra;
pub mod cli;
pub mod conjugacy;
pub mod cutlocus;
pub mod extremal;
pub mod oracle;
pub mod specfun;
pub mod verify;

pub use algebra::{Bivector4, GroupElement, Point4, SpectralData};
pub use conjugacy::ConjugacyReport;
pub use cutlocus::{CutStratum, CutTime};
pub use extremal::{Covector, ExtremalParams, FrameChart, Genericity};

/// Errors shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Input data violates a documented invariant (orthogonality, norms,
    /// parameter ordering, malformed JSON shapes).
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    /// An operation restricted to generic extremals was called on a
    /// degenerate one.
    #[error("extremal is not generic (classified {0:?})")]
    NonGeneric(Genericity),
    /// A covector lies outside the nondegenerate set (distinct nonzero
    /// eigenvalue pairs, nonvanishing plane projections).
    #[error("nondegeneracy violation: {0}")]
    NondegeneracyViolation(String),
    /// Argument outside an evaluator's admissible region.
    #[error("domain error: {0}")]
    Domain(String),
    /// A rational frequency-ratio certificate was required but missing or
    /// inconsistent with the parameters.
    #[error("irrational or uncertified frequency ratio: {0}")]
    IrrationalRatio(String),
    /// Integrator or scan configuration violates its invariants.
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
