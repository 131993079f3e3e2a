//! Evaluation of the wrapped normal probability density to a caller-chosen
//! accuracy.
//!
//! The wrapped normal density on the circle `[0, 2π)` has two classical series
//! representations:
//!
//! * the **wrapped sum** (`pdf_f`): a sum of Gaussian bumps at integer
//!   multiples of 2π, which converges fastest for small σ;
//! * the **theta sum** (`pdf_g`): a Fourier cosine series with coefficients
//!   `ρ^(k²)`, `ρ = exp(−σ²/2)`, which converges fastest for large σ and
//!   degrades gracefully to the uniform density `1/(2π)`.
//!
//! This crate provides both evaluators truncated at a chosen order, a
//! self-validating converged reference ([`series::pdf_reference`]), certified
//! truncation-error bounds with the truncation orders they imply
//! ([`bounds`]), and piecewise σ-threshold tables that pick the cheapest
//! sufficient series for a given accuracy ([`tables`]).

pub mod angle;
pub mod bounds;
pub mod kahan;
pub mod series;
pub mod special;
pub mod tables;

pub use angle::{wrap, Angle, WrappedNormal};
pub use bounds::{
    check_bound_dominates, plan_theoretical, required_orders, theta_sum_error_bound,
    wrapped_sum_error_bound, AccuracyTarget, BoundCheck, TruncationRequirement,
};
pub use kahan::KahanSum;
pub use series::{
    pdf_f, pdf_g, pdf_reference, pdf_uniform, truncation_error, worst_case_error, ErrorSample,
    EvalPlan, ReferenceValue, SeriesKind,
};
pub use special::{erfc_cf, erfc_envelope_gap, ErfArgument, DEFAULT_ERFC_DEPTH};
pub use tables::{builtin_table, crossover_search, plan_empirical, TableRow, ThresholdTable};

/// Errors reported by this crate.
#[derive(Debug, Clone, PartialEq)]
pub enum WnError {
    /// An argument violated a structural requirement (non-finite angle,
    /// zero continued-fraction depth, undersized grid, ...).
    InvalidArgument(String),
    /// A distribution parameter was rejected (σ ≤ 0, non-finite μ or σ).
    InvalidParameter(String),
    /// A special-function argument was outside the supported domain.
    OutOfDomain(String),
    /// An error-bound formula was queried outside the region where it is
    /// proven; the formula value would be meaningless there.
    BoundNotApplicable(String),
    /// The two converged series representations disagreed beyond tolerance.
    /// This signals an implementation bug, not bad input.
    InternalConsistency(String),
    /// A series failed to converge within the hard term cap.
    NonConvergence(String),
    /// No built-in threshold table exists for the requested accuracy.
    NoTable(String),
    /// A threshold table could not be assembled (no sufficient plan within
    /// the allowed order range somewhere in the σ range).
    TableConstruction(String),
}

impl std::fmt::Display for WnError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WnError::InvalidArgument(m) => write!(f, "invalid argument: {m}"),
            WnError::InvalidParameter(m) => write!(f, "invalid parameter: {m}"),
            WnError::OutOfDomain(m) => write!(f, "out of domain: {m}"),
            WnError::BoundNotApplicable(m) => write!(f, "bound not applicable: {m}"),
            WnError::InternalConsistency(m) => write!(f, "internal consistency: {m}"),
            WnError::NonConvergence(m) => write!(f, "non-convergence: {m}"),
            WnError::NoTable(m) => write!(f, "no built-in table: {m}"),
            WnError::TableConstruction(m) => write!(f, "table construction: {m}"),
        }
    }
}

impl std::error::Error for WnError {}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, WnError>;
