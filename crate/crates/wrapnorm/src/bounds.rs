//! Closed-form tail bounds for both series and the truncation orders they
//! certify.
//!
//! Each bound dominates the corresponding series' truncation error whenever
//! its precondition on `(n, σ)` holds, so solving `bound ≤ ẽ` for `n` yields
//! an order guaranteed to meet an accuracy target `ẽ` without measuring
//! anything. The bounds are deliberately loose (they buy a closed form), so
//! the orders they certify can exceed the empirically minimal ones.

use std::f64::consts::{PI, SQRT_2};

use crate::series::{validate_sigma, worst_case_error, EvalPlan, SeriesKind};
use crate::{Result, WnError};

/// Grid resolution used when a bound is checked against a measured error.
const DOMINATION_GRID: u32 = 4096;

/// A requested accuracy `ẽ`, restricted to `(0, 1)`.
///
/// Zero is unreachable by any truncation and values ≥ 1 are meaningless for
/// a density bounded by its own scale, so both are rejected up front.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccuracyTarget {
    value: f64,
}

impl AccuracyTarget {
    /// Validate an accuracy target.
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() || value <= 0.0 || value >= 1.0 {
            return Err(WnError::InvalidArgument(format!(
                "accuracy target must lie strictly between 0 and 1, got {value}"
            )));
        }
        Ok(AccuracyTarget { value })
    }

    /// The target as a plain number.
    pub fn value(self) -> f64 {
        self.value
    }
}

/// Real-valued truncation orders certified by the closed-form bounds; the
/// usable integer order is the ceiling of either field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationRequirement {
    /// Order at which the wrapped-sum bound reaches the target.
    pub n_f: f64,
    /// Order at which the theta-sum bound reaches the target.
    pub n_g: f64,
}

/// Result of comparing a closed-form bound against a measured worst-case
/// error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundCheck {
    /// The closed-form bound.
    pub bound: f64,
    /// The measured worst-case error over the check grid.
    pub measured: f64,
    /// Whether the bound dominates the measurement.
    pub ok: bool,
}

/// Tail bound for the wrapped sum truncated at order `n`:
/// `exp(-(√2 π (n-1))² / σ²) / (2 π^{3/2})`.
///
/// Valid for `n > 1 + σ/(√2 π)`; outside that range the Gaussian-tail
/// comparison behind it does not apply and
/// [`WnError::BoundNotApplicable`] is returned.
pub fn wrapped_sum_error_bound(n: u32, sigma: f64) -> Result<f64> {
    validate_sigma(sigma)?;
    let nf = f64::from(n);
    if nf <= 1.0 + sigma / (SQRT_2 * PI) {
        return Err(WnError::BoundNotApplicable(format!(
            "wrapped-sum bound needs n > 1 + sigma/(sqrt(2) pi); got n={n}, sigma={sigma}"
        )));
    }
    let t = PI * SQRT_2 * (nf - 1.0) / sigma;
    Ok((-t * t).exp() / (2.0 * PI.powf(1.5)))
}

/// Tail bound for the theta sum truncated at `n` harmonics:
/// `exp(-(nσ)²/2) / (√2 π σ)`.
///
/// Valid for `n > √2/σ`; outside that range
/// [`WnError::BoundNotApplicable`] is returned.
pub fn theta_sum_error_bound(n: u32, sigma: f64) -> Result<f64> {
    validate_sigma(sigma)?;
    let nf = f64::from(n);
    if nf <= SQRT_2 / sigma {
        return Err(WnError::BoundNotApplicable(format!(
            "theta-sum bound needs n > sqrt(2)/sigma; got n={n}, sigma={sigma}"
        )));
    }
    let t = nf * sigma;
    Ok((-0.5 * t * t).exp() / (SQRT_2 * PI * sigma))
}

/// Smallest real orders at which each series' closed-form bound drops to the
/// target `ẽ`, clamped so the bounds' own preconditions hold:
///
/// * wrapped sum: `n_f = max(1 + (σ/π) √(max(0, -ln(4 π³ ẽ²))), 1 + σ/(√2 π))`
/// * theta sum:   `n_g = max((1/σ) √(max(0, -ln(2 π² σ² ẽ²))), √2/σ)`
pub fn required_orders(sigma: f64, target: AccuracyTarget) -> Result<TruncationRequirement> {
    validate_sigma(sigma)?;
    let e = target.value();
    let log_f = (4.0 * PI.powi(3) * e * e).ln();
    let n_f = (1.0 + (sigma / PI) * (-log_f).max(0.0).sqrt()).max(1.0 + sigma / (SQRT_2 * PI));
    let log_g = (2.0 * PI * PI * sigma * sigma * e * e).ln();
    let n_g = ((1.0 / sigma) * (-log_g).max(0.0).sqrt()).max(SQRT_2 / sigma);
    Ok(TruncationRequirement { n_f, n_g })
}

/// Choose the cheaper certified plan for `(σ, ẽ)`: whichever series needs
/// the lower real order per [`required_orders`], truncated at the ceiling of
/// that order (never below 1). Ties go to the theta sum, whose terms are
/// cheaper and whose order shrinks as σ grows.
pub fn plan_theoretical(sigma: f64, target: AccuracyTarget) -> Result<EvalPlan> {
    let req = required_orders(sigma, target)?;
    let (kind, order) = if req.n_f < req.n_g {
        (SeriesKind::WrappedSum, req.n_f)
    } else {
        (SeriesKind::ThetaSum, req.n_g)
    };
    EvalPlan::new(kind, order.ceil().max(1.0) as u32)
}

/// Measure the worst-case truncation error of `(kind, n, σ)` over a
/// 4096-point grid and compare it against the matching closed-form bound.
///
/// # Errors
///
/// Propagates [`WnError::BoundNotApplicable`] when `(n, σ)` violates the
/// bound's precondition, plus the usual argument validation.
pub fn check_bound_dominates(kind: SeriesKind, n: u32, sigma: f64) -> Result<BoundCheck> {
    let bound = match kind {
        SeriesKind::WrappedSum => wrapped_sum_error_bound(n, sigma)?,
        SeriesKind::ThetaSum | SeriesKind::Uniform => theta_sum_error_bound(n, sigma)?,
    };
    let measured = worst_case_error(kind, n, sigma, DOMINATION_GRID)?.error;
    Ok(BoundCheck {
        bound,
        measured,
        ok: measured <= bound,
    })
}
