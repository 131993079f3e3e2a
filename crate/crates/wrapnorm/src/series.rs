//! Density evaluation for the wrapped normal distribution.
//!
//! Two series compute the same density and differ only in where they
//! converge quickly:
//!
//! * the *wrapped sum* adds Gaussian replicas `exp(-(Δ + 2πk)²/(2σ²))` for
//!   `k = -n..n` and wins for small `σ` (few replicas reach the window);
//! * the *theta sum* adds cosine harmonics `2 ρ^{k²} cos(kΔ)` with
//!   `ρ = exp(-σ²/2)` for `k = 1..n` and wins for large `σ` (the density is
//!   nearly flat, so few harmonics matter).
//!
//! Keeping zero theta harmonics yields the circular uniform density
//! `1/(2π)`, exposed as [`pdf_uniform`].
//!
//! All accumulation uses compensated summation so that the measured gap
//! between a truncated prefix and the converged series reflects the series
//! tail rather than accumulation noise.

use crate::angle::{reduce, Angle, WrappedNormal};
use crate::kahan::KahanSum;
use crate::{Result, WnError};

/// Hard cap on the number of series terms a converged evaluation may consume
/// before reporting [`WnError::NonConvergence`].
const MAX_REFERENCE_TERMS: u32 = 1_000_000;

/// Number of consecutive terms (or replica pairs) that must leave the
/// accumulator state bit-identical before a series counts as converged.
const CONVERGED_AFTER_UNCHANGED: u32 = 2;

/// Which series evaluates the density.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeriesKind {
    /// Sum of Gaussian replicas over integer shifts of the window.
    WrappedSum,
    /// Cosine-harmonic (theta) form of the same density.
    ThetaSum,
    /// The flat circular density `1/(2π)`; the theta sum with no harmonics.
    Uniform,
}

impl SeriesKind {
    /// Single-letter label used in CSV output: `f`, `g`, or `uniform`.
    pub fn label(self) -> &'static str {
        match self {
            SeriesKind::WrappedSum => "f",
            SeriesKind::ThetaSum => "g",
            SeriesKind::Uniform => "uniform",
        }
    }
}

/// A series choice together with a truncation order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EvalPlan {
    kind: SeriesKind,
    order: u32,
}

impl EvalPlan {
    /// Pair a series with a truncation order.
    ///
    /// The uniform density has no tunable order, so `Uniform` only accepts
    /// order `0`.
    pub fn new(kind: SeriesKind, order: u32) -> Result<Self> {
        if kind == SeriesKind::Uniform && order != 0 {
            return Err(WnError::InvalidArgument(format!(
                "the uniform density has no truncation order; got order {order}"
            )));
        }
        Ok(EvalPlan { kind, order })
    }

    /// The series this plan evaluates.
    pub fn kind(self) -> SeriesKind {
        self.kind
    }

    /// The truncation order this plan evaluates at.
    pub fn order(self) -> u32 {
        self.order
    }

    /// Evaluate the planned series at `x`.
    pub fn pdf(self, x: Angle, wn: &WrappedNormal) -> f64 {
        match self.kind {
            SeriesKind::WrappedSum => pdf_f(x, wn, self.order),
            SeriesKind::ThetaSum => pdf_g(x, wn, self.order),
            SeriesKind::Uniform => pdf_uniform(),
        }
    }

    /// Label for user-facing output, collapsing a zero-order theta sum into
    /// `uniform` (they are the same function).
    pub fn display_kind(self) -> &'static str {
        match (self.kind, self.order) {
            (SeriesKind::Uniform, _) | (SeriesKind::ThetaSum, 0) => "uniform",
            (SeriesKind::ThetaSum, _) => "g",
            (SeriesKind::WrappedSum, _) => "f",
        }
    }
}

/// A converged density value together with how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceValue {
    /// The converged density.
    pub density: f64,
    /// Terms consumed by the series that produced `density`, including the
    /// trailing terms that confirmed convergence.
    pub terms_used: u32,
    /// Which series produced `density`.
    pub kind_used: SeriesKind,
}

/// Location and size of the worst truncation error over a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorSample {
    /// Series whose truncation was measured.
    pub kind: SeriesKind,
    /// Truncation order measured.
    pub n: u32,
    /// Scale parameter of the distribution.
    pub sigma: f64,
    /// Grid point attaining the maximum error; among points whose error is
    /// within a few ulps of the maximum, the largest angle is reported.
    pub x_at_max: Angle,
    /// The maximum absolute error over the grid.
    pub error: f64,
}

/// One Gaussian replica `exp(-(Δ + 2πk)²/(2σ²))`.
#[inline]
fn replica_term(delta: f64, sigma: f64, k: i64) -> f64 {
    let d = delta + std::f64::consts::TAU * k as f64;
    (-(d * d) / (2.0 * sigma * sigma)).exp()
}

/// One theta harmonic `2 exp(-(kσ)²/2) cos(kΔ)`.
#[inline]
fn harmonic_term(delta: f64, sigma: f64, k: u32) -> f64 {
    let ks = k as f64 * sigma;
    2.0 * (-0.5 * ks * ks).exp() * (k as f64 * delta).cos()
}

/// Angle of `x` relative to the mean, reduced into `[0, 2π)`.
#[inline]
fn delta_from_mean(x: Angle, wn: &WrappedNormal) -> f64 {
    reduce(x.radians() - wn.mu().radians())
}

/// Normalize a replica sum into a density.
#[inline]
fn finish_wrapped(sum: f64, sigma: f64) -> f64 {
    sum / (sigma * std::f64::consts::TAU.sqrt())
}

/// Normalize a harmonic sum into a density.
#[inline]
fn finish_theta(sum: f64) -> f64 {
    sum / std::f64::consts::TAU
}

/// Accumulate the replica sum truncated at order `n`: `k = 0, ±1, .., ±n`.
///
/// Terms are added center-outward in symmetric pairs so that a truncated
/// prefix follows the same floating-point path as the converged sum.
fn wrapped_prefix_sum(delta: f64, sigma: f64, n: u32) -> KahanSum {
    let mut acc = KahanSum::new(replica_term(delta, sigma, 0));
    for j in 1..=i64::from(n) {
        acc.add(replica_term(delta, sigma, j));
        acc.add(replica_term(delta, sigma, -j));
    }
    acc
}

/// Accumulate the replica sum until two consecutive symmetric pairs leave the
/// accumulator state bit-identical; returns the accumulator and the number of
/// terms consumed.
fn wrapped_converged_sum(delta: f64, sigma: f64) -> Result<(KahanSum, u32)> {
    let mut acc = KahanSum::new(replica_term(delta, sigma, 0));
    let mut unchanged = 0u32;
    let mut pairs = 0u32;
    while unchanged < CONVERGED_AFTER_UNCHANGED {
        if 1 + 2 * (pairs + 1) > MAX_REFERENCE_TERMS {
            return Err(WnError::NonConvergence(format!(
                "wrapped sum used more than {MAX_REFERENCE_TERMS} terms at \
                 delta={delta}, sigma={sigma}"
            )));
        }
        let before = acc.state_bits();
        let j = i64::from(pairs) + 1;
        acc.add(replica_term(delta, sigma, j));
        acc.add(replica_term(delta, sigma, -j));
        pairs += 1;
        if acc.state_bits() == before {
            unchanged += 1;
        } else {
            unchanged = 0;
        }
    }
    Ok((acc, 1 + 2 * pairs))
}

/// Accumulate the harmonic sum truncated at order `n`: the constant term plus
/// harmonics `k = 1..n`.
fn theta_prefix_sum(delta: f64, sigma: f64, n: u32) -> KahanSum {
    let mut acc = KahanSum::new(1.0);
    for k in 1..=n {
        acc.add(harmonic_term(delta, sigma, k));
    }
    acc
}

/// Accumulate the harmonic sum until two consecutive harmonics leave the
/// accumulator state bit-identical; returns the accumulator and the number of
/// harmonics consumed.
fn theta_converged_sum(delta: f64, sigma: f64) -> Result<(KahanSum, u32)> {
    let mut acc = KahanSum::new(1.0);
    let mut unchanged = 0u32;
    let mut k = 0u32;
    while unchanged < CONVERGED_AFTER_UNCHANGED {
        if k + 1 > MAX_REFERENCE_TERMS {
            return Err(WnError::NonConvergence(format!(
                "theta sum used more than {MAX_REFERENCE_TERMS} terms at \
                 delta={delta}, sigma={sigma}"
            )));
        }
        let before = acc.state_bits();
        k += 1;
        acc.add(harmonic_term(delta, sigma, k));
        if acc.state_bits() == before {
            unchanged += 1;
        } else {
            unchanged = 0;
        }
    }
    Ok((acc, k))
}

/// Wrapped-sum density truncated at order `n` (replicas `k = -n..n`).
///
/// The result can underflow to zero far from the mode at small `σ`; it is
/// never negative.
pub fn pdf_f(x: Angle, wn: &WrappedNormal, n: u32) -> f64 {
    let delta = delta_from_mean(x, wn);
    finish_wrapped(wrapped_prefix_sum(delta, wn.sigma(), n).value(), wn.sigma())
}

/// Theta-sum density truncated at `n` harmonics.
///
/// Truncation keeps the value exact at no particular point, and for small `σ`
/// (where many harmonics matter) a low-order truncation can dip below zero;
/// the value is reported as computed, without clamping.
pub fn pdf_g(x: Angle, wn: &WrappedNormal, n: u32) -> f64 {
    let delta = delta_from_mean(x, wn);
    finish_theta(theta_prefix_sum(delta, wn.sigma(), n).value())
}

/// The circular uniform density `1/(2π)`, bit-identical to `pdf_g` with zero
/// harmonics.
pub fn pdf_uniform() -> f64 {
    finish_theta(1.0)
}

/// Converged density at `x`: both series are run to convergence,
/// cross-checked against each other, and the one that needed fewer terms is
/// reported (ties go to the theta sum).
///
/// # Errors
///
/// [`WnError::NonConvergence`] if either series exceeds the term cap, and
/// [`WnError::InternalConsistency`] if the two converged values disagree by
/// more than `1e-12 · max(1, f)` — either means the implementation, not the
/// caller, is at fault.
pub fn pdf_reference(x: Angle, wn: &WrappedNormal) -> Result<ReferenceValue> {
    let delta = delta_from_mean(x, wn);
    let sigma = wn.sigma();
    let (f_acc, f_terms) = wrapped_converged_sum(delta, sigma)?;
    let (g_acc, g_terms) = theta_converged_sum(delta, sigma)?;
    let f_val = finish_wrapped(f_acc.value(), sigma);
    let g_val = finish_theta(g_acc.value());
    if (f_val - g_val).abs() > 1e-12 * f_val.abs().max(1.0) {
        return Err(WnError::InternalConsistency(format!(
            "wrapped sum {f_val} and theta sum {g_val} disagree at \
             delta={delta}, sigma={sigma}"
        )));
    }
    if f_terms < g_terms {
        Ok(ReferenceValue {
            density: f_val,
            terms_used: f_terms,
            kind_used: SeriesKind::WrappedSum,
        })
    } else {
        Ok(ReferenceValue {
            density: g_val,
            terms_used: g_terms,
            kind_used: SeriesKind::ThetaSum,
        })
    }
}

pub(crate) fn validate_sigma(sigma: f64) -> Result<()> {
    if !sigma.is_finite() || sigma <= 0.0 {
        return Err(WnError::InvalidParameter(format!(
            "sigma must be finite and positive, got {sigma}"
        )));
    }
    Ok(())
}

fn validate_kind_order(kind: SeriesKind, n: u32) -> Result<()> {
    if kind == SeriesKind::Uniform && n != 0 {
        return Err(WnError::InvalidArgument(format!(
            "the uniform density has no truncation order; got order {n}"
        )));
    }
    Ok(())
}

/// Truncation error of the order-`n` series at one evaluation point,
/// measured against the same series run to convergence.
///
/// The prefix and the converged sum walk identical accumulator states over
/// their shared terms, and the gap is taken between the accumulator registers
/// rather than between the two rounded densities. Rounding each side to a
/// single f64 first would floor the measurement at one ulp of the density;
/// the register difference isolates the series tail itself, which is the
/// quantity the closed-form bounds are statements about.
fn pointwise_error(kind: SeriesKind, n: u32, delta: f64, sigma: f64) -> Result<f64> {
    match kind {
        SeriesKind::WrappedSum => {
            let prefix = wrapped_prefix_sum(delta, sigma, n);
            let (converged, _) = wrapped_converged_sum(delta, sigma)?;
            Ok(finish_wrapped(converged.difference(&prefix).abs(), sigma))
        }
        SeriesKind::ThetaSum | SeriesKind::Uniform => {
            let prefix = theta_prefix_sum(delta, sigma, n);
            let (converged, _) = theta_converged_sum(delta, sigma)?;
            Ok(finish_theta(converged.difference(&prefix).abs()))
        }
    }
}

/// Largest absolute truncation error of the order-`n` series over a uniform
/// grid `x_i = 2π (i + ½) / grid_size`, with the mean at zero.
///
/// The converged value of the *same* series serves as the reference, so the
/// measurement isolates the truncation tail from any disagreement between
/// the two series' rounding paths. Among grid points whose error ties the
/// maximum to within a few ulps, the largest angle is reported — ties occur
/// systematically because the error profile is symmetric about the mode.
///
/// # Errors
///
/// [`WnError::InvalidParameter`] for a non-finite or non-positive `sigma`,
/// [`WnError::InvalidArgument`] for a grid with fewer than two points or a
/// nonzero order on the uniform density.
pub fn worst_case_error(
    kind: SeriesKind,
    n: u32,
    sigma: f64,
    grid_size: u32,
) -> Result<ErrorSample> {
    validate_sigma(sigma)?;
    validate_kind_order(kind, n)?;
    if grid_size < 2 {
        return Err(WnError::InvalidArgument(format!(
            "grid must have at least 2 points, got {grid_size}"
        )));
    }
    let mut errors = Vec::with_capacity(grid_size as usize);
    for i in 0..grid_size {
        let x = std::f64::consts::TAU * ((i as f64 + 0.5) / grid_size as f64);
        errors.push(pointwise_error(kind, n, x, sigma)?);
    }
    let emax = errors.iter().cloned().fold(0.0_f64, f64::max);
    // Resolve near-ulp ties toward the largest angle; the threshold tolerates
    // the rounding jitter between symmetric grid points.
    let tie_floor = emax * (1.0 - 64.0 * f64::EPSILON);
    let best = errors
        .iter()
        .rposition(|&e| e >= tie_floor)
        .expect("grid is non-empty and emax is attained");
    let x_best = std::f64::consts::TAU * ((best as f64 + 0.5) / grid_size as f64);
    Ok(ErrorSample {
        kind,
        n,
        sigma,
        x_at_max: Angle::new(x_best)?,
        error: emax,
    })
}

/// Truncation error of the order-`n` series at the wrap point (`x` at the
/// mean, where the window seam `0 ≡ 2π` sits opposite no mass): for the
/// wrapped sum every omitted replica pair contributes its full height there,
/// and for the theta sum every omitted cosine sits at its crest. This is the
/// boundary error that threshold tables are built from.
///
/// # Errors
///
/// Same as [`worst_case_error`].
pub fn truncation_error(kind: SeriesKind, n: u32, sigma: f64) -> Result<f64> {
    validate_sigma(sigma)?;
    validate_kind_order(kind, n)?;
    pointwise_error(kind, n, 0.0, sigma)
}
