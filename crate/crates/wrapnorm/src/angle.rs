//! Angles on the circle `[0, 2π)` and wrapped normal parameters.

use crate::{Result, WnError};
use std::f64::consts::TAU;

/// A point on the circle, stored in radians within `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Angle {
    radians: f64,
}

impl Angle {
    /// Wrap any finite real angle into `[0, 2π)`.
    pub fn new(radians: f64) -> Result<Angle> {
        if !radians.is_finite() {
            return Err(WnError::InvalidArgument(format!(
                "angle must be finite, got {radians}"
            )));
        }
        Ok(Angle {
            radians: reduce(radians),
        })
    }

    /// The wrapped value in `[0, 2π)`.
    pub fn radians(&self) -> f64 {
        self.radians
    }
}

/// Reduce a finite angle into `[0, 2π)`.
///
/// `rem_euclid` alone can return `2π` (when a tiny negative input rounds up
/// during the correcting addition) and `-0.0`; both are normalized.
pub(crate) fn reduce(x: f64) -> f64 {
    let mut r = x.rem_euclid(TAU);
    if r >= TAU {
        r = 0.0;
    }
    if r == 0.0 {
        // collapse -0.0 to +0.0 so wrapping is idempotent bit-for-bit
        r = 0.0;
    }
    r
}

/// Wrap any finite real angle into `[0, 2π)`.
///
/// Errors with [`WnError::InvalidArgument`] on non-finite input. Wrapping an
/// already wrapped value returns it unchanged bit-for-bit.
pub fn wrap(x: f64) -> Result<Angle> {
    Angle::new(x)
}

/// Location/scale parameters of a wrapped normal distribution, with the
/// derived theta-series ratio `ρ = exp(−σ²/2)` computed once.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WrappedNormal {
    mu: Angle,
    sigma: f64,
    rho: f64,
}

impl WrappedNormal {
    /// Build from a location (wrapped into `[0, 2π)`) and a scale `σ > 0`.
    ///
    /// Errors with [`WnError::InvalidParameter`] when σ is not a finite
    /// positive number or μ is not finite.
    ///
    /// For σ ≳ 38.6 the true ρ is below the smallest positive double and the
    /// stored ρ is 0.0 — the nearest representable value.
    pub fn new(mu: f64, sigma: f64) -> Result<WrappedNormal> {
        if !mu.is_finite() {
            return Err(WnError::InvalidParameter(format!(
                "mu must be finite, got {mu}"
            )));
        }
        if !sigma.is_finite() || sigma <= 0.0 {
            return Err(WnError::InvalidParameter(format!(
                "sigma must be a finite positive number, got {sigma}"
            )));
        }
        Ok(WrappedNormal {
            mu: Angle::new(mu)?,
            sigma,
            rho: (-sigma * sigma / 2.0).exp(),
        })
    }

    /// Location parameter, wrapped into `[0, 2π)`.
    pub fn mu(&self) -> Angle {
        self.mu
    }

    /// Scale parameter σ.
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Theta-series ratio `ρ = exp(−σ²/2)`, cached at construction.
    pub fn rho(&self) -> f64 {
        self.rho
    }
}
