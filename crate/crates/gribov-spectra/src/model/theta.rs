//! The Θ integral appearing in every kernel value, and its half-line
//! counterpart for the limit operator.
//!
//! Θ(Υ) = ∫₀^Υ e^{−ρ's}(1 − s/ρ')^{−(δ+1)} ds, for 0 ≤ Υ < ρ'.
//!
//! Near Υ = ρ' the integrand blows up like (ρ' − Υ)^{−(δ+1)}; the single-point
//! evaluation substitutes w = ρ' − s, giving
//! Θ(Υ) = e^{−ρ'²} ρ'^{δ+1} ∫_{ρ'−Υ}^{ρ'} e^{ρ'w} w^{−(δ+1)} dw,
//! whose integrand is monotone and smooth away from w = 0, and integrates it
//! adaptively in log domain. Below Υ < 1e−8·ρ' the leading series
//! Θ(Υ) = Υ(1 + ρΥ/2 + ...) is used instead.

use crate::error::GribovError;
use crate::model::params::GribovParams;
use crate::quad::{log_cumulative, log_integral};
use crate::{cast, Real, Result};

/// Relative Υ below which the small-argument series replaces quadrature.
pub(crate) fn series_threshold<T: Real>() -> T {
    cast::<T>(1e-8)
}

/// log Θ(Υ) to relative accuracy `tol`, assembled by log-sum-exp over
/// quadrature contributions (never overflows for large ρ').
pub fn log_theta<T: Real>(upsilon: T, p: &GribovParams<T>, tol: T) -> Result<T> {
    let (rho_prime, delta) = p.native()?;
    check_args(upsilon, rho_prime, tol)?;
    if upsilon == T::zero() {
        return Ok(T::neg_infinity());
    }
    if upsilon < series_threshold::<T>() * rho_prime {
        let half = cast::<T>(0.5);
        return Ok(upsilon.ln() + (half * p.rho() * upsilon).ln_1p());
    }
    let lo = rho_prime - upsilon;
    let d1 = delta + T::one();
    let integral = log_integral(|w: T| rho_prime * w - d1 * w.ln(), lo, rho_prime, tol)?;
    Ok(integral - rho_prime * rho_prime + d1 * rho_prime.ln())
}

/// Θ(Υ) in linear domain (may overflow to +∞ for Υ very close to ρ' at large
/// δ; use [`log_theta`] where that matters).
pub fn theta<T: Real>(upsilon: T, p: &GribovParams<T>, tol: T) -> Result<T> {
    Ok(log_theta(upsilon, p, tol)?.exp())
}

fn check_args<T: Real>(upsilon: T, rho_prime: T, tol: T) -> Result<()> {
    if !(tol > T::zero()) {
        return Err(GribovError::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if upsilon < T::zero() || upsilon >= rho_prime {
        // the integral diverges at upsilon = rho' for delta >= 0
        return Err(GribovError::DomainViolation {
            name: "upsilon",
            value: format!("{upsilon}"),
            lo: "0".into(),
            hi: format!("{rho_prime} (exclusive)"),
        });
    }
    Ok(())
}

/// Cumulative log Θ at sorted points in [0, ρ'), one adaptive pass per gap.
/// Shared by assembly and the Hilbert–Schmidt panels.
pub(crate) fn log_theta_table<T: Real>(
    points: &[T],
    p: &GribovParams<T>,
    tol: T,
) -> Result<Vec<T>> {
    let (rho_prime, delta) = p.native()?;
    if let Some(&last) = points.last() {
        if last >= rho_prime {
            return Err(GribovError::DomainViolation {
                name: "table point",
                value: format!("{last}"),
                lo: "0".into(),
                hi: format!("{rho_prime} (exclusive)"),
            });
        }
    }
    let d1 = delta + T::one();
    log_cumulative(
        |s: T| -rho_prime * s - d1 * (-s / rho_prime).ln_1p(),
        points,
        tol,
    )
}

/// log ∫₀^t e^{u²/2 + ρu} du — the inner integral of the limit kernel,
/// evaluated by the same quadrature engine as Θ.
pub fn log_limit_inner<T: Real>(t: T, rho: T, tol: T) -> Result<T> {
    if t < T::zero() {
        return Err(GribovError::DomainViolation {
            name: "t",
            value: format!("{t}"),
            lo: "0".into(),
            hi: "inf".into(),
        });
    }
    if t == T::zero() {
        return Ok(T::neg_infinity());
    }
    if t < series_threshold::<T>() {
        let half = cast::<T>(0.5);
        return Ok(t.ln() + (half * rho * t).ln_1p());
    }
    let half = cast::<T>(0.5);
    log_integral(|u: T| half * u * u + rho * u, T::zero(), t, tol)
}

pub(crate) fn log_limit_inner_table<T: Real>(points: &[T], rho: T, tol: T) -> Result<Vec<T>> {
    let half = cast::<T>(0.5);
    log_cumulative(|u: T| half * u * u + rho * u, points, tol)
}
