//! Weight functions of the two weighted L² frames.

use crate::error::GribovError;
use crate::model::params::GribovParams;
use crate::{cast, Real, Result};

/// log r(y) = 2ρ'y + 2δ·log1p(−y/ρ') for y in [0, ρ'] (−∞ at y = ρ' when δ > 0).
pub fn log_weight_r<T: Real>(y: T, p: &GribovParams<T>) -> Result<T> {
    let (rho_prime, delta) = p.native()?;
    if y < T::zero() || y > rho_prime {
        return Err(GribovError::DomainViolation {
            name: "y",
            value: format!("{y}"),
            lo: "0".into(),
            hi: format!("{rho_prime}"),
        });
    }
    let two = cast::<T>(2.0);
    if y == rho_prime {
        // (1 - y/rho')^{2 delta}: 0 for delta > 0, 1 for delta = 0
        return Ok(if delta > T::zero() {
            T::neg_infinity()
        } else {
            two * rho_prime * rho_prime
        });
    }
    Ok(two * rho_prime * y + two * delta * (-y / rho_prime).ln_1p())
}

/// Native weight r(y) = e^{2ρ'y}(1 − y/ρ')^{2δ}.
pub fn weight_r<T: Real>(y: T, p: &GribovParams<T>) -> Result<T> {
    Ok(log_weight_r(y, p)?.exp())
}

/// Limit weight r∞(y) = e^{−y² − 2ρy} on [0, ∞).
pub fn weight_r_inf<T: Real>(y: T, rho: T) -> Result<T> {
    Ok(log_weight_r_inf(y, rho)?.exp())
}

pub fn log_weight_r_inf<T: Real>(y: T, rho: T) -> Result<T> {
    if y < T::zero() {
        return Err(GribovError::DomainViolation {
            name: "y",
            value: format!("{y}"),
            lo: "0".into(),
            hi: "inf".into(),
        });
    }
    Ok(-y * y - cast::<T>(2.0) * rho * y)
}
