//! Coupling parameters and derived quantities.

use crate::error::GribovError;
use crate::{Real, Result};

/// Physical couplings (λ', μ, λ) together with the derived quantities
/// ρ' = λ/λ', ρ = μ/λ and δ = ρ'(ρ + ρ') − 1.
///
/// `rho_prime` and `delta` are only defined for λ' > 0; for λ' = 0 the value
/// carries limit-operator semantics and only limit-frame operations accept it.
/// One instance is the single source of truth for every kernel formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GribovParams<T> {
    lambda_prime: T,
    mu: T,
    lambda: T,
    rho: T,
    rho_prime: Option<T>,
    delta: Option<T>,
    out_of_theory: bool,
}

impl<T: Real> GribovParams<T> {
    /// Derives the full parameter set, rejecting couplings outside the
    /// weighted-space theory (μ ≤ 0 or δ < 0).
    pub fn derive(lambda_prime: T, mu: T, lambda: T) -> Result<Self> {
        let p = Self::derive_raw(lambda_prime, mu, lambda)?;
        if !(mu > T::zero()) {
            return Err(GribovError::OutOfTheory {
                reason: format!("mu = {mu} must be > 0"),
            });
        }
        if let Some(d) = p.delta {
            if d < T::zero() {
                return Err(GribovError::OutOfTheory {
                    reason: format!("delta = {d} must be >= 0"),
                });
            }
        }
        Ok(p)
    }

    /// Exploratory constructor: still requires λ > 0 and λ' ≥ 0, but accepts
    /// μ ≤ 0 or δ < 0 and marks the instance as out-of-theory so downstream
    /// output can record the override.
    pub fn derive_exploratory(lambda_prime: T, mu: T, lambda: T) -> Result<Self> {
        let mut p = Self::derive_raw(lambda_prime, mu, lambda)?;
        let delta_bad = p.delta.map(|d| d < T::zero()).unwrap_or(false);
        p.out_of_theory = !(mu > T::zero()) || delta_bad;
        Ok(p)
    }

    fn derive_raw(lambda_prime: T, mu: T, lambda: T) -> Result<Self> {
        if !(lambda > T::zero()) {
            return Err(GribovError::NonpositiveLambda(format!("{lambda}")));
        }
        if lambda_prime < T::zero() || !lambda_prime.is_finite() {
            return Err(GribovError::NegativeLambdaPrime(format!("{lambda_prime}")));
        }
        let rho = mu / lambda;
        let (rho_prime, delta) = if lambda_prime > T::zero() {
            let rp = lambda / lambda_prime;
            (Some(rp), Some(rp * (rho + rp) - T::one()))
        } else {
            (None, None)
        };
        Ok(Self {
            lambda_prime,
            mu,
            lambda,
            rho,
            rho_prime,
            delta,
            out_of_theory: false,
        })
    }

    pub fn lambda_prime(&self) -> T {
        self.lambda_prime
    }

    pub fn mu(&self) -> T {
        self.mu
    }

    pub fn lambda(&self) -> T {
        self.lambda
    }

    pub fn rho(&self) -> T {
        self.rho
    }

    pub fn rho_prime(&self) -> Option<T> {
        self.rho_prime
    }

    pub fn delta(&self) -> Option<T> {
        self.delta
    }

    /// `true` when λ' = 0 (half-line limit operator).
    pub fn is_limit(&self) -> bool {
        self.rho_prime.is_none()
    }

    /// `true` when constructed through the exploratory override.
    pub fn out_of_theory(&self) -> bool {
        self.out_of_theory
    }

    /// (ρ', δ) for λ' > 0, or a typed error for limit parameters.
    pub fn native(&self) -> Result<(T, T)> {
        match (self.rho_prime, self.delta) {
            (Some(rp), Some(d)) => Ok((rp, d)),
            _ => Err(GribovError::LimitParamsOnly),
        }
    }
}

/// Frame of a discretized kernel: which weight the operator acts against.
///
/// `NativeWeighted` symmetrizes against the native weight r on [0, ρ']
/// (requires λ' > 0). `LimitWeighted` symmetrizes against the limit weight
/// r∞ on [0, ∞), with the finite-ρ' kernel extended by zero beyond its
/// square. `Plain` is the kernel acting without any weight factor inside the
/// integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelFrame {
    NativeWeighted,
    LimitWeighted,
    Plain,
}

impl KernelFrame {
    pub fn name(&self) -> &'static str {
        match self {
            KernelFrame::NativeWeighted => "native",
            KernelFrame::LimitWeighted => "limit",
            KernelFrame::Plain => "plain",
        }
    }

    /// Validates that the frame can be used with the given parameters.
    pub fn check<T: Real>(&self, p: &GribovParams<T>) -> Result<()> {
        match self {
            KernelFrame::NativeWeighted | KernelFrame::Plain => {
                if p.is_limit() {
                    Err(GribovError::FrameMismatch {
                        frame: self.name(),
                        reason: "lambda' = 0 parameters only support the limit frame".into(),
                    })
                } else {
                    Ok(())
                }
            }
            KernelFrame::LimitWeighted => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derive_direct_substitution() {
        // (1, 2, 1): rho' = 1, rho = 2, delta = 1*(2+1) - 1 = 2
        let p = GribovParams::derive(1.0f64, 2.0, 1.0).unwrap();
        assert_eq!(p.rho_prime(), Some(1.0));
        assert_eq!(p.rho(), 2.0);
        assert_eq!(p.delta(), Some(2.0));

        let p = GribovParams::derive(1.0f64, 1.0, 1.0).unwrap();
        assert_eq!(
            (p.rho_prime().unwrap(), p.rho(), p.delta().unwrap()),
            (1.0, 1.0, 1.0)
        );

        // (0.25, 1, 1): rho' = 4, delta = 4*5 - 1 = 19
        let p = GribovParams::derive(0.25f64, 1.0, 1.0).unwrap();
        assert_eq!(
            (p.rho_prime().unwrap(), p.rho(), p.delta().unwrap()),
            (4.0, 1.0, 19.0)
        );
    }

    #[test]
    fn derive_rejects_bad_couplings() {
        assert!(matches!(
            GribovParams::derive(1.0f64, 1.0, 0.0),
            Err(GribovError::NonpositiveLambda(_))
        ));
        assert!(matches!(
            GribovParams::derive(-0.5f64, 1.0, 1.0),
            Err(GribovError::NegativeLambdaPrime(_))
        ));
        // mu <= 0 rejected by the theory gate
        assert!(matches!(
            GribovParams::derive(1.0f64, -1.0, 1.0),
            Err(GribovError::OutOfTheory { .. })
        ));
    }

    #[test]
    fn delta_negative_is_out_of_theory_but_overridable() {
        // lambda' = 4, mu = 0.1, lambda = 1: rho' = 0.25, delta = 0.25*(0.1+0.25)-1 < 0
        assert!(matches!(
            GribovParams::derive(4.0f64, 0.1, 1.0),
            Err(GribovError::OutOfTheory { .. })
        ));
        let p = GribovParams::derive_exploratory(4.0f64, 0.1, 1.0).unwrap();
        assert!(p.out_of_theory());
        assert!(p.delta().unwrap() < 0.0);
    }

    #[test]
    fn limit_params_have_absent_native_fields() {
        let p = GribovParams::derive(0.0f64, 1.0, 1.0).unwrap();
        assert!(p.is_limit());
        assert_eq!(p.rho_prime(), None);
        assert_eq!(p.delta(), None);
        assert!(p.native().is_err());
        assert!(KernelFrame::NativeWeighted.check(&p).is_err());
        assert!(KernelFrame::LimitWeighted.check(&p).is_ok());
    }
}
