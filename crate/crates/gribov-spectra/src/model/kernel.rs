//! The inverse-kernel variants.
//!
//! Every variant factors as a(y) · Θ(min(y, y₁)) · b(y₁) with frame-dependent
//! a, b and inner integral Θ; the crate-internal `FrameFns` packages that
//! structure for the discretization and Hilbert–Schmidt code. Factors are
//! combined in log domain and exponentiated once.

use num_complex::Complex;

use crate::error::GribovError;
use crate::model::params::{GribovParams, KernelFrame};
use crate::model::theta::{
    log_limit_inner, log_limit_inner_table, log_theta, log_theta_table, series_threshold,
};
use crate::model::weight::{log_weight_r, log_weight_r_inf};
use crate::quad::{gauss_legendre_unit, log_integral};
use crate::{cast, Real, Result};

fn check_square<T: Real>(y: T, y1: T, rho_prime: T) -> Result<()> {
    if y < T::zero() || y > rho_prime {
        return Err(GribovError::DomainViolation {
            name: "y",
            value: format!("{y}"),
            lo: "0".into(),
            hi: format!("{rho_prime}"),
        });
    }
    if !(y1 > T::zero()) || y1 > rho_prime {
        return Err(GribovError::DomainViolation {
            name: "y1",
            value: format!("{y1}"),
            lo: "0 (exclusive)".into(),
            hi: format!("{rho_prime}"),
        });
    }
    Ok(())
}

/// Plain inverse kernel N(y, y₁) = √r(y₁) · Θ(min(y, y₁)) / (λ y₁),
/// normalized-base form: the endpoint factor is (1 − y₁/ρ')^δ with
/// prefactor 1/(λ y₁).
pub fn kernel_n<T: Real>(y: T, y1: T, p: &GribovParams<T>, tol: T) -> Result<T> {
    let (rho_prime, _) = p.native()?;
    check_square(y, y1, rho_prime)?;
    let m = y.min(y1);
    if m == T::zero() {
        return Ok(T::zero());
    }
    if y1 == rho_prime {
        // continuity value: sqrt(r) vanishes for delta > 0
        let (_, delta) = p.native()?;
        if delta > T::zero() {
            return Ok(T::zero());
        }
    }
    let lt = if m == rho_prime {
        return Err(GribovError::DomainViolation {
            name: "min(y, y1)",
            value: format!("{m}"),
            lo: "0".into(),
            hi: format!("{rho_prime} (exclusive, Θ diverges)"),
        });
    } else {
        log_theta(m, p, tol)?
    };
    let half_log_r = cast::<T>(0.5) * log_weight_r(y1, p)?;
    Ok((half_log_r + lt - p.lambda().ln() - y1.ln()).exp())
}

/// Same kernel written with unnormalized endpoint factors, (ρ' − y₁)^δ and
/// inner integrand (ρ' − s)^{−(δ+1)}, with prefactor 1/(λ' y₁). Kept as an
/// algebraically identical but computationally independent evaluation path.
pub fn kernel_n_raw<T: Real>(y: T, y1: T, p: &GribovParams<T>, tol: T) -> Result<T> {
    let (rho_prime, delta) = p.native()?;
    check_square(y, y1, rho_prime)?;
    let m = y.min(y1);
    if m == T::zero() {
        return Ok(T::zero());
    }
    if y1 == rho_prime && delta > T::zero() {
        return Ok(T::zero());
    }
    let d1 = delta + T::one();
    let log_inner = if m < series_threshold::<T>() * rho_prime {
        let half = cast::<T>(0.5);
        -d1 * rho_prime.ln() + m.ln() + (half * p.rho() * m).ln_1p()
    } else {
        log_integral(
            |s: T| -rho_prime * s - d1 * (rho_prime - s).ln(),
            T::zero(),
            m,
            tol,
        )?
    };
    let lg = -p.lambda_prime().ln() - y1.ln()
        + rho_prime * y1
        + delta * (rho_prime - y1).ln()
        + log_inner;
    Ok(lg.exp())
}

/// Weighted-frame kernel Ñ(y, y₁) = Θ(min(y, y₁)) / (λ y₁ √r(y₁)).
/// Satisfies Ñ(y, y₁) · r(y₁) = N(y, y₁) identically.
pub fn kernel_n_tilde<T: Real>(y: T, y1: T, p: &GribovParams<T>, tol: T) -> Result<T> {
    let (rho_prime, delta) = p.native()?;
    check_square(y, y1, rho_prime)?;
    if y1 == rho_prime && delta > T::zero() {
        // 1/sqrt(r) blows up at the right end
        return Err(GribovError::DomainViolation {
            name: "y1",
            value: format!("{y1}"),
            lo: "0 (exclusive)".into(),
            hi: format!("{rho_prime} (exclusive for the weighted kernel)"),
        });
    }
    let m = y.min(y1);
    if m == T::zero() {
        return Ok(T::zero());
    }
    let lt = log_theta(m, p, tol)?;
    let half_log_r = cast::<T>(0.5) * log_weight_r(y1, p)?;
    Ok((lt - half_log_r - p.lambda().ln() - y1.ln()).exp())
}

/// Limit kernel N₀(y, s) = (1/(λs)) e^{−s²/2 − ρs} ∫₀^{min(y,s)} e^{u²/2 + ρu} du
/// on the closed quarter-plane (continuity values at s = 0).
pub fn kernel_limit<T: Real>(y: T, s: T, mu: T, lambda: T, tol: T) -> Result<T> {
    if !(lambda > T::zero()) {
        return Err(GribovError::NonpositiveLambda(format!("{lambda}")));
    }
    if y < T::zero() || s < T::zero() {
        return Err(GribovError::DomainViolation {
            name: "(y, s)",
            value: format!("({y}, {s})"),
            lo: "0".into(),
            hi: "inf".into(),
        });
    }
    let rho = mu / lambda;
    if s == T::zero() {
        // lim_{s->0} J(min(y,s))/(lambda s) = 1/lambda for y > 0, 0 at y = 0
        return Ok(if y > T::zero() {
            lambda.recip()
        } else {
            T::zero()
        });
    }
    let m = y.min(s);
    if m == T::zero() {
        return Ok(T::zero());
    }
    let lj = log_limit_inner(m, rho, tol)?;
    let half = cast::<T>(0.5);
    Ok((lj - lambda.ln() - s.ln() - half * s * s - rho * s).exp())
}

/// Symmetrized kernel whose squared double integral is the Hilbert–Schmidt
/// integral of the weighted operator; the operator built from it is unitarily
/// equivalent to the weighted-space operator, so spectra coincide.
///
/// Native frame: T(y, y₁) = √r(y) · Θ(min(y, y₁)) / (λ y₁) on [0, ρ']².
/// Limit frame:  T(y, y₁) = N(y, y₁) · √(r∞(y)/r∞(y₁)) on [0, ∞)², with the
/// finite-ρ' kernel extended by zero beyond its square, and N replaced by the
/// limit kernel when λ' = 0.
pub fn kernel_t<T: Real>(
    y: T,
    y1: T,
    p: &GribovParams<T>,
    frame: KernelFrame,
    tol: T,
) -> Result<T> {
    frame.check(p)?;
    match frame {
        KernelFrame::NativeWeighted => {
            let (rho_prime, _) = p.native()?;
            check_square(y, y1, rho_prime)?;
            let m = y.min(y1);
            if m == T::zero() {
                return Ok(T::zero());
            }
            if y == rho_prime {
                let (_, delta) = p.native()?;
                if delta > T::zero() {
                    return Ok(T::zero());
                }
            }
            let lt = log_theta(m, p, tol)?;
            let half_log_r = cast::<T>(0.5) * log_weight_r(y, p)?;
            Ok((half_log_r + lt - p.lambda().ln() - y1.ln()).exp())
        }
        KernelFrame::LimitWeighted => {
            if y < T::zero() || !(y1 > T::zero()) {
                return Err(GribovError::DomainViolation {
                    name: "(y, y1)",
                    value: format!("({y}, {y1})"),
                    lo: "0".into(),
                    hi: "inf".into(),
                });
            }
            let rho = p.rho();
            if p.is_limit() {
                let m = y.min(y1);
                if m == T::zero() {
                    return Ok(T::zero());
                }
                let lj = log_limit_inner(m, rho, tol)?;
                let half = cast::<T>(0.5);
                let la = half * log_weight_r_inf(y, rho)?;
                return Ok((la + lj - p.lambda().ln() - y1.ln()).exp());
            }
            let (rho_prime, _) = p.native()?;
            if y > rho_prime || y1 >= rho_prime {
                // zero extension beyond the native square
                return Ok(T::zero());
            }
            let n = kernel_n(y, y1, p, tol)?;
            if n == T::zero() {
                return Ok(T::zero());
            }
            let half = cast::<T>(0.5);
            let ratio = half * (log_weight_r_inf(y, rho)? - log_weight_r_inf(y1, rho)?);
            Ok((n.ln() + ratio).exp())
        }
        KernelFrame::Plain => Err(GribovError::FrameMismatch {
            frame: "plain",
            reason: "symmetrized kernel is defined for the weighted frames only".into(),
        }),
    }
}

/// Weighted-frame kernel at complex intercept μ, for analyticity probes.
/// Positive-real bases raised to complex exponents are evaluated as
/// exp(exponent · log base); the inner integral uses a fixed composite
/// Gauss rule so the quadrature error is itself analytic in μ.
pub fn kernel_n_tilde_complex<T: Real>(
    y: T,
    y1: T,
    lambda_prime: T,
    lambda: T,
    mu: Complex<T>,
) -> Result<Complex<T>> {
    if !(lambda > T::zero()) {
        return Err(GribovError::NonpositiveLambda(format!("{lambda}")));
    }
    if !(lambda_prime > T::zero()) {
        return Err(GribovError::LimitParamsOnly);
    }
    let rho_prime = lambda / lambda_prime;
    check_square(y, y1, rho_prime)?;
    if y1 >= rho_prime {
        return Err(GribovError::DomainViolation {
            name: "y1",
            value: format!("{y1}"),
            lo: "0 (exclusive)".into(),
            hi: format!("{rho_prime} (exclusive)"),
        });
    }
    let rho = mu / lambda;
    let rp = Complex::new(rho_prime, T::zero());
    let delta = (rho + rp) * rho_prime - Complex::new(T::one(), T::zero());
    let d1 = delta + Complex::new(T::one(), T::zero());

    let m = y.min(y1);
    let mut inner = Complex::new(T::zero(), T::zero());
    if m > T::zero() {
        const PANELS: usize = 16;
        const ORDER: usize = 24;
        let (nodes, weights) = gauss_legendre_unit::<T>(ORDER);
        let half = cast::<T>(0.5);
        let width = m / cast::<T>(PANELS as f64);
        for panel in 0..PANELS {
            let a = width * cast::<T>(panel as f64);
            let mid = a + half * width;
            let h = half * width;
            for (&x, &w) in nodes.iter().zip(&weights) {
                let s = mid + h * x;
                let log_base = (-s / rho_prime).ln_1p();
                let e = Complex::new(-rho_prime * s, T::zero()) - d1 * log_base;
                inner = inner + e.exp() * (w * h);
            }
        }
    }
    // sqrt(r(y1)) with complex delta
    let half_log_r = Complex::new(rho_prime * y1, T::zero()) + delta * (-y1 / rho_prime).ln_1p();
    let denom = half_log_r.exp() * (lambda * y1);
    Ok(inner / denom)
}

/// Plain kernel extended by zero beyond its square — the form the parameter
/// studies compare across different ρ'.
pub(crate) fn kernel_n_extended<T: Real>(y: T, y1: T, p: &GribovParams<T>, tol: T) -> Result<T> {
    if p.is_limit() {
        return kernel_limit(y, y1, p.mu(), p.lambda(), tol);
    }
    let (rho_prime, _) = p.native()?;
    if y > rho_prime || y1 > rho_prime {
        return Ok(T::zero());
    }
    kernel_n(y, y1, p, tol)
}

/// Frame-factor view a(y) · Θ(min) · b(y₁) shared by Nyström assembly and the
/// Hilbert–Schmidt panels. Values are log-domain; `support_upper` is the
/// point beyond which the kernel is identically zero.
pub(crate) struct FrameFns<'a, T: Real> {
    pub params: &'a GribovParams<T>,
    pub frame: KernelFrame,
}

impl<'a, T: Real> FrameFns<'a, T> {
    pub fn new(params: &'a GribovParams<T>, frame: KernelFrame) -> Result<Self> {
        frame.check(params)?;
        Ok(Self { params, frame })
    }

    pub fn support_upper(&self) -> T {
        match self.frame {
            KernelFrame::NativeWeighted | KernelFrame::Plain => {
                self.params.rho_prime().expect("native frame has rho'")
            }
            KernelFrame::LimitWeighted => self.params.rho_prime().unwrap_or_else(T::infinity),
        }
    }

    /// log a(y); `y` must lie inside the support (unchecked).
    pub fn log_a(&self, y: T) -> T {
        let half = cast::<T>(0.5);
        match self.frame {
            KernelFrame::NativeWeighted => half * log_r_unchecked(y, self.params),
            KernelFrame::Plain => T::zero(),
            KernelFrame::LimitWeighted => half * log_r_inf_unchecked(y, self.params.rho()),
        }
    }

    /// log b(y₁); `y1` must lie strictly inside the support (unchecked).
    pub fn log_b(&self, y1: T) -> T {
        let half = cast::<T>(0.5);
        let lam = self.params.lambda();
        match self.frame {
            KernelFrame::NativeWeighted => -lam.ln() - y1.ln(),
            KernelFrame::Plain => half * log_r_unchecked(y1, self.params) - lam.ln() - y1.ln(),
            KernelFrame::LimitWeighted => {
                if self.params.is_limit() {
                    -lam.ln() - y1.ln()
                } else {
                    half * log_r_unchecked(y1, self.params)
                        - half * log_r_inf_unchecked(y1, self.params.rho())
                        - lam.ln()
                        - y1.ln()
                }
            }
        }
    }

    /// Cumulative log Θ (or its half-line counterpart) at sorted in-support points.
    pub fn log_theta_table(&self, points: &[T], tol: T) -> Result<Vec<T>> {
        if self.params.is_limit() {
            log_limit_inner_table(points, self.params.rho(), tol)
        } else {
            log_theta_table(points, self.params, tol)
        }
    }
}

fn log_r_unchecked<T: Real>(y: T, p: &GribovParams<T>) -> T {
    let (rho_prime, delta) = (
        p.rho_prime().expect("native params"),
        p.delta().expect("native params"),
    );
    let two = cast::<T>(2.0);
    two * rho_prime * y + two * delta * (-y / rho_prime).ln_1p()
}

fn log_r_inf_unchecked<T: Real>(y: T, rho: T) -> T {
    -y * y - cast::<T>(2.0) * rho * y
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-13;

    fn p111() -> GribovParams<f64> {
        GribovParams::derive(1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn vanishes_on_zero_row() {
        let p = p111();
        for y1 in [0.1, 0.5, 0.9] {
            assert_eq!(kernel_n(0.0, y1, &p, TOL).unwrap(), 0.0);
            assert_eq!(kernel_n_raw(0.0, y1, &p, TOL).unwrap(), 0.0);
            assert_eq!(kernel_n_tilde(0.0, y1, &p, TOL).unwrap(), 0.0);
            assert_eq!(
                kernel_t(0.0, y1, &p, KernelFrame::NativeWeighted, TOL).unwrap(),
                0.0
            );
            assert_eq!(
                kernel_t(0.0, y1, &p, KernelFrame::LimitWeighted, TOL).unwrap(),
                0.0
            );
            assert_eq!(kernel_limit(0.0, y1, 1.0, 1.0, TOL).unwrap(), 0.0);
        }
    }

    #[test]
    #[allow(clippy::excessive_precision)] // frozen 40-digit oracle values
    fn frozen_composition_oracle() {
        // (1/(λ·0.25)) e^{0.25} (1 − 0.25)^1 · Θ(0.25), Θ from a 40-digit
        // evaluation; composition value frozen at 40 digits
        let p = p111();
        let got = kernel_n(0.5, 0.25, &p, TOL).unwrap();
        let oracle = 1.122583638870378273706_f64;
        assert!(((got - oracle) / oracle).abs() < 1e-9, "got {got}");
        let theta_oracle = 0.2914230056717992572988_f64;
        let composed = (1.0 / 0.25) * 0.25f64.exp() * 0.75 * theta_oracle;
        assert!(((got - composed) / composed).abs() < 1e-9);
    }

    #[test]
    #[allow(clippy::excessive_precision)] // frozen 40-digit oracle values
    fn tilde_frozen_oracle() {
        let p = p111();
        let got = kernel_n_tilde(0.5, 0.25, &p, TOL).unwrap();
        let oracle = 1.210455813451838527609_f64;
        assert!(((got - oracle) / oracle).abs() < 1e-9, "got {got}");
    }

    #[test]
    #[allow(clippy::excessive_precision)] // frozen 40-digit oracle values
    fn limit_kernel_frozen_oracle() {
        let got = kernel_limit(0.5, 0.25, 1.0, 1.0, TOL).unwrap();
        let oracle = 0.8671615112015372025916_f64;
        assert!(((got - oracle) / oracle).abs() < 1e-10, "got {got}");
    }

    #[test]
    fn forms_agree_on_sample_points() {
        let p = GribovParams::derive(0.25, 1.0, 1.0).unwrap();
        for (y, y1) in [(0.5, 0.25), (2.1, 3.3), (3.9, 0.7), (1.0, 1.0)] {
            let a = kernel_n(y, y1, &p, TOL).unwrap();
            let b = kernel_n_raw(y, y1, &p, TOL).unwrap();
            assert!(
                ((a - b) / a.max(1e-300)).abs() < 1e-12,
                "forms disagree at ({y},{y1}): {a} vs {b}"
            );
        }
    }

    #[test]
    fn tilde_times_weight_is_plain() {
        use crate::model::weight::weight_r;
        let p = GribovParams::derive(0.5, 2.0, 1.0).unwrap();
        for (y, y1) in [(0.3, 0.8), (1.7, 0.4), (1.1, 1.9)] {
            let lhs = kernel_n_tilde(y, y1, &p, TOL).unwrap() * weight_r(y1, &p).unwrap();
            let rhs = kernel_n(y, y1, &p, TOL).unwrap();
            assert!(
                ((lhs - rhs) / rhs).abs() < 1e-12,
                "({y},{y1}): {lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn kernels_nonnegative_everywhere_sampled() {
        let p = GribovParams::derive(0.5, 2.0, 1.0).unwrap();
        for i in 0..20 {
            for j in 1..20 {
                let y = 2.0 * i as f64 / 20.0;
                let y1 = 2.0 * j as f64 / 20.0 - 1e-9;
                assert!(kernel_n(y, y1, &p, TOL).unwrap() >= 0.0);
                assert!(kernel_t(y, y1, &p, KernelFrame::NativeWeighted, TOL).unwrap() >= 0.0);
            }
        }
    }

    #[test]
    fn domain_violations_rejected() {
        let p = p111();
        assert!(kernel_n(1.5, 0.5, &p, TOL).is_err());
        assert!(kernel_n(0.5, -0.1, &p, TOL).is_err());
        assert!(kernel_n(0.5, 0.0, &p, TOL).is_err());
        assert!(kernel_t(0.5, 0.5, &p, KernelFrame::Plain, TOL).is_err());
    }

    #[test]
    fn limit_extension_is_zero_outside_square() {
        let p = p111();
        assert_eq!(
            kernel_t(1.5, 0.5, &p, KernelFrame::LimitWeighted, TOL).unwrap(),
            0.0
        );
        assert_eq!(
            kernel_t(0.5, 1.5, &p, KernelFrame::LimitWeighted, TOL).unwrap(),
            0.0
        );
    }

    #[test]
    fn complex_kernel_matches_real_on_axis() {
        let p = p111();
        let real = kernel_n_tilde(0.5, 0.7, &p, TOL).unwrap();
        let z = kernel_n_tilde_complex(0.5f64, 0.7, 1.0, 1.0, Complex::new(1.0, 0.0)).unwrap();
        assert!(z.im.abs() < 1e-14);
        assert!(((z.re - real) / real).abs() < 1e-11, "{} vs {real}", z.re);
    }

    #[test]
    fn kernel_value_near_tiny_y1_approaches_prefactor() {
        // fused Θ(min)/y1 evaluation: for y1 << y the value tends to 1/λ
        let p = p111();
        let v = kernel_n(0.5, 1e-12, &p, TOL).unwrap();
        assert!((v - 1.0).abs() < 1e-6, "got {v}");
    }
}
