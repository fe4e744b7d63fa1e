//! Spectral analysis of the integral-kernel inverse of the Gribov operator
//! restricted to the negative imaginary axis.
//!
//! The crate builds the explicit inverse kernel of the operator
//! `(λ'y² − λy)u'' + (λy² + μy)u'` on `[0, ρ']` (with `ρ' = λ/λ'`), its
//! weighted-space symmetrizations, and the `λ' = 0` half-line limit kernel.
//! On top of that it provides Gauss–Legendre/Nyström discretization, dominant
//! (Perron) eigenpair computation by power iteration, Hilbert–Schmidt norms by
//! diagonal-split quadrature, an ODE-residual oracle that certifies the kernel
//! really inverts the differential operator, and parameter-sweep studies
//! (μ-monotonicity, λ'→0 convergence, analyticity probes).
//!
//! All kernel factors are combined in log domain and exponentiated once, so
//! evaluations survive the `δ ~ ρ'²` regime where raw factors overflow.
//!
//! Core numerics are generic over the scalar type via [`Real`]; concrete
//! `f64` aliases are exported at the crate root. The `verify` module and the
//! CLI pin `f64`, since every documented tolerance is an `f64`-scale claim.

// `!(x > 0)` instead of `x <= 0`: the negated form also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive};

pub mod chebyshev;
pub mod discretize;
pub mod error;
pub mod model;
pub mod quad;
pub mod report;
pub mod spectral;
pub mod studies;
pub mod verify;

pub use discretize::{apply_plain, truncation_bound, OperatorMatrix, QuadratureRule};
pub use error::GribovError;
pub use model::kernel::{
    kernel_limit, kernel_n, kernel_n_raw, kernel_n_tilde, kernel_n_tilde_complex, kernel_t,
};
pub use model::params::{GribovParams, KernelFrame};
pub use model::theta::{log_theta, theta};
pub use model::weight::{log_weight_r, weight_r, weight_r_inf};
pub use spectral::{
    hs_norm, ode_residual, power_iteration, smallest_eigenvalue, subdominant_gap, OdeOptions,
    SpectralResult,
};
pub use studies::{
    analyticity_probe, kernel_limit_study, lambda_prime_limit, sweep_mu, StudyReport,
};

/// Floating-point scalar the numerics are generic over (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + LowerExp + Send + Sync + 'static
{
}

impl<T> Real for T where
    T: Float + FloatConst + FromPrimitive + Debug + Display + LowerExp + Send + Sync + 'static
{
}

/// Shorthand for lifting an `f64` constant into the generic scalar.
pub(crate) fn cast<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 constant representable in scalar type")
}

pub type Result<T, E = GribovError> = std::result::Result<T, E>;

pub type Params64 = GribovParams<f64>;
pub type Rule64 = QuadratureRule<f64>;
pub type Matrix64 = OperatorMatrix<f64>;
pub type Spectral64 = SpectralResult<f64>;
pub type Report64 = StudyReport<f64>;
