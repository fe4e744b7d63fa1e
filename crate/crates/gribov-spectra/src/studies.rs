//! Parameter-sweep experiments: μ-monotonicity, λ'→0 spectral-radius and
//! Hilbert–Schmidt convergence, pointwise kernel/weight limits, and
//! analyticity probes (kernel Cauchy loop plus Chebyshev coefficient decay).

use num_complex::Complex;

use crate::chebyshev::{chebyshev_coefficients, chebyshev_nodes, tail_head_ratio};
use crate::discretize::{limit_frame_rule, truncation_bound, OperatorMatrix, QuadratureRule};
use crate::error::GribovError;
use crate::model::kernel::{kernel_limit, kernel_n_extended, kernel_n_tilde_complex, FrameFns};
use crate::model::params::{GribovParams, KernelFrame};
use crate::model::weight::{weight_r, weight_r_inf};
use crate::spectral::{hs_distance, hs_norm, power_iteration};
use crate::{cast, Real, Result};

/// Nodes on the dead panel beyond the kernel support in composite limit rules.
pub const TAIL_NODES: usize = 32;
/// Kernel probe point used by the μ sweep and the Cauchy loop.
pub const PROBE_POINT: (f64, f64) = (0.5, 0.7);
/// Cauchy-loop residual threshold recorded as a flag.
pub const LOOP_RESIDUAL_MAX: f64 = 1e-10;
/// Chebyshev tail/head threshold recorded as a flag.
pub const CHEB_TAIL_HEAD_MAX: f64 = 1e-8;
/// Slack used by monotonicity flags, relative to the largest magnitude.
pub const MONOTONE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StudyKind {
    MuSweep,
    LambdaPrimeLimit,
    KernelLimit,
    HsLimit,
    Analyticity,
}

impl StudyKind {
    pub fn name(&self) -> &'static str {
        match self {
            StudyKind::MuSweep => "mu-sweep",
            StudyKind::LambdaPrimeLimit => "lambda-prime-limit",
            StudyKind::KernelLimit => "kernel-limit",
            StudyKind::HsLimit => "hs-limit",
            StudyKind::Analyticity => "analyticity",
        }
    }
}

/// One record of a sweep: the swept parameter value and the measured columns.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyRecord<T> {
    pub param: T,
    pub values: Vec<T>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flag {
    pub name: String,
    pub pass: bool,
}

/// Grid sizes and tolerances the records were produced with. The timestamp is
/// for human-readable summaries only and never enters CSV output, which must
/// be byte-identical across reruns.
#[derive(Debug, Clone, PartialEq)]
pub struct Provenance<T> {
    pub rule_size: usize,
    pub tol: T,
    pub eps: Option<T>,
    pub timestamp_unix: Option<u64>,
}

/// Ordered records of a parameter sweep with monotonicity/convergence flags.
/// Every flag is recomputable from the records and scalars alone.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyReport<T> {
    pub kind: StudyKind,
    pub param_name: &'static str,
    pub columns: Vec<String>,
    pub records: Vec<StudyRecord<T>>,
    pub scalars: Vec<(String, T)>,
    pub flags: Vec<Flag>,
    pub provenance: Provenance<T>,
}

impl<T: Real> StudyReport<T> {
    pub fn all_flags_pass(&self) -> bool {
        self.flags.iter().all(|f| f.pass)
    }

    pub fn column(&self, name: &str) -> Option<Vec<T>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.records.iter().map(|r| r.values[idx]).collect())
    }
}

fn scale_of<T: Real>(values: &[T]) -> T {
    values.iter().fold(T::zero(), |acc, &v| acc.max(v.abs()))
}

/// Strictly decreasing within the documented slack.
pub(crate) fn strictly_decreasing<T: Real>(values: &[T]) -> bool {
    let slack = cast::<T>(MONOTONE_SLACK) * scale_of(values);
    values.windows(2).all(|w| w[1] < w[0] - slack)
}

pub(crate) fn strictly_increasing<T: Real>(values: &[T]) -> bool {
    let slack = cast::<T>(MONOTONE_SLACK) * scale_of(values);
    values.windows(2).all(|w| w[1] > w[0] + slack)
}

pub(crate) fn non_increasing<T: Real>(values: &[T]) -> bool {
    let slack = cast::<T>(MONOTONE_SLACK) * scale_of(values);
    values.windows(2).all(|w| w[1] <= w[0] + slack)
}

fn abort<T: Real>(param: T, e: GribovError) -> GribovError {
    GribovError::StudyAborted {
        param: format!("{param}"),
        source: Box::new(e),
    }
}

/// ∮ f(μ) dμ over the circle |μ − μ₀| = radius by the trapezoid rule with
/// midpoint-offset angles, together with max |f| on the loop.
pub(crate) fn trapezoid_loop<T: Real, F>(
    mu0: T,
    radius: T,
    loop_points: usize,
    f: F,
) -> Result<(Complex<T>, T)>
where
    F: Fn(Complex<T>) -> Result<Complex<T>>,
{
    let two_pi = cast::<T>(2.0) * T::PI();
    let lp_t = cast::<T>(loop_points as f64);
    let mut sum = Complex::new(T::zero(), T::zero());
    let mut max_abs = T::zero();
    for k in 0..loop_points {
        let theta = two_pi * (cast::<T>(k as f64) + cast::<T>(0.5)) / lp_t;
        let e = Complex::new(theta.cos(), theta.sin());
        let mu = Complex::new(mu0, T::zero()) + e * radius;
        let v = f(mu)?;
        max_abs = max_abs.max(v.norm());
        // dmu = i r e^{iθ} dθ
        let dmu = Complex::new(T::zero(), T::one()) * e * (radius * two_pi / lp_t);
        sum = sum + v * dmu;
    }
    Ok((sum, max_abs))
}

fn solve_native<T: Real>(p: &GribovParams<T>, n: usize) -> Result<crate::SpectralResult<T>> {
    let (rho_prime, _) = p.native()?;
    let rule = QuadratureRule::gauss(n, T::zero(), rho_prime)?;
    let m = OperatorMatrix::assemble(p, KernelFrame::NativeWeighted, &rule)?;
    power_iteration(&m, solver_tol::<T>(), crate::spectral::DEFAULT_MAX_ITER)
}

fn solver_tol<T: Real>() -> T {
    cast::<T>(crate::spectral::DEFAULT_TOL).max(cast::<T>(100.0) * T::epsilon())
}

/// Sweeps the intercept μ at fixed λ', λ and records (μ, Ω, σ, gap) plus the
/// plain-kernel value at the probe point. Flags: σ strictly increasing,
/// Ω strictly decreasing, kernel probe non-increasing.
pub fn sweep_mu<T: Real>(
    lambda_prime: T,
    lambda: T,
    mu_grid: &[T],
    rule_size: usize,
) -> Result<StudyReport<T>> {
    if mu_grid.len() < 2 || !strictly_increasing(mu_grid) {
        return Err(GribovError::InvalidArgument(
            "mu grid must be strictly increasing with at least two entries".into(),
        ));
    }
    let tol = crate::discretize::assembly_tol::<T>();
    let (py, py1) = (cast::<T>(PROBE_POINT.0), cast::<T>(PROBE_POINT.1));
    let mut records = Vec::with_capacity(mu_grid.len());
    for &mu in mu_grid {
        let p = GribovParams::derive(lambda_prime, mu, lambda).map_err(|e| abort(mu, e))?;
        let r = solve_native(&p, rule_size).map_err(|e| abort(mu, e))?;
        let probe = kernel_n_extended(py, py1, &p, tol).map_err(|e| abort(mu, e))?;
        records.push(StudyRecord {
            param: mu,
            values: vec![r.omega, r.sigma, r.gap, probe],
        });
    }
    let omegas: Vec<T> = records.iter().map(|r| r.values[0]).collect();
    let sigmas: Vec<T> = records.iter().map(|r| r.values[1]).collect();
    let probes: Vec<T> = records.iter().map(|r| r.values[3]).collect();
    let flags = vec![
        Flag {
            name: "sigma_strictly_increasing".into(),
            pass: strictly_increasing(&sigmas),
        },
        Flag {
            name: "omega_strictly_decreasing".into(),
            pass: strictly_decreasing(&omegas),
        },
        Flag {
            name: "kernel_probe_nonincreasing".into(),
            pass: non_increasing(&probes),
        },
    ];
    Ok(StudyReport {
        kind: StudyKind::MuSweep,
        param_name: "mu",
        columns: vec![
            "omega".into(),
            "sigma".into(),
            "gap".into(),
            "kernel_n_probe".into(),
        ],
        records,
        scalars: vec![
            ("lambda_prime".into(), lambda_prime),
            ("lambda".into(), lambda),
        ],
        flags,
        provenance: Provenance {
            rule_size,
            tol: cast::<T>(crate::spectral::DEFAULT_TOL),
            eps: None,
            timestamp_unix: None,
        },
    })
}

/// λ'→0 study in the limit frame on [0, Y_max]: records (ρ', Ω, |Ω − Ω₀|,
/// HS, ‖T_ρ' − T₀‖_HS). Ω₀ and HS₀ are computed once on the same domain and
/// reported as scalars together with the log-log slope of |Ω − Ω₀| vs 1/ρ'.
pub fn lambda_prime_limit<T: Real>(
    mu: T,
    lambda: T,
    rho_prime_grid: &[T],
    rule_size: usize,
    eps_trunc: T,
) -> Result<StudyReport<T>> {
    if rho_prime_grid.len() < 2 || !strictly_increasing(rho_prime_grid) {
        return Err(GribovError::InvalidArgument(
            "rho' grid must be strictly increasing with at least two entries".into(),
        ));
    }
    let y_max = truncation_bound(mu, lambda, eps_trunc)?;
    let p0 = GribovParams::derive(T::zero(), mu, lambda)?;
    let rule0 = QuadratureRule::gauss(rule_size, T::zero(), y_max)?;
    let m0 = OperatorMatrix::assemble(&p0, KernelFrame::LimitWeighted, &rule0)?;
    let r0 = power_iteration(&m0, solver_tol::<T>(), crate::spectral::DEFAULT_MAX_ITER)?;
    let hs0 = hs_norm(&p0, KernelFrame::LimitWeighted, &rule0)?;
    let f0 = FrameFns::new(&p0, KernelFrame::LimitWeighted)?;

    let mut records = Vec::with_capacity(rho_prime_grid.len());
    for &rp in rho_prime_grid {
        if !(rp > T::zero()) {
            return Err(GribovError::InvalidArgument(format!(
                "rho' must be positive, got {rp}"
            )));
        }
        let lp = lambda / rp;
        let p = GribovParams::derive(lp, mu, lambda).map_err(|e| abort(rp, e))?;
        let rule = limit_frame_rule(&p, rule_size, y_max, TAIL_NODES).map_err(|e| abort(rp, e))?;
        let m = OperatorMatrix::assemble(&p, KernelFrame::LimitWeighted, &rule)
            .map_err(|e| abort(rp, e))?;
        let r = power_iteration(&m, solver_tol::<T>(), crate::spectral::DEFAULT_MAX_ITER)
            .map_err(|e| abort(rp, e))?;
        let hs = hs_norm(&p, KernelFrame::LimitWeighted, &rule).map_err(|e| abort(rp, e))?;
        let fa = FrameFns::new(&p, KernelFrame::LimitWeighted)?;
        let hd = hs_distance(&fa, &f0, &rule, &rule0).map_err(|e| abort(rp, e))?;
        records.push(StudyRecord {
            param: rp,
            values: vec![r.omega, (r.omega - r0.omega).abs(), hs, hd],
        });
    }
    let diffs: Vec<T> = records.iter().map(|r| r.values[1]).collect();
    let omegas: Vec<T> = records.iter().map(|r| r.values[0]).collect();
    let hs_dists: Vec<T> = records.iter().map(|r| r.values[3]).collect();
    // |Ω(ρ') − Ω₀| against 1/ρ' on log-log axes
    let slope = (diffs[diffs.len() - 1] / diffs[0]).ln()
        / (rho_prime_grid[0] / rho_prime_grid[rho_prime_grid.len() - 1]).ln();
    let flags = vec![
        Flag {
            name: "omega_diff_strictly_decreasing".into(),
            pass: strictly_decreasing(&diffs),
        },
        Flag {
            name: "omega_all_positive".into(),
            pass: omegas.iter().all(|&o| o > T::zero()),
        },
        Flag {
            name: "hs_dist_strictly_decreasing".into(),
            pass: strictly_decreasing(&hs_dists),
        },
    ];
    Ok(StudyReport {
        kind: StudyKind::LambdaPrimeLimit,
        param_name: "rho_prime",
        columns: vec![
            "omega".into(),
            "omega_diff".into(),
            "hs".into(),
            "hs_dist".into(),
        ],
        records,
        scalars: vec![
            ("omega0".into(), r0.omega),
            ("hs0".into(), hs0),
            ("y_max".into(), y_max),
            ("loglog_slope".into(), slope),
        ],
        flags,
        provenance: Provenance {
            rule_size,
            tol: cast::<T>(crate::spectral::DEFAULT_TOL),
            eps: Some(eps_trunc),
            timestamp_unix: None,
        },
    })
}

/// Pointwise kernel and weight limits: per sample point, the plain-kernel
/// values along the ρ' grid, the weight at the point's first coordinate, and
/// their distances to the λ' = 0 limits. Flags report strict distance decay
/// (and, as a finding, bulk-region monotonicity of the kernel values).
pub fn kernel_limit_study<T: Real>(
    mu: T,
    lambda: T,
    rho_prime_grid: &[T],
    sample_points: &[(T, T)],
) -> Result<StudyReport<T>> {
    if rho_prime_grid.len() < 2 || !strictly_increasing(rho_prime_grid) {
        return Err(GribovError::InvalidArgument(
            "rho' grid must be strictly increasing with at least two entries".into(),
        ));
    }
    if sample_points.is_empty() {
        return Err(GribovError::InvalidArgument(
            "need at least one sample point".into(),
        ));
    }
    let rp_min = rho_prime_grid[0];
    for &(y, y1) in sample_points {
        if !(y > T::zero() && y1 > T::zero() && y < rp_min && y1 < rp_min) {
            return Err(GribovError::DomainViolation {
                name: "sample point",
                value: format!("({y}, {y1})"),
                lo: "0 (exclusive)".into(),
                hi: format!("{rp_min} (exclusive, smallest domain square)"),
            });
        }
    }
    let tol = crate::discretize::assembly_tol::<T>();
    let rho = mu / lambda;
    // limit values per point
    let mut limit_kernel = Vec::with_capacity(sample_points.len());
    let mut limit_weight = Vec::with_capacity(sample_points.len());
    for &(y, y1) in sample_points {
        limit_kernel.push(kernel_limit(y, y1, mu, lambda, tol)?);
        limit_weight.push(weight_r_inf(y, rho)?);
    }

    let mut columns = Vec::new();
    for k in 0..sample_points.len() {
        columns.push(format!("kernel_{k}"));
        columns.push(format!("kernel_dist_{k}"));
        columns.push(format!("weight_{k}"));
        columns.push(format!("weight_dist_{k}"));
    }

    let mut records = Vec::with_capacity(rho_prime_grid.len());
    for &rp in rho_prime_grid {
        let p = GribovParams::derive(lambda / rp, mu, lambda).map_err(|e| abort(rp, e))?;
        let mut values = Vec::with_capacity(columns.len());
        for (k, &(y, y1)) in sample_points.iter().enumerate() {
            let kn = kernel_n_extended(y, y1, &p, tol).map_err(|e| abort(rp, e))?;
            let w = weight_r(y, &p).map_err(|e| abort(rp, e))?;
            values.push(kn);
            values.push((kn - limit_kernel[k]).abs());
            values.push(w);
            values.push((w - limit_weight[k]).abs());
        }
        records.push(StudyRecord { param: rp, values });
    }

    let mut flags = Vec::new();
    for k in 0..sample_points.len() {
        let kd: Vec<T> = records.iter().map(|r| r.values[4 * k + 1]).collect();
        let wd: Vec<T> = records.iter().map(|r| r.values[4 * k + 3]).collect();
        let kv: Vec<T> = records.iter().map(|r| r.values[4 * k]).collect();
        flags.push(Flag {
            name: format!("kernel_dist_{k}_strictly_decreasing"),
            pass: strictly_decreasing(&kd),
        });
        flags.push(Flag {
            name: format!("weight_dist_{k}_strictly_decreasing"),
            pass: strictly_decreasing(&wd),
        });
        flags.push(Flag {
            name: format!("kernel_{k}_nonincreasing"),
            pass: non_increasing(&kv),
        });
    }
    // the zero row survives the whole grid
    let mut zero_row = true;
    for &rp in rho_prime_grid {
        let p = GribovParams::derive(lambda / rp, mu, lambda)?;
        let v = kernel_n_extended(T::zero(), sample_points[0].1, &p, tol)?;
        if v != T::zero() {
            zero_row = false;
        }
    }
    flags.push(Flag {
        name: "zero_row_everywhere".into(),
        pass: zero_row,
    });

    Ok(StudyReport {
        kind: StudyKind::KernelLimit,
        param_name: "rho_prime",
        columns,
        records,
        scalars: vec![("mu".into(), mu), ("lambda".into(), lambda)],
        flags,
        provenance: Provenance {
            rule_size: 0,
            tol,
            eps: None,
            timestamp_unix: None,
        },
    })
}

/// Analyticity probes in the intercept μ.
///
/// (a) Cauchy loop: the weighted kernel at the probe point, evaluated at
/// complex μ on a circle around `mu0` and integrated by the trapezoid rule;
/// an analytic integrand makes the loop vanish to quadrature accuracy.
/// (b) Chebyshev proxy: Ω(μ) sampled at Chebyshev nodes on `cheb_interval`;
/// geometric coefficient decay is reported as tail/head.
///
/// Records are the (μ, Ω) Chebyshev samples in ascending μ; the loop residual,
/// the largest kernel modulus on the loop and tail/head are scalars.
#[allow(clippy::too_many_arguments)]
pub fn analyticity_probe<T: Real>(
    lambda_prime: T,
    lambda: T,
    mu0: T,
    radius: T,
    loop_points: usize,
    cheb_interval: (T, T),
    cheb_nodes: usize,
    rule_size: usize,
) -> Result<StudyReport<T>> {
    if !(lambda_prime > T::zero()) {
        return Err(GribovError::LimitParamsOnly);
    }
    if !(radius > T::zero()) || loop_points < 8 {
        return Err(GribovError::InvalidArgument(
            "need a positive loop radius and at least 8 loop points".into(),
        ));
    }
    let (ca, cb) = cheb_interval;
    if !(ca > T::zero()) || !(cb > ca) || cheb_nodes < 4 {
        return Err(GribovError::InvalidArgument(
            "Chebyshev interval must satisfy 0 < a < b with at least 4 nodes".into(),
        ));
    }
    let rho_prime = lambda / lambda_prime;
    // the disc must stay inside delta >= 0 territory: worst case Re mu = mu0 - radius
    let worst_delta = rho_prime * ((mu0 - radius) / lambda + rho_prime) - T::one();
    if worst_delta < T::zero() {
        return Err(GribovError::OutOfTheory {
            reason: format!(
                "mu-disc of radius {radius} around {mu0} leaves delta >= 0 (worst {worst_delta})"
            ),
        });
    }
    let (py, py1) = (cast::<T>(PROBE_POINT.0), cast::<T>(PROBE_POINT.1));
    if !(py < rho_prime && py1 < rho_prime) {
        return Err(GribovError::DomainViolation {
            name: "probe point",
            value: format!("({py}, {py1})"),
            lo: "0".into(),
            hi: format!("{rho_prime} (exclusive)"),
        });
    }

    // (a) trapezoid Cauchy loop, midpoint-offset angles
    let (loop_sum, max_abs) = trapezoid_loop(mu0, radius, loop_points, |mu| {
        kernel_n_tilde_complex(py, py1, lambda_prime, lambda, mu)
    })?;
    let loop_residual = if max_abs > T::zero() {
        loop_sum.norm() / max_abs
    } else {
        T::zero()
    };

    // (b) Chebyshev fit of Ω(μ)
    let nodes = chebyshev_nodes(cheb_nodes, ca, cb);
    let mut omegas = Vec::with_capacity(cheb_nodes);
    for &mu in &nodes {
        let p = GribovParams::derive(lambda_prime, mu, lambda).map_err(|e| abort(mu, e))?;
        let r = solve_native(&p, rule_size).map_err(|e| abort(mu, e))?;
        omegas.push(r.omega);
    }
    let coeffs = chebyshev_coefficients(&omegas);
    let ratio = tail_head_ratio(&coeffs);

    let mut paired: Vec<(T, T)> = nodes.into_iter().zip(omegas).collect();
    paired.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite mu nodes"));
    let records = paired
        .into_iter()
        .map(|(mu, om)| StudyRecord {
            param: mu,
            values: vec![om],
        })
        .collect();

    let flags = vec![
        Flag {
            name: "loop_residual_below_threshold".into(),
            pass: loop_residual < cast::<T>(LOOP_RESIDUAL_MAX),
        },
        Flag {
            name: "cheb_tail_head_below_threshold".into(),
            pass: ratio < cast::<T>(CHEB_TAIL_HEAD_MAX),
        },
    ];
    Ok(StudyReport {
        kind: StudyKind::Analyticity,
        param_name: "mu",
        columns: vec!["omega".into()],
        records,
        scalars: vec![
            ("loop_residual".into(), loop_residual),
            ("max_abs_kernel".into(), max_abs),
            ("cheb_tail_head".into(), ratio),
            ("mu0".into(), mu0),
            ("radius".into(), radius),
        ],
        flags,
        provenance: Provenance {
            rule_size,
            tol: cast::<T>(crate::spectral::DEFAULT_TOL),
            eps: None,
            timestamp_unix: None,
        },
    })
}
