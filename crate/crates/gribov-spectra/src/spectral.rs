//! Dominant-eigenpair computation, subdominant gap, Hilbert–Schmidt norms,
//! and the differential-operator residual oracle.
//!
//! The positive kernel has a simple, positive, strictly dominant eigenvalue
//! with a positive eigenfunction, which power iteration certifies
//! constructively: positivity is observed at convergence, never enforced.

use crate::discretize::{apply_plain, OperatorMatrix, QuadratureRule};
use crate::error::GribovError;
use crate::model::kernel::FrameFns;
use crate::model::params::{GribovParams, KernelFrame};
use crate::quad::{gauss_legendre_unit, log_add, log_cumulative_rev, log_sum};
use crate::{cast, Real, Result};

/// Default relative tolerance for the dominant eigenpair.
pub const DEFAULT_TOL: f64 = 1e-12;
/// Default iteration budget.
pub const DEFAULT_MAX_ITER: usize = 100_000;

/// Dominant eigenpair of a discretized operator.
///
/// `omega` is the spectral radius of the discretized inverse; `sigma = 1/omega`
/// is the smallest eigenvalue of the underlying differential operator (the
/// reciprocal identification between the operator and its inverse).
/// The eigenvector is unit-norm with the first in-support entry positive.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralResult<T> {
    pub omega: T,
    pub sigma: T,
    pub eigenvector: Vec<T>,
    pub residual: T,
    pub iterations: usize,
    pub gap: T,
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

fn norm<T: Real>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

fn normalize<T: Real>(a: &mut [T]) -> T {
    let n = norm(a);
    if n > T::zero() {
        for x in a.iter_mut() {
            *x = *x / n;
        }
    }
    n
}

/// Positive start vector sin²(y)/y sampled at the nodes; zero outside the
/// kernel support. Positive almost everywhere, so the dominant component is
/// never lost.
fn start_vector<T: Real>(m: &OperatorMatrix<T>) -> Vec<T> {
    m.rule()
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, &y)| {
            if m.is_active(i) {
                let s = y.sin();
                s * s / y
            } else {
                T::zero()
            }
        })
        .collect()
}

/// Rayleigh-quotient power iteration for the dominant eigenpair.
///
/// Stops when the relative Rayleigh change is below `tol` and the residual
/// ‖Mv − Ωv‖ (with ‖v‖ = 1) is below `tol·max(1, Ω)`. Any negative
/// eigenvector entry at convergence aborts with a positivity error. The
/// subdominant gap is estimated afterwards by one-vector deflation.
pub fn power_iteration<T: Real>(
    m: &OperatorMatrix<T>,
    tol: T,
    max_iter: usize,
) -> Result<SpectralResult<T>> {
    if !(tol > T::zero()) {
        return Err(GribovError::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let n = m.n();
    let mut v = start_vector(m);
    if normalize(&mut v) == T::zero() {
        return Err(GribovError::InvalidArgument(
            "start vector vanishes at every node".into(),
        ));
    }
    let mut w = vec![T::zero(); n];
    let mut omega_prev = T::zero();
    let mut residual = T::infinity();
    let mut converged_at = None;
    for k in 1..=max_iter {
        m.apply(&v, &mut w);
        let omega = dot(&v, &w);
        let mut res2 = T::zero();
        for i in 0..n {
            let d = w[i] - omega * v[i];
            res2 = res2 + d * d;
        }
        residual = res2.sqrt();
        let wn = norm(&w);
        if wn == T::zero() {
            return Err(GribovError::NonConvergence {
                max_iter: k,
                residual: "matrix annihilates the iterate".into(),
            });
        }
        let change_ok = (omega - omega_prev).abs() <= tol * omega.abs();
        let res_ok = residual <= tol * omega.abs().max(T::one());
        if change_ok && res_ok {
            converged_at = Some(k);
            // adopt the current iterate, whose residual we just measured
            break;
        }
        for i in 0..n {
            v[i] = w[i] / wn;
        }
        omega_prev = omega;
    }
    let iterations = converged_at.ok_or_else(|| GribovError::NonConvergence {
        max_iter,
        residual: format!("{residual}"),
    })?;
    let omega = dot(&v, {
        m.apply(&v, &mut w);
        &w
    });
    if !(omega > T::zero()) {
        return Err(GribovError::NonConvergence {
            max_iter: iterations,
            residual: format!("non-positive dominant estimate {omega}"),
        });
    }

    // orient: first in-support entry positive
    let first_active = (0..n).find(|&i| m.is_active(i)).unwrap_or(0);
    if v[first_active] < T::zero() {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
    for (i, &x) in v.iter().enumerate() {
        if m.is_active(i) && x < T::zero() {
            return Err(GribovError::PositivityViolation {
                index: i,
                value: format!("{x}"),
            });
        }
    }

    let gap = deflated_gap(m, &v, omega, tol, max_iter)?;
    Ok(SpectralResult {
        omega,
        sigma: omega.recip(),
        eigenvector: v,
        residual,
        iterations,
        gap,
    })
}

/// |λ₂|/Ω with λ₂ estimated by power iteration on the deflated operator
/// M − Ω·v wᵀ/(wᵀv), w being the left dominant vector.
pub fn subdominant_gap<T: Real>(m: &OperatorMatrix<T>, dominant: &SpectralResult<T>) -> Result<T> {
    let tol = cast::<T>(DEFAULT_TOL).max(cast::<T>(100.0) * T::epsilon());
    deflated_gap(
        m,
        &dominant.eigenvector,
        dominant.omega,
        tol,
        DEFAULT_MAX_ITER,
    )
}

fn deflated_gap<T: Real>(
    m: &OperatorMatrix<T>,
    v: &[T],
    omega: T,
    tol: T,
    max_iter: usize,
) -> Result<T> {
    let n = m.n();
    // left dominant vector by power iteration on the transpose
    let mut w = vec![T::zero(); n];
    for (i, x) in w.iter_mut().enumerate() {
        *x = if m.is_active(i) { T::one() } else { T::zero() };
    }
    normalize(&mut w);
    let mut tmp = vec![T::zero(); n];
    let mut prev = T::zero();
    let mut left_ok = false;
    for _ in 0..max_iter {
        m.apply_transpose(&w, &mut tmp);
        let lam = dot(&w, &tmp);
        let nn = norm(&tmp);
        if nn == T::zero() {
            return Err(GribovError::NonConvergence {
                max_iter,
                residual: "transpose annihilates the iterate".into(),
            });
        }
        for i in 0..n {
            w[i] = tmp[i] / nn;
        }
        if (lam - prev).abs() <= tol * lam.abs() {
            left_ok = true;
            break;
        }
        prev = lam;
    }
    if !left_ok {
        return Err(GribovError::NonConvergence {
            max_iter,
            residual: "left dominant vector did not converge".into(),
        });
    }
    let wv = dot(&w, v);
    if wv.abs() < cast::<T>(1e-300) {
        return Err(GribovError::DeflationBreakdown);
    }

    // deflated iteration; deterministic irregular start, projected once
    let mut x: Vec<T> = (0..n)
        .map(|i| {
            if m.is_active(i) {
                cast::<T>(((i + 1) as f64).cos())
            } else {
                T::zero()
            }
        })
        .collect();
    let c = dot(&w, &x) / wv;
    for i in 0..n {
        x[i] = x[i] - c * v[i];
    }
    if normalize(&mut x) == T::zero() {
        return Ok(T::zero());
    }
    let gap_tol = tol.max(cast::<T>(1e-13));
    let mut lam2 = T::zero();
    for _ in 0..max_iter {
        m.apply(&x, &mut tmp);
        let c = dot(&w, &tmp) / wv;
        for i in 0..n {
            tmp[i] = tmp[i] - c * v[i];
        }
        let theta = dot(&x, &tmp);
        let nn = norm(&tmp);
        if nn == T::zero() {
            // deflated operator annihilates the iterate: single nonzero eigenvalue
            return Ok(T::zero());
        }
        for i in 0..n {
            x[i] = tmp[i] / nn;
        }
        if (theta.abs() - lam2).abs() <= gap_tol * theta.abs().max(cast::<T>(1e-30)) {
            lam2 = theta.abs();
            break;
        }
        lam2 = theta.abs();
    }
    Ok(lam2 / omega)
}

/// Hilbert–Schmidt norm √(∬ T² dy dy₁) of the symmetrized kernel, computed
/// with the double integral split at the diagonal so each panel is smooth.
pub fn hs_norm<T: Real>(
    p: &GribovParams<T>,
    frame: KernelFrame,
    rule: &QuadratureRule<T>,
) -> Result<T> {
    let fns = FrameFns::new(p, frame)?;
    let log_i = hs_bilinear(&fns, &fns, rule)?;
    Ok((cast::<T>(0.5) * log_i).exp())
}

/// ‖A − B‖_HS between two frame kernels on a common limit-frame domain,
/// via ‖A‖² − 2⟨A, B⟩ + ‖B‖².
pub(crate) fn hs_distance<T: Real>(
    fa: &FrameFns<T>,
    fb: &FrameFns<T>,
    rule_a: &QuadratureRule<T>,
    rule_b: &QuadratureRule<T>,
) -> Result<T> {
    let iaa = hs_bilinear(fa, fa, rule_a)?.exp();
    let ibb = hs_bilinear(fb, fb, rule_b)?.exp();
    let iab = hs_bilinear(fa, fb, rule_a)?.exp();
    let two = cast::<T>(2.0);
    Ok((iaa + ibb - two * iab).max(T::zero()).sqrt())
}

/// log ∬ A(y, y₁) B(y, y₁) dy dy₁ for two diagonal kernels
/// A = aA(y)·ΘA(min)·bA(y₁) (B likewise), split at the diagonal:
/// the y-integral is cut at y₁, so the min-kink never crosses a panel.
pub(crate) fn hs_bilinear<T: Real>(
    fa: &FrameFns<T>,
    fb: &FrameFns<T>,
    outer_rule: &QuadratureRule<T>,
) -> Result<T> {
    let tol = crate::discretize::assembly_tol::<T>();
    let hi = outer_rule
        .upper()
        .min(fa.support_upper())
        .min(fb.support_upper());
    // outer nodes strictly inside the common support
    let mut outer: Vec<(T, T)> = Vec::new();
    for (&y, &w) in outer_rule.nodes().iter().zip(outer_rule.weights()) {
        if y < hi {
            outer.push((y, w));
        }
    }
    if outer.is_empty() {
        return Err(GribovError::InvalidRule(
            "no quadrature nodes inside the kernel support".into(),
        ));
    }

    // micro-grid: per gap between outer nodes, a 12-point Gauss panel for the
    // inner cumulative F(t) = ∫_0^t ΘA ΘB aA aB
    const INNER_ORDER: usize = 12;
    let (unit_x, unit_w) = gauss_legendre_unit::<T>(INNER_ORDER);
    let half = cast::<T>(0.5);
    let mut points: Vec<T> = Vec::with_capacity(outer.len() * (INNER_ORDER + 1));
    let mut micro_w: Vec<T> = Vec::with_capacity(points.capacity());
    let mut edge_index = Vec::with_capacity(outer.len());
    let mut prev = T::zero();
    for &(y, _) in &outer {
        let mid = half * (prev + y);
        let h = half * (y - prev);
        for (&x, &w) in unit_x.iter().zip(&unit_w) {
            points.push(mid + h * x);
            micro_w.push(w * h);
        }
        points.push(y);
        micro_w.push(T::zero());
        edge_index.push(points.len() - 1);
        prev = y;
    }

    let lt_a = fa.log_theta_table(&points, tol)?;
    let lt_b = fb.log_theta_table(&points, tol)?;

    // cumulative log F at the outer nodes
    let mut log_f_at_outer = Vec::with_capacity(outer.len());
    let mut acc = T::neg_infinity();
    let mut idx = 0usize;
    for &edge in &edge_index {
        let mut terms = Vec::with_capacity(INNER_ORDER);
        while idx < edge {
            let y = points[idx];
            terms.push(micro_w[idx].ln() + lt_a[idx] + lt_b[idx] + fa.log_a(y) + fb.log_a(y));
            idx += 1;
        }
        idx += 1; // skip the edge itself
        acc = log_add(acc, log_sum(&terms));
        log_f_at_outer.push(acc);
    }

    // reverse cumulative log G(t) = ∫_t^hi aA aB
    let outer_ys: Vec<T> = outer.iter().map(|&(y, _)| y).collect();
    let log_g = log_cumulative_rev(|s: T| fa.log_a(s) + fb.log_a(s), &outer_ys, hi, tol)?;

    let mut i1_terms = Vec::with_capacity(outer.len());
    let mut i2_terms = Vec::with_capacity(outer.len());
    for (k, &(y1, w)) in outer.iter().enumerate() {
        let lb = fa.log_b(y1) + fb.log_b(y1);
        let lt = lt_a[edge_index[k]] + lt_b[edge_index[k]];
        i1_terms.push(w.ln() + lb + log_f_at_outer[k]);
        i2_terms.push(w.ln() + lb + lt + log_g[k]);
    }
    let total = log_add(log_sum(&i1_terms), log_sum(&i2_terms));
    if total.is_nan() || total == T::infinity() {
        return Err(GribovError::QuadratureNonConvergence(
            "non-finite Hilbert-Schmidt panel".into(),
        ));
    }
    Ok(total)
}

/// Smallest eigenvalue σ(λ', μ) = 1/Ω of the differential operator, through
/// the spectral radius of its discretized inverse. Uses the native frame for
/// λ' > 0 and the limit frame for λ' = 0 (rule on [0, Y_max]).
pub fn smallest_eigenvalue<T: Real>(
    p: &GribovParams<T>,
    rule: &QuadratureRule<T>,
) -> Result<SpectralResult<T>> {
    if !p.out_of_theory() {
        if !(p.mu() > T::zero()) {
            return Err(GribovError::OutOfTheory {
                reason: format!("mu = {} must be > 0", p.mu()),
            });
        }
        if let Some(d) = p.delta() {
            if d < T::zero() {
                return Err(GribovError::OutOfTheory {
                    reason: format!("delta = {d} must be >= 0"),
                });
            }
        }
    }
    let frame = if p.is_limit() {
        KernelFrame::LimitWeighted
    } else {
        KernelFrame::NativeWeighted
    };
    let m = OperatorMatrix::assemble(p, frame, rule)?;
    let tol = cast::<T>(DEFAULT_TOL).max(cast::<T>(100.0) * T::epsilon());
    power_iteration(&m, tol, DEFAULT_MAX_ITER)
}

/// Options for the differential-residual oracle.
#[derive(Debug, Clone, Copy)]
pub struct OdeOptions<T> {
    /// Gauss nodes per split panel when evaluating u.
    pub panel_nodes: usize,
    /// Relative tolerance ascribed to the panel quadrature; the finite
    /// difference step is h = √(quad_tol)·ρ'/10.
    pub quad_tol: T,
}

impl<T: Real> Default for OdeOptions<T> {
    fn default() -> Self {
        Self {
            panel_nodes: 100,
            quad_tol: cast::<T>(1e-6),
        }
    }
}

/// End-to-end oracle that the kernel inverts the differential operator:
/// applies the plain kernel to a source f with f(0) = 0, differentiates the
/// result by central finite differences, and returns the largest normalized
/// residual |(λ'y² − λy)u'' + (λy² + μy)u' − f(y)| / max(1, |f(y)|) over the
/// sample points (which must keep a margin of 0.05·ρ' from both ends).
pub fn ode_residual<T: Real>(
    p: &GribovParams<T>,
    f: &dyn Fn(T) -> T,
    sample_points: &[T],
    opts: OdeOptions<T>,
) -> Result<T> {
    let (rho_prime, _) = p.native()?;
    let f0 = f(T::zero());
    if f0 != T::zero() {
        return Err(GribovError::SourceNotVanishing(format!("{f0}")));
    }
    let margin = cast::<T>(0.05) * rho_prime;
    // rounding slack so grid endpoints like 0.05 + 0.9*k/(m-1) stay admissible
    let slack = cast::<T>(1e-9) * rho_prime;
    let h = opts.quad_tol.sqrt() * rho_prime / cast::<T>(10.0);
    let lp = p.lambda_prime();
    let lam = p.lambda();
    let mu = p.mu();
    let mut worst = T::zero();
    for &y in sample_points {
        if y < margin - slack || y > rho_prime - margin + slack {
            return Err(GribovError::DomainViolation {
                name: "sample point",
                value: format!("{y}"),
                lo: format!("{margin}"),
                hi: format!("{}", rho_prime - margin),
            });
        }
        let um = apply_plain(p, f, y - h, opts.panel_nodes)?;
        let u0 = apply_plain(p, f, y, opts.panel_nodes)?;
        let up = apply_plain(p, f, y + h, opts.panel_nodes)?;
        let d1 = (up - um) / (cast::<T>(2.0) * h);
        let d2 = (up - cast::<T>(2.0) * u0 + um) / (h * h);
        let lhs = (lp * y * y - lam * y) * d2 + (lam * y * y + mu * y) * d1;
        let fv = f(y);
        let r = (lhs - fv).abs() / fv.abs().max(T::one());
        if r > worst {
            worst = r;
        }
    }
    Ok(worst)
}
