//! The property-verification suite behind `verify`: every documented claim
//! with its numeric threshold, runnable end to end on one machine. Each
//! criterion reports one headline measure against its pinned threshold.
//!
//! All criteria are `f64`; the thresholds are `f64`-scale claims.

use crate::discretize::{limit_frame_rule, truncation_bound, OperatorMatrix, QuadratureRule};
use crate::model::kernel::{kernel_n, kernel_n_raw};
use crate::model::params::{GribovParams, KernelFrame};
use crate::model::theta::theta;
use crate::spectral::{hs_norm, ode_residual, power_iteration, OdeOptions};
use crate::studies::{kernel_limit_study, lambda_prime_limit, sweep_mu};
use crate::{GribovError, Result};

/// Parameter sets exercised by most criteria.
pub const PARAM_SETS: [(f64, f64, f64); 3] = [(1.0, 1.0, 1.0), (0.5, 2.0, 1.0), (0.25, 1.0, 1.0)];
/// Intercept grid of the monotonicity and positivity criteria.
pub const MU_GRID: [f64; 4] = [0.5, 1.0, 2.0, 4.0];
/// Four-coupling grid (as ρ') of the λ'→0 criteria.
pub const RHO_PRIME_GRID: [f64; 4] = [4.0, 8.0, 16.0, 32.0];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    /// Grid size for every solve.
    pub n: usize,
    /// Power-iteration tolerance.
    pub tol: f64,
    /// Truncation tail weight for limit-frame domains.
    pub eps: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            n: 200,
            tol: 1e-12,
            eps: 1e-12,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionOutcome {
    pub index: usize,
    pub name: &'static str,
    pub measured: f64,
    pub threshold: f64,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub options: VerifyOptions,
    pub outcomes: Vec<CriterionOutcome>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.outcomes.iter().all(|o| o.pass)
    }
}

/// Runs all criteria in order. Returns `Err` only on infrastructure failure
/// (non-convergence, invalid configuration); a criterion that misses its
/// threshold is reported with `pass = false`.
pub fn run_all(opts: &VerifyOptions) -> Result<VerifyReport> {
    let outcomes = vec![
        kernel_form_equivalence(opts)?,
        theta_asymptotics(opts)?,
        hilbert_schmidt_bounds(opts)?,
        jentzsch_suite(opts)?,
        frame_invariance(opts)?,
        mu_monotonicity(opts)?,
        lambda_prime_convergence(opts)?,
        inverse_operator_oracle(opts)?,
        analyticity_probes(opts)?,
        determinism(opts)?,
    ];
    Ok(VerifyReport {
        options: *opts,
        outcomes,
    })
}

/// Low-discrepancy points in the open unit square (additive recurrence with
/// the plastic-number constants); deterministic, no RNG.
fn quasi_random_unit(k: usize) -> (f64, f64) {
    const A1: f64 = 0.754_877_666_246_692_7;
    const A2: f64 = 0.569_840_290_998_053_2;
    let f = |x: f64| x - x.floor();
    (
        f(0.5 + A1 * (k as f64 + 1.0)),
        f(0.5 + A2 * (k as f64 + 1.0)),
    )
}

/// Criterion 1: Both printed kernel forms agree to 1e−12 relative on 10⁴ quasi-random
/// points per parameter set.
fn kernel_form_equivalence(_opts: &VerifyOptions) -> Result<CriterionOutcome> {
    const POINTS: usize = 10_000;
    const TOL: f64 = 1e-13;
    let mut worst = 0.0f64;
    for (lp, mu, lam) in PARAM_SETS {
        let p = GribovParams::derive(lp, mu, lam)?;
        let rp = p.rho_prime().expect("native");
        for k in 0..POINTS {
            let (u, v) = quasi_random_unit(k);
            let y = u * rp;
            let y1 = v * rp;
            let a = kernel_n(y, y1, &p, TOL)?;
            let b = kernel_n_raw(y, y1, &p, TOL)?;
            let denom = a.max(b).max(1e-300);
            let rel = (a - b).abs() / denom;
            if rel > worst {
                worst = rel;
            }
        }
    }
    Ok(CriterionOutcome {
        index: 1,
        name: "kernel-form-equivalence",
        measured: worst,
        threshold: 1e-12,
        pass: worst < 1e-12,
        detail: format!("{} points per parameter set", POINTS),
    })
}

/// Criterion 2: Θ(Υ)/Υ within 1e−4 of 1 at Υ = 1e−6·ρ'; Θ(Υ)·(ρ'−Υ)^δ stabilizes as
/// Υ→ρ': successive-ratio changes decrease, final change below 1%.
fn theta_asymptotics(_opts: &VerifyOptions) -> Result<CriterionOutcome> {
    let p = GribovParams::derive(1.0, 1.0, 1.0)?;
    let rp = 1.0f64;
    let delta = 1.0f64;
    let ups = 1e-6 * rp;
    let ratio_dev = (theta(ups, &p, 1e-13)? / ups - 1.0).abs();
    let ratio_ok = ratio_dev < 1e-4;

    let mut vals = Vec::new();
    for k in 2..=5 {
        let u = rp * (1.0 - 10f64.powi(-k));
        vals.push(theta(u, &p, 1e-13)? * (rp - u).powf(delta));
    }
    let changes: Vec<f64> = vals.windows(2).map(|w| (w[1] / w[0] - 1.0).abs()).collect();
    let decreasing = changes.windows(2).all(|w| w[1] < w[0]);
    let last = *changes.last().expect("nonempty");
    let pass = ratio_ok && decreasing && last < 0.01;
    Ok(CriterionOutcome {
        index: 2,
        name: "theta-asymptotics",
        measured: last,
        threshold: 0.01,
        pass,
        detail: format!(
            "ratio deviation at 1e-6*rho' = {ratio_dev:.2e}; ratio changes {changes:.3?}"
        ),
    })
}

/// Criterion 3: Hilbert–Schmidt norm finite, self-convergent between n = 100 and
/// n = 200 to 1e−6 relative, and Ω ≤ HS, over the full δ ≥ 0 grid.
fn hilbert_schmidt_bounds(opts: &VerifyOptions) -> Result<CriterionOutcome> {
    let mut worst_diff = 0.0f64;
    let mut bound_ok = true;
    let mut worst_margin = f64::INFINITY;
    for (lp, _, lam) in PARAM_SETS {
        for mu in MU_GRID {
            let p = GribovParams::derive(lp, mu, lam)?;
            let rp = p.rho_prime().expect("native");
            let r100 = QuadratureRule::gauss(100, 0.0, rp)?;
            let r200 = QuadratureRule::gauss(200, 0.0, rp)?;
            let h1 = hs_norm(&p, KernelFrame::NativeWeighted, &r100)?;
            let h2 = hs_norm(&p, KernelFrame::NativeWeighted, &r200)?;
            if !h1.is_finite() || !h2.is_finite() {
                bound_ok = false;
            }
            worst_diff = worst_diff.max((h1 - h2).abs() / h2);
            let rule = QuadratureRule::gauss(opts.n, 0.0, rp)?;
            let m = OperatorMatrix::assemble(&p, KernelFrame::NativeWeighted, &rule)?;
            let r = power_iteration(&m, opts.tol, 100_000)?;
            bound_ok &= r.omega <= h2;
            worst_margin = worst_margin.min(h2 - r.omega);
        }
    }
    Ok(CriterionOutcome {
        index: 3,
        name: "hilbert-schmidt-bounds",
        measured: worst_diff,
        threshold: 1e-6,
        pass: worst_diff < 1e-6 && bound_ok,
        detail: format!("omega <= hs everywhere, smallest margin {worst_margin:.3e}"),
    })
}

/// Criterion 4: Power iteration converges within 10⁴ iterations, the eigenvector is
/// strictly positive at every node, the subdominant gap is ≤ 1 − 1e−3 and
/// σ > 0, across the full parameter grid.
fn jentzsch_suite(opts: &VerifyOptions) -> Result<CriterionOutcome> {
    let mut max_gap = 0.0f64;
    let mut max_iters = 0usize;
    let mut all_ok = true;
    for (lp, _, lam) in PARAM_SETS {
        for mu in MU_GRID {
            let p = GribovParams::derive(lp, mu, lam)?;
            let rp = p.rho_prime().expect("native");
            let rule = QuadratureRule::gauss(opts.n, 0.0, rp)?;
            let m = OperatorMatrix::assemble(&p, KernelFrame::NativeWeighted, &rule)?;
            let r = power_iteration(&m, opts.tol, 10_000)?;
            max_iters = max_iters.max(r.iterations);
            max_gap = max_gap.max(r.gap);
            all_ok &= r.eigenvector.iter().all(|&x| x > 0.0);
            all_ok &= r.sigma > 0.0;
        }
    }
    let threshold = 1.0 - 1e-3;
    Ok(CriterionOutcome {
        index: 4,
        name: "jentzsch-suite",
        measured: max_gap,
        threshold,
        pass: max_gap <= threshold && all_ok,
        detail: format!("12 parameter sets, worst iteration count {max_iters}"),
    })
}

/// Criterion 5: Ω from native-frame and limit-frame assemblies agree to 1e−8 relative
/// at (1,1,1).
fn frame_invariance(opts: &VerifyOptions) -> Result<CriterionOutcome> {
    let p = GribovParams::derive(1.0, 1.0, 1.0)?;
    let rp = p.rho_prime().expect("native");
    let native_rule = QuadratureRule::gauss(opts.n, 0.0, rp)?;
    let mn = OperatorMatrix::assemble(&p, KernelFrame::NativeWeighted, &native_rule)?;
    let rn = power_iteration(&mn, opts.tol, 100_000)?;

    let y_max = truncation_bound(p.mu(), p.lambda(), opts.eps)?;
    let limit_rule = limit_frame_rule(&p, opts.n, y_max, crate::studies::TAIL_NODES)?;
    let ml = OperatorMatrix::assemble(&p, KernelFrame::LimitWeighted, &limit_rule)?;
    let rl = power_iteration(&ml, opts.tol, 100_000)?;

    let rel = (rn.omega - rl.omega).abs() / rn.omega;
    Ok(CriterionOutcome {
        index: 5,
        name: "frame-invariance",
        measured: rel,
        threshold: 1e-8,
        pass: rel < 1e-8,
        detail: format!("native {} vs limit {}", rn.omega, rl.omega),
    })
}

/// Criterion 6: σ strictly increasing and Ω strictly decreasing over the μ grid at
/// (λ', λ) = (1, 1); plain kernel at the probe point non-increasing in μ.
fn mu_monotonicity(opts: &VerifyOptions) -> Result<CriterionOutcome> {
    let report = sweep_mu(1.0, 1.0, &MU_GRID, opts.n)?;
    let sigmas = report.column("sigma").expect("sigma column");
    let min_increment = sigmas
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    let pass = report.all_flags_pass();
    Ok(CriterionOutcome {
        index: 6,
        name: "mu-monotonicity",
        measured: min_increment,
        threshold: 0.0,
        pass: pass && min_increment > 0.0,
        detail: format!(
            "sigma increments all above {min_increment:.3e}; flags {}",
            if pass { "all pass" } else { "FAILED" }
        ),
    })
}

/// Criterion 7: |Ω(λ') − Ω₀| strictly decreasing along the ρ' grid with the final
/// value below 25% of the first; pointwise weight and kernel distances to
/// their limits strictly decreasing at all sample points.
fn lambda_prime_convergence(opts: &VerifyOptions) -> Result<CriterionOutcome> {
    let study = lambda_prime_limit(1.0, 1.0, &RHO_PRIME_GRID, opts.n, opts.eps)?;
    let diffs = study.column("omega_diff").expect("omega_diff column");
    let ratio = diffs[diffs.len() - 1] / diffs[0];
    let decreasing = study
        .flags
        .iter()
        .find(|f| f.name == "omega_diff_strictly_decreasing")
        .map(|f| f.pass)
        .unwrap_or(false);
    let positive = study
        .flags
        .iter()
        .find(|f| f.name == "omega_all_positive")
        .map(|f| f.pass)
        .unwrap_or(false);

    let points = [(0.5, 0.7), (0.7, 0.5), (0.3, 0.2)];
    let pw = kernel_limit_study(1.0, 1.0, &RHO_PRIME_GRID, &points)?;
    let pointwise = pw
        .flags
        .iter()
        .filter(|f| f.name.contains("dist"))
        .all(|f| f.pass);

    Ok(CriterionOutcome {
        index: 7,
        name: "lambda-prime-convergence",
        measured: ratio,
        threshold: 0.25,
        pass: ratio < 0.25 && decreasing && positive && pointwise,
        detail: format!(
            "omega diffs {:?}",
            diffs.iter().map(|d| format!("{d:.3e}")).collect::<Vec<_>>()
        ),
    })
}

/// Criterion 8: ODE residual below 1e−6 at 50 interior points for f(y) = y at (1,1,1),
/// with measured refinement order ≥ 1 under (panel → 2·panel, h → h/2).
fn inverse_operator_oracle(opts: &VerifyOptions) -> Result<CriterionOutcome> {
    let p = GribovParams::derive(1.0, 1.0, 1.0)?;
    let rp = p.rho_prime().expect("native");
    let pts: Vec<f64> = (0..50)
        .map(|k| rp * (0.05 + 0.9 * k as f64 / 49.0))
        .collect();
    let f = |y: f64| y;
    let residual = ode_residual(
        &p,
        &f,
        &pts,
        OdeOptions {
            panel_nodes: opts.n / 2,
            quad_tol: 1e-6,
        },
    )?;
    // refinement order: coarse (50 nodes, h = 8e-4 rho') to (100, 4e-4)
    let coarse = ode_residual(
        &p,
        &f,
        &pts,
        OdeOptions {
            panel_nodes: 50,
            quad_tol: 6.4e-5,
        },
    )?;
    let fine = ode_residual(
        &p,
        &f,
        &pts,
        OdeOptions {
            panel_nodes: 100,
            quad_tol: 1.6e-5,
        },
    )?;
    let order = (coarse / fine).log2();
    Ok(CriterionOutcome {
        index: 8,
        name: "inverse-operator-oracle",
        measured: residual,
        threshold: 1e-6,
        pass: residual < 1e-6 && order >= 1.0,
        detail: format!("refinement order {order:.2} (coarse {coarse:.2e}, fine {fine:.2e})"),
    })
}

/// Criterion 9: Kernel Cauchy-loop residual below 1e−10 (64 trapezoid points, radius
/// 0.5 around μ₀ = 1) and Chebyshev tail/head of Ω(μ) on [0.5, 4] with 32
/// nodes below 1e−8.
fn analyticity_probes(opts: &VerifyOptions) -> Result<CriterionOutcome> {
    let report = crate::studies::analyticity_probe(1.0, 1.0, 1.0, 0.5, 64, (0.5, 4.0), 32, opts.n)?;
    let loop_residual = report
        .scalars
        .iter()
        .find(|(n, _)| n == "loop_residual")
        .map(|&(_, v)| v)
        .expect("loop residual scalar");
    let tail_head = report
        .scalars
        .iter()
        .find(|(n, _)| n == "cheb_tail_head")
        .map(|&(_, v)| v)
        .expect("tail/head scalar");
    Ok(CriterionOutcome {
        index: 9,
        name: "analyticity-probes",
        measured: loop_residual,
        threshold: 1e-10,
        pass: loop_residual < 1e-10 && tail_head < 1e-8,
        detail: format!("chebyshev tail/head {tail_head:.3e} (threshold 1e-8)"),
    })
}

/// Criterion 10: Determinism: representative CSV outputs are byte-identical when the
/// producing computation runs twice.
fn determinism(opts: &VerifyOptions) -> Result<CriterionOutcome> {
    let render = || -> Result<Vec<u8>> {
        let mut buf = Vec::new();
        let p = GribovParams::derive(1.0, 1.0, 1.0)?;
        let rule = QuadratureRule::gauss(opts.n, 0.0, 1.0)?;
        let m = OperatorMatrix::assemble(&p, KernelFrame::NativeWeighted, &rule)?;
        let r = power_iteration(&m, opts.tol, 100_000)?;
        crate::report::write_solve_csv(
            &p,
            KernelFrame::NativeWeighted,
            opts.n,
            opts.tol,
            &r,
            &mut buf,
        )
        .map_err(|e| GribovError::InvalidArgument(e.to_string()))?;
        let sweep = sweep_mu(1.0, 1.0, &MU_GRID, opts.n.min(100))?;
        crate::report::write_study_csv(&sweep, &mut buf)
            .map_err(|e| GribovError::InvalidArgument(e.to_string()))?;
        Ok(buf)
    };
    let a = render()?;
    let b = render()?;
    let equal = a == b;
    Ok(CriterionOutcome {
        index: 10,
        name: "determinism",
        measured: if equal { 0.0 } else { 1.0 },
        threshold: 0.5,
        pass: equal,
        detail: format!("{} bytes compared", a.len()),
    })
}
