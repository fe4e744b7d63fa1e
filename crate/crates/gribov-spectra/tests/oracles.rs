//! Cross-validation against independent oracles: an adaptive Simpson
//! integrator (different rule, different substitution, linear domain) for the
//! Θ integral and kernel compositions, grid-refinement and truncation
//! self-convergence for the discretized operator, and the two quadrature
//! paths for the plain-kernel action.

use gribov_spectra::discretize::limit_frame_rule;
use gribov_spectra::studies::TAIL_NODES;
use gribov_spectra::{
    apply_plain, kernel_limit, kernel_n, ode_residual, power_iteration, smallest_eigenvalue, theta,
    truncation_bound, KernelFrame, Matrix64, OdeOptions, Params64, Rule64,
};

/// Adaptive-bisection Simpson, linear domain. Independent of the production
/// quadrature in both rule and domain handling.
fn simpson_adaptive(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        let m = 0.5 * (a + b);
        (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b))
    }
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, whole: f64, tol: f64, depth: usize) -> f64 {
        let m = 0.5 * (a + b);
        let left = simpson(f, a, m);
        let right = simpson(f, m, b);
        if depth > 60 || (left + right - whole).abs() <= 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        rec(f, a, m, left, 0.5 * tol, depth + 1) + rec(f, m, b, right, 0.5 * tol, depth + 1)
    }
    let whole = simpson(f, a, b);
    rec(f, a, b, whole, tol, 0)
}

fn p111() -> Params64 {
    Params64::derive(1.0, 1.0, 1.0).unwrap()
}

#[test]
fn theta_matches_simpson_oracle() {
    // Θ(0.5) at rho' = delta = 1 against the independent oracle at tol 1e-12
    let p = p111();
    let oracle = simpson_adaptive(&|s: f64| (-s).exp() * (1.0 - s).powi(-2), 0.0, 0.5, 1e-12);
    let got = theta(0.5, &p, 1e-13).unwrap();
    assert!(
        ((got - oracle) / oracle).abs() < 1e-10,
        "theta {got} vs simpson {oracle}"
    );
}

#[test]
fn kernel_matches_factor_composition() {
    // N(0.5, 0.25) against (1/(λ·0.25))·e^{0.25}·(1−0.25)·Θ_oracle(0.25)
    let p = p111();
    let theta_oracle =
        simpson_adaptive(&|s: f64| (-s).exp() * (1.0 - s).powi(-2), 0.0, 0.25, 1e-13);
    let composed = (1.0 / 0.25) * 0.25f64.exp() * 0.75 * theta_oracle;
    let got = kernel_n(0.5, 0.25, &p, 1e-13).unwrap();
    assert!(((got - composed) / composed).abs() < 1e-9);
}

#[test]
fn limit_kernel_matches_inner_quadrature_oracle() {
    // N₀(0.5, 0.25) at μ = λ = 1: closed-form prefactor times Simpson inner integral
    let inner = simpson_adaptive(&|u: f64| (0.5 * u * u + u).exp(), 0.0, 0.25, 1e-13);
    let oracle = (1.0 / 0.25) * (-0.25f64 * 0.25 / 2.0 - 0.25).exp() * inner;
    let got = kernel_limit(0.5, 0.25, 1.0, 1.0, 1e-13).unwrap();
    assert!(((got - oracle) / oracle).abs() < 1e-10, "{got} vs {oracle}");
}

#[test]
fn log_domain_matches_linear_composition() {
    // log-domain kernel evaluation against direct linear-domain factor products
    for (lp, mu, lam) in [(1.0, 1.0, 1.0), (0.5, 2.0, 1.0)] {
        let p = Params64::derive(lp, mu, lam).unwrap();
        let rp = p.rho_prime().unwrap();
        let d = p.delta().unwrap();
        for (y, y1) in [(0.31, 0.57), (0.9, 0.4), (0.62, 0.62)] {
            let (y, y1) = (y * rp, y1 * rp);
            let th = simpson_adaptive(
                &|s: f64| (-rp * s).exp() * (1.0 - s / rp).powf(-(d + 1.0)),
                0.0,
                y.min(y1),
                1e-14,
            );
            let linear = (rp * y1).exp() * (1.0 - y1 / rp).powf(d) * th / (lam * y1);
            let got = kernel_n(y, y1, &p, 1e-13).unwrap();
            assert!(
                ((got - linear) / linear).abs() < 1e-10,
                "({y},{y1}): {got} vs {linear}"
            );
        }
    }
}

/// Grid refinement: the dominant eigenvalue converges at the algebraic rate
/// set by the diagonal kink of min(y, y₁); increments must shrink
/// monotonically with a contraction factor near 4 per doubling.
#[test]
fn grid_convergence_monotone_shrinking() {
    let p = p111();
    let mut omegas = Vec::new();
    for n in [50usize, 100, 200, 400] {
        let rule = Rule64::gauss(n, 0.0, 1.0).unwrap();
        let m = Matrix64::assemble(&p, KernelFrame::NativeWeighted, &rule).unwrap();
        omegas.push(power_iteration(&m, 1e-12, 100_000).unwrap().omega);
    }
    let increments: Vec<f64> = omegas
        .windows(2)
        .map(|w| (w[1] - w[0]).abs() / omegas[3])
        .collect();
    assert!(
        increments.windows(2).all(|w| w[1] < w[0]),
        "increments not shrinking: {increments:?}"
    );
    // second-order contraction
    for w in increments.windows(2) {
        let ratio = w[0] / w[1];
        assert!(ratio > 2.0, "contraction factor {ratio} too small");
    }
    assert!(
        increments[2] < 1e-4,
        "final increment too large: {increments:?}"
    );
    assert!(
        increments[1] < 2e-4,
        "n = 100 vs 200 increment too large: {increments:?}"
    );
}

/// Truncation self-convergence for the half-line limit operator: extending
/// the domain from Y_max(eps) to twice that (same nodes plus a tail panel)
/// shifts the eigenvalue by the tail weight scale √eps, and extending again
/// changes nothing measurable.
#[test]
fn truncation_tail_convergence() {
    let p0 = Params64::derive(0.0, 1.0, 1.0).unwrap();
    let y_max = truncation_bound(1.0, 1.0, 1e-12).unwrap();
    let base = Rule64::gauss(200, 0.0, y_max).unwrap();
    let m1 = Matrix64::assemble(&p0, KernelFrame::LimitWeighted, &base).unwrap();
    let o1 = power_iteration(&m1, 1e-12, 100_000).unwrap().omega;

    let ext2 = base
        .clone()
        .concat(Rule64::gauss(64, y_max, 2.0 * y_max).unwrap())
        .unwrap();
    let m2 = Matrix64::assemble(&p0, KernelFrame::LimitWeighted, &ext2).unwrap();
    let o2 = power_iteration(&m2, 1e-12, 100_000).unwrap().omega;

    let ext3 = ext2
        .clone()
        .concat(Rule64::gauss(64, 2.0 * y_max, 3.0 * y_max).unwrap())
        .unwrap();
    let m3 = Matrix64::assemble(&p0, KernelFrame::LimitWeighted, &ext3).unwrap();
    let o3 = power_iteration(&m3, 1e-12, 100_000).unwrap().omega;

    // the first doubling feels the √eps-scale tail (measured ~5e-7)
    assert!(((o2 - o1) / o1).abs() < 1e-5, "{o1} vs {o2}");
    // beyond twice the bound the tail is gone
    assert!(((o3 - o2) / o2).abs() < 1e-9, "{o2} vs {o3}");
}

/// Two quadrature paths for the plain-kernel action: diagonal-split panels
/// against single-rule node summation (which crosses the kink and carries the
/// grid's algebraic error, hence the loose tolerance).
#[test]
fn apply_plain_cross_validates_matrix_action() {
    let p = p111();
    let rule = Rule64::gauss(200, 0.0, 1.0).unwrap();
    for y in [0.3, 0.5, 0.7] {
        // Nystrom interpolation of the assembled plain action at y:
        // u(y) = Σ_j N(y, y_j) f(y_j) w_j over the assembly's node set
        let mut u_nys = 0.0;
        for (&yj, &wj) in rule.nodes().iter().zip(rule.weights()) {
            u_nys += kernel_n(y, yj, &p, 1e-13).unwrap() * yj * wj;
        }
        let u_split = apply_plain(&p, &|x| x, y, 100).unwrap();
        assert!(
            (u_split - u_nys).abs() < 3e-5,
            "y={y}: split {u_split} vs nystrom {u_nys}"
        );
    }
}

#[test]
fn apply_plain_matches_assembled_plain_matrix_at_nodes() {
    // the assembled plain-frame action and the split-panel evaluation agree
    // at the nodes to the same kink-limited accuracy
    let p = p111();
    let rule = Rule64::gauss(120, 0.0, 1.0).unwrap();
    let m = Matrix64::assemble(&p, KernelFrame::Plain, &rule).unwrap();
    let f: Vec<f64> = rule.nodes().to_vec();
    let mut out = vec![0.0; rule.len()];
    m.apply(&f, &mut out);
    for i in [10, 60, 100] {
        let split = apply_plain(&p, &|x| x, rule.nodes()[i], 100).unwrap();
        assert!(
            (split - out[i]).abs() < 1e-4,
            "node {i}: {split} vs {}",
            out[i]
        );
    }
}

/// ∬ T² dy dy₁ equals ∬ Ñ² r(y) r(y₁) dy dy₁: the production panel machinery
/// against an independent nested-Gauss evaluation built from the pointwise
/// weighted kernel and weight, split at the diagonal.
#[test]
fn hs_identity_against_weighted_kernel() {
    use gribov_spectra::{hs_norm, kernel_n_tilde, weight_r};
    let p = p111();
    let rule = Rule64::gauss(150, 0.0, 1.0).unwrap();
    let hs = hs_norm(&p, KernelFrame::NativeWeighted, &rule).unwrap();
    let i_production = hs * hs;

    // nested Gauss: outer y1, inner split at y = y1
    let outer = Rule64::gauss(60, 0.0, 1.0).unwrap();
    let mut total = 0.0;
    for (&y1, &w1) in outer.nodes().iter().zip(outer.weights()) {
        let integrand = |y: f64| {
            let nt = kernel_n_tilde(y, y1, &p, 1e-13).unwrap();
            nt * nt * weight_r(y, &p).unwrap() * weight_r(y1, &p).unwrap()
        };
        let lower = Rule64::gauss(40, 0.0, y1).unwrap().integrate(integrand);
        let upper = Rule64::gauss(40, y1, 1.0).unwrap().integrate(integrand);
        total += w1 * (lower + upper);
    }
    assert!(
        ((i_production - total) / total).abs() < 1e-8,
        "production {i_production} vs nested {total}"
    );
}

#[test]
fn omega_bounded_by_hs_in_limit_frame() {
    // the spectral radius stays below the Hilbert-Schmidt norm in the limit
    // frame as well, for both the limit operator and a finite-rho' kernel
    let y_max = truncation_bound(1.0, 1.0, 1e-12).unwrap();
    let p0 = Params64::derive(0.0, 1.0, 1.0).unwrap();
    let rule0 = Rule64::gauss(150, 0.0, y_max).unwrap();
    let m0 = Matrix64::assemble(&p0, KernelFrame::LimitWeighted, &rule0).unwrap();
    let o0 = power_iteration(&m0, 1e-12, 100_000).unwrap().omega;
    let h0 = gribov_spectra::hs_norm(&p0, KernelFrame::LimitWeighted, &rule0).unwrap();
    assert!(o0 <= h0, "omega {o0} vs hs {h0}");

    let p = Params64::derive(0.25, 1.0, 1.0).unwrap();
    let rule = limit_frame_rule(&p, 150, y_max, TAIL_NODES).unwrap();
    let m = Matrix64::assemble(&p, KernelFrame::LimitWeighted, &rule).unwrap();
    let o = power_iteration(&m, 1e-12, 100_000).unwrap().omega;
    let h = gribov_spectra::hs_norm(&p, KernelFrame::LimitWeighted, &rule).unwrap();
    assert!(o <= h, "omega {o} vs hs {h}");
}

#[test]
fn sigma_orders_with_mu() {
    // σ(1,2,1) > σ(1,1,1)
    let rule = Rule64::gauss(120, 0.0, 1.0).unwrap();
    let s11 = smallest_eigenvalue(&p111(), &rule).unwrap().sigma;
    let p21 = Params64::derive(1.0, 2.0, 1.0).unwrap();
    let s21 = smallest_eigenvalue(&p21, &rule).unwrap().sigma;
    assert!(s21 > s11, "sigma(1,2,1) = {s21} vs sigma(1,1,1) = {s11}");
}

#[test]
fn sigma_frame_cross_check() {
    // identical sigma whether assembled in the native or the limit frame
    let p = p111();
    let rule = Rule64::gauss(150, 0.0, 1.0).unwrap();
    let native = smallest_eigenvalue(&p, &rule).unwrap().sigma;
    let y_max = truncation_bound(1.0, 1.0, 1e-12).unwrap();
    let lrule = limit_frame_rule(&p, 150, y_max, TAIL_NODES).unwrap();
    let m = Matrix64::assemble(&p, KernelFrame::LimitWeighted, &lrule).unwrap();
    let limit = power_iteration(&m, 1e-12, 100_000).unwrap().sigma;
    assert!(
        ((native - limit) / native).abs() < 1e-8,
        "{native} vs {limit}"
    );
}

#[test]
fn ode_residual_second_source() {
    // smooth sinc²-like source y·(sin y / y)² = sin²(y) at (0.5, 2, 1)
    let p = Params64::derive(0.5, 2.0, 1.0).unwrap();
    let rp = p.rho_prime().unwrap();
    let pts: Vec<f64> = (0..50)
        .map(|k| rp * (0.05 + 0.9 * k as f64 / 49.0))
        .collect();
    let r = ode_residual(
        &p,
        &|y: f64| y.sin() * y.sin(),
        &pts,
        OdeOptions {
            panel_nodes: 100,
            quad_tol: 1e-6,
        },
    )
    .unwrap();
    assert!(r < 1e-5, "residual {r}");
}

#[test]
fn exploratory_override_is_recorded() {
    // delta < 0 requires the exploratory constructor; the solve still runs
    let p = Params64::derive_exploratory(4.0, 0.1, 1.0).unwrap();
    assert!(p.out_of_theory());
    let rule = Rule64::gauss(60, 0.0, p.rho_prime().unwrap()).unwrap();
    let r = smallest_eigenvalue(&p, &rule).unwrap();
    assert!(r.omega > 0.0);
}
