//! Quadrature rules and Nyström assembly of the discretized operator,
//! plus domain-truncation logic for the half-line limit operator.

use crate::error::GribovError;
use crate::model::kernel::FrameFns;
use crate::model::params::{GribovParams, KernelFrame};
use crate::quad::gauss_legendre_unit;
use crate::{cast, Real, Result};

/// Default relative tolerance for the inner Θ quadratures during assembly.
pub const ASSEMBLY_THETA_TOL: f64 = 1e-13;

/// Assembly tolerance adapted to the scalar type (the f64 default is not
/// reachable in f32 arithmetic).
pub(crate) fn assembly_tol<T: Real>() -> T {
    cast::<T>(ASSEMBLY_THETA_TOL).max(cast::<T>(100.0) * T::epsilon())
}

/// How the matrix entries were produced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssemblyMeta<T> {
    /// Relative tolerance of the inner Θ quadratures.
    pub theta_tol: T,
    /// Entries were combined in log domain and exponentiated once.
    pub log_domain: bool,
}

/// Nodes and weights on an interval. Nodes are strictly interior, ordered,
/// with positive weights summing to the interval length.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule<T> {
    lower: T,
    upper: T,
    nodes: Vec<T>,
    weights: Vec<T>,
    exactness: usize,
}

impl<T: Real> QuadratureRule<T> {
    /// Gauss–Legendre rule mapped affinely to (lower, upper); deterministic
    /// for fixed inputs. Exact for polynomials of degree ≤ 2n − 1.
    pub fn gauss(n: usize, lower: T, upper: T) -> Result<Self> {
        if n < 2 {
            return Err(GribovError::InvalidRule(format!(
                "need at least 2 nodes, got {n}"
            )));
        }
        if !(upper > lower) {
            return Err(GribovError::InvalidRule(format!(
                "degenerate interval [{lower}, {upper}]"
            )));
        }
        let (unit_nodes, unit_weights) = gauss_legendre_unit::<T>(n);
        let half = cast::<T>(0.5);
        let mid = half * (lower + upper);
        let h = half * (upper - lower);
        let nodes = unit_nodes.iter().map(|&x| mid + h * x).collect();
        let weights = unit_weights.iter().map(|&w| w * h).collect();
        Ok(Self {
            lower,
            upper,
            nodes,
            weights,
            exactness: 2 * n - 1,
        })
    }

    /// Joins two rules on adjacent intervals into one composite rule.
    pub fn concat(self, other: Self) -> Result<Self> {
        if self.upper != other.lower {
            return Err(GribovError::InvalidRule(format!(
                "panels not contiguous: [{}, {}] then [{}, {}]",
                self.lower, self.upper, other.lower, other.upper
            )));
        }
        let mut nodes = self.nodes;
        nodes.extend(other.nodes);
        let mut weights = self.weights;
        weights.extend(other.weights);
        Ok(Self {
            lower: self.lower,
            upper: other.upper,
            nodes,
            weights,
            exactness: self.exactness.min(other.exactness),
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn lower(&self) -> T {
        self.lower
    }

    pub fn upper(&self) -> T {
        self.upper
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// Degree up to which the rule integrates polynomials exactly.
    pub fn exactness_degree(&self) -> usize {
        self.exactness
    }

    /// Σ w_i f(x_i).
    pub fn integrate<F: Fn(T) -> T>(&self, f: F) -> T {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(T::zero(), |acc, (&x, &w)| acc + w * f(x))
    }
}

/// Smallest Y_max with r∞(Y_max) ≤ eps: Y_max = −ρ + √(ρ² + ln(1/eps)).
/// The discarded tail weight beyond Y_max is below eps.
pub fn truncation_bound<T: Real>(mu: T, lambda: T, eps: T) -> Result<T> {
    if !(lambda > T::zero()) {
        return Err(GribovError::NonpositiveLambda(format!("{lambda}")));
    }
    if !(eps > T::zero()) || !(eps < T::one()) {
        return Err(GribovError::InvalidArgument(format!(
            "eps must lie in (0, 1), got {eps}"
        )));
    }
    let rho = mu / lambda;
    Ok(-rho + (rho * rho + eps.recip().ln()).sqrt())
}

/// Quadrature rule for the limit frame on [0, y_max].
///
/// For λ' > 0 with ρ' < y_max the kernel vanishes identically beyond ρ', and
/// a node straddling that cut would degrade convergence; the rule is built as
/// a composite with `n` nodes on the active panel [0, ρ'] and `tail_nodes` on
/// the dead panel [ρ', y_max]. Otherwise a single Gauss rule on [0, y_max]
/// (capped at ρ' when ρ' ≤ y_max is the whole support) is returned.
pub fn limit_frame_rule<T: Real>(
    p: &GribovParams<T>,
    n: usize,
    y_max: T,
    tail_nodes: usize,
) -> Result<QuadratureRule<T>> {
    if !(y_max > T::zero()) {
        return Err(GribovError::InvalidRule(format!(
            "y_max must be positive, got {y_max}"
        )));
    }
    match p.rho_prime() {
        Some(rho_prime) if rho_prime < y_max => {
            let active = QuadratureRule::gauss(n, T::zero(), rho_prime)?;
            let tail = QuadratureRule::gauss(tail_nodes.max(2), rho_prime, y_max)?;
            active.concat(tail)
        }
        _ => QuadratureRule::gauss(n, T::zero(), y_max),
    }
}

/// Discretized symmetrized kernel with frame metadata: entry(i, j) =
/// T(node_i, node_j) · weight_j. Immutable once assembled.
#[derive(Debug, Clone)]
pub struct OperatorMatrix<T: Real> {
    params: GribovParams<T>,
    frame: KernelFrame,
    rule: QuadratureRule<T>,
    entries: Vec<T>,
    active: Vec<bool>,
    meta: AssemblyMeta<T>,
}

impl<T: Real> OperatorMatrix<T> {
    /// Nyström assembly in the given frame. The rule interval must match the
    /// frame domain ([0, ρ'] native/plain, [0, Y_max] limit).
    pub fn assemble(
        p: &GribovParams<T>,
        frame: KernelFrame,
        rule: &QuadratureRule<T>,
    ) -> Result<Self> {
        let fns = FrameFns::new(p, frame)?;
        if rule.lower() != T::zero() {
            return Err(GribovError::InvalidRule(format!(
                "rule must start at 0, got {}",
                rule.lower()
            )));
        }
        match frame {
            KernelFrame::NativeWeighted | KernelFrame::Plain => {
                let (rho_prime, _) = p.native()?;
                let rel = ((rule.upper() - rho_prime) / rho_prime).abs();
                if rel > cast::<T>(1e-12) {
                    return Err(GribovError::FrameMismatch {
                        frame: frame.name(),
                        reason: format!(
                            "rule interval ends at {} but the native domain ends at {rho_prime}",
                            rule.upper()
                        ),
                    });
                }
            }
            KernelFrame::LimitWeighted => {}
        }

        let tol = assembly_tol::<T>();
        let n = rule.len();
        let upper = fns.support_upper();
        let active: Vec<bool> = rule.nodes().iter().map(|&y| y < upper).collect();
        let in_support: Vec<T> = rule
            .nodes()
            .iter()
            .copied()
            .filter(|&y| y < upper)
            .collect();
        let lt_support = fns.log_theta_table(&in_support, tol)?;

        let mut log_a = vec![T::neg_infinity(); n];
        let mut log_b = vec![T::neg_infinity(); n];
        let mut log_t = vec![T::neg_infinity(); n];
        let mut k = 0usize;
        for i in 0..n {
            if active[i] {
                let y = rule.nodes()[i];
                log_a[i] = fns.log_a(y);
                log_b[i] = fns.log_b(y);
                log_t[i] = lt_support[k];
                k += 1;
            }
        }

        let mut entries = vec![T::zero(); n * n];
        for i in 0..n {
            if !active[i] {
                continue;
            }
            for j in 0..n {
                if !active[j] {
                    continue;
                }
                let ltm = if i <= j { log_t[i] } else { log_t[j] };
                let lg = log_a[i] + ltm + log_b[j];
                let e = lg.exp() * rule.weights()[j];
                if !e.is_finite() || e < T::zero() {
                    return Err(GribovError::Overflow { i, j });
                }
                entries[i * n + j] = e;
            }
        }
        Ok(Self {
            params: *p,
            frame,
            rule: rule.clone(),
            entries,
            active,
            meta: AssemblyMeta {
                theta_tol: tol,
                log_domain: true,
            },
        })
    }

    /// Builds a matrix from an arbitrary kernel, entry(i, j) = k(y_i, y_j)·w_j.
    /// Intended for surrogate kernels in tests and cross-checks.
    pub fn from_kernel_fn<F: Fn(T, T) -> T>(
        p: &GribovParams<T>,
        frame: KernelFrame,
        rule: &QuadratureRule<T>,
        kernel: F,
    ) -> Self {
        let n = rule.len();
        let mut entries = vec![T::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                entries[i * n + j] = kernel(rule.nodes()[i], rule.nodes()[j]) * rule.weights()[j];
            }
        }
        Self {
            params: *p,
            frame,
            rule: rule.clone(),
            entries,
            active: vec![true; n],
            meta: AssemblyMeta {
                theta_tol: assembly_tol::<T>(),
                log_domain: false,
            },
        }
    }

    /// Builds a matrix directly from row-major entries (surrogates/tests).
    pub fn from_entries(
        p: &GribovParams<T>,
        frame: KernelFrame,
        rule: &QuadratureRule<T>,
        entries: Vec<T>,
    ) -> Result<Self> {
        let n = rule.len();
        if entries.len() != n * n {
            return Err(GribovError::InvalidArgument(format!(
                "expected {} entries, got {}",
                n * n,
                entries.len()
            )));
        }
        Ok(Self {
            params: *p,
            frame,
            rule: rule.clone(),
            entries,
            active: vec![true; n],
            meta: AssemblyMeta {
                theta_tol: assembly_tol::<T>(),
                log_domain: false,
            },
        })
    }

    pub fn n(&self) -> usize {
        self.rule.len()
    }

    pub fn params(&self) -> &GribovParams<T> {
        &self.params
    }

    pub fn frame(&self) -> KernelFrame {
        self.frame
    }

    pub fn rule(&self) -> &QuadratureRule<T> {
        &self.rule
    }

    pub fn entry(&self, i: usize, j: usize) -> T {
        self.entries[i * self.n() + j]
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn meta(&self) -> &AssemblyMeta<T> {
        &self.meta
    }

    /// Whether node `i` lies inside the kernel support (nodes beyond the
    /// support carry identically zero rows and columns in the limit frame).
    pub fn is_active(&self, i: usize) -> bool {
        self.active[i]
    }

    /// out = M v.
    pub fn apply(&self, v: &[T], out: &mut [T]) {
        let n = self.n();
        debug_assert_eq!(v.len(), n);
        debug_assert_eq!(out.len(), n);
        for (row, o) in self.entries.chunks_exact(n).zip(out.iter_mut()) {
            *o = row
                .iter()
                .zip(v)
                .fold(T::zero(), |acc, (&a, &x)| acc + a * x);
        }
    }

    /// out = Mᵀ v.
    pub fn apply_transpose(&self, v: &[T], out: &mut [T]) {
        let n = self.n();
        for x in out.iter_mut() {
            *x = T::zero();
        }
        for (row, &vi) in self.entries.chunks_exact(n).zip(v) {
            for (o, &a) in out.iter_mut().zip(row) {
                *o = *o + a * vi;
            }
        }
    }
}

/// Action of the plain kernel on a source with f(0) = 0, split at the
/// diagonal so the min-kink never enters a single panel:
/// u(y) = ∫₀^y (√r(y₁)/(λy₁)) Θ(y₁) f(y₁) dy₁ + Θ(y) ∫_y^{ρ'} (√r(y₁)/(λy₁)) f(y₁) dy₁.
/// Each panel is integrated by a Gauss rule with `panel_nodes` nodes; the
/// panel nodes move smoothly with y, so finite differences of u stay clean.
pub fn apply_plain<T: Real>(
    p: &GribovParams<T>,
    f: &dyn Fn(T) -> T,
    y: T,
    panel_nodes: usize,
) -> Result<T> {
    let (rho_prime, _) = p.native()?;
    let f0 = f(T::zero());
    if f0 != T::zero() {
        return Err(GribovError::SourceNotVanishing(format!("{f0}")));
    }
    if y < T::zero() || y > rho_prime {
        return Err(GribovError::DomainViolation {
            name: "y",
            value: format!("{y}"),
            lo: "0".into(),
            hi: format!("{rho_prime}"),
        });
    }
    if y == T::zero() {
        return Ok(T::zero());
    }
    let tol = assembly_tol::<T>();
    let fns = FrameFns::new(p, KernelFrame::Plain)?;
    let m = panel_nodes.max(4);

    // left panel: integrand b(y1) Θ(y1) f(y1) on [0, y]
    let left_rule = QuadratureRule::gauss(m, T::zero(), y)?;
    let lt = fns.log_theta_table(left_rule.nodes(), tol)?;
    let mut left = T::zero();
    for (k, (&y1, &w)) in left_rule
        .nodes()
        .iter()
        .zip(left_rule.weights())
        .enumerate()
    {
        left = left + w * (fns.log_b(y1) + lt[k]).exp() * f(y1);
    }

    // right panel: Θ(y) ∫_y^{ρ'} b(y1) f(y1)
    let lty = crate::model::theta::log_theta(y, p, tol)?;
    let mut right = T::zero();
    if y < rho_prime {
        let right_rule = QuadratureRule::gauss(m, y, rho_prime)?;
        for (&y1, &w) in right_rule.nodes().iter().zip(right_rule.weights()) {
            right = right + w * fns.log_b(y1).exp() * f(y1);
        }
    }
    Ok(left + lty.exp() * right)
}
