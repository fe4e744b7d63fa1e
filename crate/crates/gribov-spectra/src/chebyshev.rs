//! Chebyshev interpolation on an interval, used as an analyticity proxy:
//! geometric decay of the coefficients of a sampled function is the
//! numerically observable consequence of analyticity in a neighbourhood.

use crate::{cast, Real};

/// First-kind Chebyshev points mapped to [a, b], in the natural ordering
/// x_j = mid + half·cos(π(j + 1/2)/n), j = 0..n−1 (descending in x).
pub fn chebyshev_nodes<T: Real>(n: usize, a: T, b: T) -> Vec<T> {
    let half = cast::<T>(0.5);
    let mid = half * (a + b);
    let rad = half * (b - a);
    (0..n)
        .map(|j| {
            let theta = T::PI() * (cast::<T>(j as f64) + half) / cast::<T>(n as f64);
            mid + rad * theta.cos()
        })
        .collect()
}

/// Chebyshev coefficients from values sampled at [`chebyshev_nodes`] in the
/// same ordering: f ≈ Σ c_k T_k.
pub fn chebyshev_coefficients<T: Real>(values: &[T]) -> Vec<T> {
    let n = values.len();
    let half = cast::<T>(0.5);
    let two_over_n = cast::<T>(2.0 / n as f64);
    let mut coeffs = Vec::with_capacity(n);
    for k in 0..n {
        let mut acc = T::zero();
        for (j, &v) in values.iter().enumerate() {
            let theta = T::PI() * (cast::<T>(j as f64) + half) / cast::<T>(n as f64);
            acc = acc + v * (cast::<T>(k as f64) * theta).cos();
        }
        let mut c = two_over_n * acc;
        if k == 0 {
            c = c * half;
        }
        coeffs.push(c);
    }
    coeffs
}

/// max |c_k| over the trailing quarter divided by max |c_k| overall.
pub fn tail_head_ratio<T: Real>(coeffs: &[T]) -> T {
    let n = coeffs.len();
    let tail_start = n - (n / 4).max(1);
    let head = coeffs.iter().fold(T::zero(), |acc, &c| acc.max(c.abs()));
    let tail = coeffs[tail_start..]
        .iter()
        .fold(T::zero(), |acc, &c| acc.max(c.abs()));
    if head == T::zero() {
        T::zero()
    } else {
        tail / head
    }
}
