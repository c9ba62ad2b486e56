//! Quadrature rules shared by the transform and special-function code.
//!
//! Two families are provided: composite Gauss–Legendre on a finite interval
//! with panel doubling, and the trapezoid rule on a (truncated) line for
//! analytic integrands with doubly-exponential decay.

use std::ops::{Add, Mul, Sub};
use std::sync::OnceLock;

use num_complex::Complex64;

/// Values that can be integrated: reals and complex numbers.
pub trait Integrand:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl Integrand for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Integrand for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult<T> {
    pub value: T,
    /// Difference between the last two refinement levels.
    pub est_error: f64,
    pub evaluations: usize,
}

/// Stopping rule for refinement loops.
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Tolerance {
    pub const fn new(rel: f64, abs: f64) -> Self {
        Self { rel, abs }
    }

    pub fn met(&self, diff: f64, scale: f64) -> bool {
        diff <= self.abs || diff <= self.rel * scale
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self::new(1e-9, 1e-12)
    }
}

const GL_ORDER: usize = 20;

/// Gauss–Legendre nodes and weights on [-1, 1], computed once by Newton's method.
pub fn gauss_legendre_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn gl20() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre_rule(GL_ORDER))
}

/// Composite 20-point Gauss–Legendre with `panels` equal panels.
pub fn gauss_legendre<T: Integrand>(f: impl Fn(f64) -> T, a: f64, b: f64, panels: usize) -> T {
    let (nodes, weights) = gl20();
    let width = (b - a) / panels as f64;
    let mut total = T::zero();
    for p in 0..panels {
        let lo = a + width * p as f64;
        let mid = lo + 0.5 * width;
        let half = 0.5 * width;
        let mut acc = T::zero();
        for (x, w) in nodes.iter().zip(weights) {
            acc = acc + f(mid + half * x) * *w;
        }
        total = total + acc * half;
    }
    total
}

/// Composite Gauss–Legendre with panel doubling until two successive
/// estimates agree to `tol`.
pub fn adaptive_gauss_legendre<T: Integrand>(
    f: impl Fn(f64) -> T,
    a: f64,
    b: f64,
    initial_panels: usize,
    tol: Tolerance,
    max_panels: usize,
) -> QuadResult<T> {
    let mut panels = initial_panels.max(1);
    let mut prev = gauss_legendre(&f, a, b, panels);
    let mut evaluations = panels * GL_ORDER;
    loop {
        panels *= 2;
        let next = gauss_legendre(&f, a, b, panels);
        evaluations += panels * GL_ORDER;
        let diff = (next - prev).magnitude();
        if tol.met(diff, next.magnitude()) || panels >= max_panels {
            return QuadResult {
                value: next,
                est_error: diff,
                evaluations,
            };
        }
        prev = next;
    }
}

/// Trapezoid rule on `[lo, hi]` with step halving, reusing earlier nodes.
///
/// Intended for analytic integrands that are negligible at both ends, where
/// the trapezoid rule converges geometrically in the number of nodes.
pub fn trapezoid_halving<T: Integrand>(
    f: impl Fn(f64) -> T,
    lo: f64,
    hi: f64,
    initial_intervals: usize,
    tol: Tolerance,
    max_intervals: usize,
) -> QuadResult<T> {
    let mut n = initial_intervals.max(2);
    let mut h = (hi - lo) / n as f64;
    let mut raw = (f(lo) + f(hi)) * 0.5;
    for k in 1..n {
        raw = raw + f(lo + h * k as f64);
    }
    let mut evaluations = n + 1;
    let mut prev = raw * h;
    loop {
        let mut mids = T::zero();
        for k in 0..n {
            mids = mids + f(lo + h * (k as f64 + 0.5));
        }
        evaluations += n;
        raw = raw + mids;
        n *= 2;
        h *= 0.5;
        let next = raw * h;
        let diff = (next - prev).magnitude();
        if tol.met(diff, next.magnitude()) || n >= max_intervals {
            return QuadResult {
                value: next,
                est_error: diff,
                evaluations,
            };
        }
        prev = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rule_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre_rule(GL_ORDER);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        // degree 38 monomial
        let approx: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(38)).sum();
        assert!((approx - 2.0 / 39.0).abs() < 1e-14);
    }

    #[test]
    fn adaptive_gaussian_integral() {
        let r = adaptive_gauss_legendre(
            |t: f64| (-t * t).exp(),
            -10.0,
            10.0,
            2,
            Tolerance::default(),
            1 << 12,
        );
        assert!((r.value - std::f64::consts::PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn trapezoid_is_spectrally_accurate_for_analytic_decay() {
        // ∫ e^{-cosh u} du over R = 2 K_0(1)
        let r = trapezoid_halving(
            |u: f64| (-u.cosh()).exp(),
            -6.0,
            6.0,
            8,
            Tolerance::new(1e-14, 0.0),
            1 << 12,
        );
        assert!((r.value - 2.0 * 0.421_024_438_240_708_3).abs() < 1e-14);
    }
}
