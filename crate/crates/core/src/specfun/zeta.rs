use num_complex::Complex64;

use super::gamma::BERNOULLI_EVEN;
use crate::sum::NeumaierComplex;
use crate::{Error, Result};

/// Largest |t| accepted by [`zeta_one_line`].
pub const ZETA_ONE_LINE_MAX_T: f64 = 1e6;

const EM_TERMS: usize = 18;

/// Riemann ζ(s) by Euler–Maclaurin summation, any `s ≠ 1`.
///
/// The cut point is `N ≈ |s|/2 + 20`, which makes the Bernoulli corrections
/// decay at least like π^{-2k}.
pub fn zeta(s: Complex64) -> Result<Complex64> {
    if s.re == 1.0 && s.im == 0.0 {
        return Err(Error::domain("ζ has a pole at s = 1"));
    }
    if !s.re.is_finite() || !s.im.is_finite() {
        return Err(Error::domain("ζ of non-finite argument"));
    }
    let n_cut = (s.norm() / 2.0).ceil() as u64 + 20;
    let mut acc = NeumaierComplex::new();
    for n in 1..n_cut {
        acc.add((-s * (n as f64).ln()).exp());
    }
    let nf = n_cut as f64;
    let ln_n = nf.ln();
    let n_pow_minus_s = (-s * ln_n).exp();
    acc.add(n_pow_minus_s * nf / (s - 1.0));
    acc.add(n_pow_minus_s * 0.5);
    // Σ B_{2k}/(2k)! · s(s+1)…(s+2k−2) · N^{−s−2k+1}
    let mut rising = s;
    let mut n_pow = n_pow_minus_s / nf;
    let mut fact = 2.0;
    for k in 1..=EM_TERMS {
        let term = rising * n_pow * (BERNOULLI_EVEN[k - 1] / fact);
        acc.add(term);
        let kf = k as f64;
        rising = rising * (s + (2.0 * kf - 1.0)) * (s + 2.0 * kf);
        n_pow /= nf * nf;
        fact *= (2.0 * kf + 1.0) * (2.0 * kf + 2.0);
    }
    Ok(acc.value())
}

/// ζ(1 + 2it).
pub fn zeta_one_line(t: f64) -> Result<Complex64> {
    if t == 0.0 {
        return Err(Error::domain("ζ(1 + 2it) has a pole at t = 0"));
    }
    if !(t.abs() <= ZETA_ONE_LINE_MAX_T) {
        return Err(Error::domain(format!(
            "|t| = {} exceeds {ZETA_ONE_LINE_MAX_T}",
            t.abs()
        )));
    }
    zeta(Complex64::new(1.0, 2.0 * t))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Partial Dirichlet sum with the first two Euler–Maclaurin tail terms.
    fn dirichlet_oracle(s: Complex64, n: u64) -> Complex64 {
        let mut acc = NeumaierComplex::new();
        for k in 1..n {
            acc.add((-s * (k as f64).ln()).exp());
        }
        let nf = n as f64;
        let np = (-s * nf.ln()).exp();
        acc.value() + np * nf / (s - 1.0) + np * 0.5
    }

    #[test]
    fn zeta_two() {
        let z = zeta(Complex64::new(2.0, 0.0)).unwrap();
        assert!((z.re - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-14);
        assert!(z.im.abs() < 1e-15);
    }

    #[test]
    fn one_line_against_long_dirichlet_sum() {
        for t in [1.0, 7.5, -3.0] {
            let got = zeta_one_line(t).unwrap();
            let want = dirichlet_oracle(Complex64::new(1.0, 2.0 * t), 1_000_000);
            assert!((got - want).norm() / want.norm() < 1e-9, "t = {t}");
        }
    }

    #[test]
    fn critical_line_value() {
        let z = zeta(Complex64::new(0.5, 0.0)).unwrap();
        assert!((z.re + 1.460_354_508_809_586_8).abs() < 1e-13);
        // first nontrivial zero
        let z = zeta(Complex64::new(0.5, 14.134_725_141_734_693)).unwrap();
        assert!(z.norm() < 1e-12);
    }

    #[test]
    fn pole_and_range() {
        assert!(matches!(zeta_one_line(0.0), Err(Error::Domain(_))));
        assert!(zeta_one_line(2e6).is_err());
        assert!(zeta(Complex64::new(1.0, 0.0)).is_err());
    }
}
