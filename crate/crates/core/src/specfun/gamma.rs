use std::f64::consts::PI;

use num_complex::Complex64;

use crate::{Error, Result};

/// B_{2k} for k = 1..=20.
pub(crate) const BERNOULLI_EVEN: [f64; 20] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
    -7709321041217.0 / 510.0,
    2577687858367.0 / 6.0,
    -26315271553053477373.0 / 1919190.0,
    2929993913841559.0 / 6.0,
    -261082718496449122051.0 / 13530.0,
];

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const SHIFT_TARGET: f64 = 15.0;
const STIRLING_TERMS: usize = 10;

fn is_pole(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0
}

/// ln Γ(w) for Re w ≥ 15 by the Stirling series.
fn stirling(w: Complex64) -> Complex64 {
    let ln_w = w.ln();
    let mut s = (w - 0.5) * ln_w - w + 0.5 * (2.0 * PI).ln();
    let w_inv = w.inv();
    let w_inv2 = w_inv * w_inv;
    let mut pow = w_inv;
    for k in 1..=STIRLING_TERMS {
        let kf = k as f64;
        s += pow * (BERNOULLI_EVEN[k - 1] / (2.0 * kf * (2.0 * kf - 1.0)));
        pow *= w_inv2;
    }
    s
}

/// Complex log-Gamma.
///
/// For `Re z ≥ 0` this is the analytic continuation of ln Γ from the positive
/// axis (the branch that is continuous in `z`); for `Re z < 0` it comes from
/// the reflection formula, so only `exp(log_gamma(z))` is meaningful there.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::domain("log_gamma of non-finite argument"));
    }
    if is_pole(z) {
        return Err(Error::domain(format!("log_gamma pole at {}", z.re)));
    }
    if z.re < 0.0 {
        // ln Γ(z) = ln π − ln sin(πz) − ln Γ(1 − z)
        let reflected = log_gamma(Complex64::new(1.0, 0.0) - z)?;
        return Ok(PI.ln() - ln_sin_pi(z) - reflected);
    }
    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while w.re < SHIFT_TARGET {
        shift += w.ln();
        w += 1.0;
    }
    Ok(stirling(w) - shift)
}

/// ln sin(πz) without overflow for large |Im z|.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    if z.im.abs() < 20.0 {
        return (z * PI).sin().ln();
    }
    // For Im z > 0: sin(πz) = (i/2) e^{-iπz} (1 - e^{2iπz})
    let i = Complex64::i();
    if z.im > 0.0 {
        let e = (i * z * (2.0 * PI)).exp();
        (i * 0.5).ln() - i * PI * z + (1.0 - e).ln()
    } else {
        ln_sin_pi(z.conj()).conj()
    }
}

/// Real ln Γ(x) for x > 0.
pub fn ln_gamma_real(x: f64) -> f64 {
    log_gamma(Complex64::new(x, 0.0))
        .expect("positive real argument")
        .re
}

/// Digamma ψ(z) = Γ'(z)/Γ(z) for Re z > 0.
pub fn digamma(z: Complex64) -> Result<Complex64> {
    if !(z.re > 0.0) || !z.im.is_finite() {
        return Err(Error::domain("digamma requires Re z > 0"));
    }
    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while w.re < SHIFT_TARGET {
        shift += w.inv();
        w += 1.0;
    }
    let w_inv = w.inv();
    let w_inv2 = w_inv * w_inv;
    let mut s = w.ln() - 0.5 * w_inv;
    let mut pow = w_inv2;
    for k in 1..=STIRLING_TERMS {
        s -= pow * (BERNOULLI_EVEN[k - 1] / (2.0 * k as f64));
        pow *= w_inv2;
    }
    Ok(s - shift)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Euler's product Γ(z) = lim n! n^z / (z(z+1)...(z+n)), independent of
    /// the Stirling path.
    fn gamma_product_oracle(z: Complex64) -> Complex64 {
        let n = 200_000u32;
        let mut ln = z * (n as f64).ln();
        for k in 1..=n {
            ln += (k as f64).ln() - (z + k as f64).ln();
        }
        // the truncated product is Γ(z)·exp(−z(z+1)/2n + O(|z|³/n²))
        (ln - z.ln() + z * (z + 1.0) / (2.0 * n as f64)).exp()
    }

    #[test]
    fn examples() {
        assert!(log_gamma(c(1.0, 0.0)).unwrap().norm() < 1e-15);
        assert!((log_gamma(c(0.5, 0.0)).unwrap().re - 0.572_364_942_924_700_1).abs() < 1e-14);
        let z = c(2.3, 1.1);
        let d = log_gamma(z + 1.0).unwrap() - log_gamma(z).unwrap() - z.ln();
        assert!(d.norm() < 1e-13);
    }

    #[test]
    fn poles_are_rejected() {
        for x in [0.0, -1.0, -7.0] {
            assert!(matches!(log_gamma(c(x, 0.0)), Err(Error::Domain(_))));
        }
        assert!(digamma(c(0.0, 1.0)).is_err());
    }

    #[test]
    fn factorials_and_reflection() {
        let mut fact = 1.0f64;
        for n in 1..30 {
            fact *= n as f64;
            let lg = log_gamma(c(n as f64 + 1.0, 0.0)).unwrap();
            assert!((lg.re - fact.ln()).abs() < 1e-13 * fact.ln().max(1.0));
        }
        // Γ(-0.5) = -2√π
        let g = log_gamma(c(-0.5, 0.0)).unwrap().exp();
        assert!((g.re + 2.0 * PI.sqrt()).abs() < 1e-13 && g.im.abs() < 1e-13);
    }

    #[test]
    fn relative_accuracy_against_product_oracle() {
        for z in [c(0.3, 0.0), c(1.7, 2.5), c(0.25, 10.0), c(4.0, -3.0)] {
            let got = log_gamma(z).unwrap().exp();
            let want = gamma_product_oracle(z);
            assert!((got - want).norm() / want.norm() < 1e-8, "{z}");
        }
    }

    #[test]
    fn reflection_identity_on_large_arguments() {
        // |Γ(iy)|² = π / (y sinh πy)
        for y in [1.0, 10.0, 50.0, 99.0] {
            let lg = log_gamma(c(0.0, y)).unwrap();
            let want = 0.5 * (PI / (y * (PI * y).sinh())).ln();
            assert!(
                (lg.re - want).abs() < 1e-12 * want.abs().max(1.0),
                "y = {y}"
            );
        }
        let z = c(-3.3, 40.0);
        let lhs = log_gamma(z).unwrap().exp() * log_gamma(1.0 - z).unwrap().exp();
        let rhs = PI / (z * PI).sin();
        assert!((lhs - rhs).norm() / rhs.norm() < 1e-10);
    }

    fn digamma_series(z: Complex64) -> Complex64 {
        // −γ + Σ (1/k − 1/(k−1+z)); the tail past N is replaced by its
        // midpoint-rule integral ln(1 + (z−1)/(N+1/2)), accurate to O(|z|/N³).
        let n = 200_000u64;
        let mut re = crate::sum::Neumaier::new();
        let mut im = crate::sum::Neumaier::new();
        re.add(-EULER_GAMMA);
        for k in 1..=n {
            let term = 1.0 / k as f64 - (z + (k - 1) as f64).inv();
            re.add(term.re);
            im.add(term.im);
        }
        let tail = (1.0 + (z - 1.0) / (n as f64 + 0.5)).ln();
        Complex64::new(re.value(), im.value()) + tail
    }

    #[test]
    fn digamma_examples() {
        assert!((digamma(c(1.0, 0.0)).unwrap().re + EULER_GAMMA).abs() < 1e-14);
        assert!((digamma(c(2.0, 0.0)).unwrap().re - (1.0 - EULER_GAMMA)).abs() < 1e-14);
        let d10 = digamma(c(10.0, 0.0)).unwrap().re;
        let eps = d10 - (10f64.ln() - 1.0 / 20.0);
        assert!(eps.abs() < 1e-3);
        for z in [c(0.5, 0.0), c(3.0, 4.0), c(0.25, 30.0)] {
            assert!(
                (digamma(z).unwrap() - digamma_series(z)).norm() < 1e-10,
                "{z}"
            );
        }
    }
}
