//! Hecke eigenvalue algebra.
//!
//! From the prime eigenvalues λ(p) the full multiplicative sequence λ(n) is
//! generated through λ(p^{k+1}) = λ(p)λ(p^k) − λ(p^{k−1}). The Satake
//! parameter α_p solves α + 1/α = λ(p), and the coefficients of −L'/L are
//! C(p^m) = α^m + α^{−m}.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::arith::is_prime;
use crate::{Error, Result};

/// Cap on the dense eigenvalue table.
pub const HECKE_MAX_N: u64 = 1_000_000;

/// Kim–Sarnak exponent θ = 7/64.
pub const KIM_SARNAK_THETA: f64 = 7.0 / 64.0;

const KIM_SARNAK_SLACK: f64 = 1e-9;

/// Largest `N` such that every prime `p ≤ N` has a value in `prime_values`.
pub fn coefficient_limit(prime_values: &BTreeMap<u64, f64>, cap: u64) -> u64 {
    let mut p = 2;
    while p <= cap {
        if is_prime(p) && !prime_values.contains_key(&p) {
            return p - 1;
        }
        p += 1;
    }
    cap
}

fn smallest_prime_factors(n: usize) -> Vec<u32> {
    let mut spf = vec![0u32; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    spf
}

/// λ(n) for `1 ≤ n ≤ N`, index 0 unused.
pub fn hecke_extend(prime_values: &BTreeMap<u64, f64>, n: u64) -> Result<Vec<f64>> {
    if n > HECKE_MAX_N {
        return Err(Error::Capacity(format!(
            "Hecke table size {n} exceeds {HECKE_MAX_N}"
        )));
    }
    let size = n as usize;
    let spf = smallest_prime_factors(size);
    let mut lambda = vec![0.0; size + 1];
    if size >= 1 {
        lambda[1] = 1.0;
    }
    for k in 2..=size {
        let p = spf[k] as usize;
        if p == k {
            lambda[k] = *prime_values
                .get(&(p as u64))
                .ok_or_else(|| Error::IncompleteData(format!("missing Hecke eigenvalue λ({p})")))?;
            continue;
        }
        let mut rest = k;
        let mut pk = 1;
        while rest % p == 0 {
            rest /= p;
            pk *= p;
        }
        lambda[k] = if rest == 1 {
            // k = p^e with e ≥ 2
            lambda[p] * lambda[k / p] - lambda[k / (p * p)]
        } else {
            lambda[pk] * lambda[rest]
        };
    }
    Ok(lambda)
}

/// Satake parameter α with α + 1/α = λ and |α| ≥ 1.
///
/// For |λ| ≤ 2 the root on the unit circle with Im α ≥ 0 is returned;
/// otherwise the real root whose sign matches λ.
pub fn satake(lambda_p: f64) -> Complex64 {
    if lambda_p.abs() <= 2.0 {
        Complex64::new(
            0.5 * lambda_p,
            (1.0 - 0.25 * lambda_p * lambda_p).max(0.0).sqrt(),
        )
    } else {
        let root = (lambda_p * lambda_p - 4.0).sqrt();
        Complex64::new(0.5 * (lambda_p + lambda_p.signum() * root), 0.0)
    }
}

/// λ(p^k) by the three-term recursion, `λ(p^0) = 1`.
pub fn lambda_prime_power(lambda_p: f64, k: u32) -> f64 {
    let (mut prev, mut cur) = (1.0, lambda_p);
    if k == 0 {
        return 1.0;
    }
    for _ in 1..k {
        (prev, cur) = (cur, lambda_p * cur - prev);
    }
    cur
}

/// Eigenvalues of one Hecke eigenform, extended densely up to `n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct HeckeSystem {
    prime_values: BTreeMap<u64, f64>,
    extended: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KimSarnakViolation {
    pub n: u64,
    pub value: f64,
    pub bound: f64,
}

impl HeckeSystem {
    /// Builds the system and its table up to `n_max`; all primes `≤ n_max` must be present.
    pub fn new(prime_values: BTreeMap<u64, f64>, n_max: u64) -> Result<Self> {
        for (&p, v) in &prime_values {
            if !is_prime(p) {
                return Err(Error::domain(format!("{p} is not prime")));
            }
            if !v.is_finite() {
                return Err(Error::domain(format!("λ({p}) is not finite")));
            }
        }
        let extended = hecke_extend(&prime_values, n_max)?;
        Ok(Self {
            prime_values,
            extended,
        })
    }

    /// Extends as far as the supplied primes allow, capped at `cap`.
    pub fn with_available(prime_values: BTreeMap<u64, f64>, cap: u64) -> Result<Self> {
        let limit = coefficient_limit(&prime_values, cap.min(HECKE_MAX_N));
        Self::new(prime_values, limit)
    }

    pub fn prime_values(&self) -> &BTreeMap<u64, f64> {
        &self.prime_values
    }

    /// Largest n with λ(n) tabulated.
    pub fn n_max(&self) -> u64 {
        self.extended.len().saturating_sub(1) as u64
    }

    pub fn lambda(&self, n: u64) -> Option<f64> {
        if n == 0 {
            return None;
        }
        self.extended.get(n as usize).copied()
    }

    pub fn lambda_or_err(&self, n: u64) -> Result<f64> {
        self.lambda(n).ok_or_else(|| {
            Error::IncompleteData(format!(
                "λ({n}) unavailable (table ends at {})",
                self.n_max()
            ))
        })
    }

    pub fn lambda_prime(&self, p: u64) -> Result<f64> {
        if !is_prime(p) {
            return Err(Error::domain(format!("{p} is not prime")));
        }
        self.prime_values
            .get(&p)
            .copied()
            .ok_or_else(|| Error::IncompleteData(format!("missing Hecke eigenvalue λ({p})")))
    }

    pub fn satake(&self, p: u64) -> Result<Complex64> {
        Ok(satake(self.lambda_prime(p)?))
    }

    /// C(p^m): λ(p) for m = 1, λ(p^m) − λ(p^{m−2}) for m ≥ 2.
    pub fn cj_coefficient(&self, p: u64, m: u32) -> Result<f64> {
        if m == 0 {
            return Err(Error::domain("C(p^m) needs m ≥ 1"));
        }
        let lp = self.lambda_prime(p)?;
        Ok(if m == 1 {
            lp
        } else {
            lambda_prime_power(lp, m) - lambda_prime_power(lp, m - 2)
        })
    }

    /// All n ≤ `n` with |λ(n)| > n^{7/64} τ(n) + 1e−9.
    pub fn kim_sarnak_certify(&self, n: u64) -> Result<Vec<KimSarnakViolation>> {
        if n > self.n_max() {
            return Err(Error::IncompleteData(format!(
                "Kim–Sarnak check to {n} but table ends at {}",
                self.n_max()
            )));
        }
        let size = n as usize;
        let mut tau = vec![0u32; size + 1];
        for d in 1..=size {
            let mut k = d;
            while k <= size {
                tau[k] += 1;
                k += d;
            }
        }
        Ok((1..=size)
            .filter_map(|k| {
                let value = self.extended[k];
                let bound = (k as f64).powf(KIM_SARNAK_THETA) * tau[k] as f64;
                (value.abs() > bound + KIM_SARNAK_SLACK).then_some(KimSarnakViolation {
                    n: k as u64,
                    value,
                    bound,
                })
            })
            .collect())
    }

    /// The system with every λ(p) negated (λ(n) ↦ (−1)^{Ω(n)} λ(n)).
    pub fn negated(&self) -> Self {
        let prime_values = self.prime_values.iter().map(|(&p, &v)| (p, -v)).collect();
        Self::new(prime_values, self.n_max()).expect("same primes as an existing system")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{divisors, gcd};

    fn primes_map(vals: &[(u64, f64)]) -> BTreeMap<u64, f64> {
        vals.iter().copied().collect()
    }

    #[test]
    fn extension_examples() {
        let sys =
            HeckeSystem::new(primes_map(&[(2, 1.2), (3, 0.5), (5, -0.3), (7, 0.1)]), 8).unwrap();
        assert_eq!(sys.lambda(1), Some(1.0));
        assert!((sys.lambda(6).unwrap() - 0.6).abs() < 1e-15);
        // direct recursion: λ(4) = λ(2)² − 1, λ(8) = λ(2)λ(4) − λ(2)
        let l4 = 1.2 * 1.2 - 1.0;
        assert!((sys.lambda(4).unwrap() - l4).abs() < 1e-15);
        assert!((sys.lambda(4).unwrap() - 0.44).abs() < 1e-12);
        assert!((sys.lambda(8).unwrap() - (1.2 * l4 - 1.2)).abs() < 1e-15);
        assert!((sys.lambda(8).unwrap() + 0.672).abs() < 1e-12);
    }

    #[test]
    fn missing_prime_is_named() {
        let err = hecke_extend(&primes_map(&[(2, 1.0), (3, 0.0)]), 10).unwrap_err();
        assert_eq!(
            err,
            Error::IncompleteData("missing Hecke eigenvalue λ(5)".into())
        );
        assert!(matches!(
            hecke_extend(&BTreeMap::new(), HECKE_MAX_N + 1),
            Err(Error::Capacity(_))
        ));
    }

    #[test]
    fn satake_examples() {
        assert_eq!(satake(2.0), Complex64::new(1.0, 0.0));
        assert!((satake(0.0) - Complex64::i()).norm() < 1e-15);
        let a = satake(2.5);
        assert!((a - Complex64::new(2.0, 0.0)).norm() < 1e-15);
        assert!((a + a.inv() - 2.5).norm() < 1e-15);
        let b = satake(-3.0);
        assert!(b.re < -1.0 && (b + b.inv() + 3.0).norm() < 1e-14);
    }

    #[test]
    fn cj_examples() {
        let sys = HeckeSystem::new(primes_map(&[(2, 1.2), (3, 2.5)]), 4).unwrap();
        assert!((sys.cj_coefficient(2, 1).unwrap() - 1.2).abs() < 1e-15);
        assert!((sys.cj_coefficient(2, 2).unwrap() + 0.56).abs() < 1e-12);
        assert!((sys.cj_coefficient(3, 3).unwrap() - 8.125).abs() < 1e-12);
        assert!(matches!(sys.cj_coefficient(4, 1), Err(Error::Domain(_))));
        assert!(matches!(
            sys.cj_coefficient(5, 1),
            Err(Error::IncompleteData(_))
        ));
    }

    #[test]
    fn cj_matches_satake_powers() {
        for lp in [-2.3, -1.7, -0.2, 0.0, 0.9, 1.99, 2.0, 2.4] {
            let sys = HeckeSystem::new(primes_map(&[(2, lp)]), 2).unwrap();
            let a = satake(lp);
            for m in 1..=12 {
                let want = (a.powi(m) + a.powi(-m)).re;
                let got = sys.cj_coefficient(2, m as u32).unwrap();
                assert!(
                    (got - want).abs() < 1e-10 * want.abs().max(1.0),
                    "λ={lp} m={m}"
                );
            }
        }
    }

    #[test]
    fn kim_sarnak_examples() {
        let edge = 2.0 * 2f64.powf(KIM_SARNAK_THETA);
        let sys = HeckeSystem::new(primes_map(&[(2, edge), (3, 0.0)]), 3).unwrap();
        assert!(sys.kim_sarnak_certify(3).unwrap().is_empty());
        let sys = HeckeSystem::new(primes_map(&[(2, 2.2), (3, 0.0)]), 3).unwrap();
        let v = sys.kim_sarnak_certify(3).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].n, 2);
        let sys = HeckeSystem::new(BTreeMap::new(), 1).unwrap();
        assert!(sys.kim_sarnak_certify(1).unwrap().is_empty());
    }

    #[test]
    fn hecke_relation_on_small_grid() {
        let vals: Vec<(u64, f64)> = crate::arith::PrimeTable::new(10_000)
            .primes()
            .iter()
            .map(|&p| (p, 2.0 * ((p as f64) * 0.731).cos()))
            .collect();
        let sys = HeckeSystem::new(primes_map(&vals), 10_000).unwrap();
        for m in 1..=100u64 {
            for n in 1..=100u64 {
                let rhs: f64 = divisors(gcd(m, n))
                    .iter()
                    .map(|d| sys.lambda(m * n / (d * d)).unwrap())
                    .sum();
                let lhs = sys.lambda(m).unwrap() * sys.lambda(n).unwrap();
                assert!((lhs - rhs).abs() < 1e-9, "m={m} n={n}");
            }
        }
    }

    #[test]
    fn coefficient_limit_stops_before_first_gap() {
        let m = primes_map(&[(2, 0.0), (3, 0.0), (5, 0.0), (11, 0.0)]);
        assert_eq!(coefficient_limit(&m, 100), 6);
        let sys = HeckeSystem::with_available(m, 100).unwrap();
        assert_eq!(sys.n_max(), 6);
    }
}
