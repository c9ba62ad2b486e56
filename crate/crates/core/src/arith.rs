//! Exact integer arithmetic: primes, the von Mangoldt function, divisor
//! counts, modular inverses and Kloosterman sums with Weil certification.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::sum::Neumaier;
use crate::{Error, Result};

/// Largest modulus accepted by [`kloosterman`].
pub const MAX_KLOOSTERMAN_MODULUS: u64 = 50_000_000;

/// Absolute slack allowed when certifying against Weil's bound.
pub const WEIL_SLACK: f64 = 1e-9;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Inverse of `a` modulo `c` by the extended Euclidean algorithm, if it exists.
pub fn mod_inverse(a: u64, c: u64) -> Option<u64> {
    if c == 1 {
        return Some(0);
    }
    let (mut r0, mut r1) = (c as i128, (a % c) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(c as i128) as u64)
}

/// Prime factorisation by trial division, as `(p, exponent)` pairs in ascending `p`.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut k = 0;
            while n % p == 0 {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n).first() == Some(&(n, 1))
}

/// Number of divisors τ(n).
pub fn divisor_count(n: u64) -> u64 {
    factorize(n).iter().map(|&(_, k)| k as u64 + 1).product()
}

/// All divisors of `n` in ascending order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    for (p, k) in factorize(n) {
        let len = divs.len();
        let mut pk = 1;
        for _ in 0..k {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}

/// If `n = p^k` with `k ≥ 1`, returns `(p, k)`.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    match factorize(n).as_slice() {
        [(p, k)] => Some((*p, *k)),
        _ => None,
    }
}

/// Λ(n): `log p` when `n = p^m`, else 0.
pub fn von_mangoldt(n: u64) -> f64 {
    prime_power(n).map_or(0.0, |(p, _)| (p as f64).ln())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrimePower {
    pub n: u64,
    pub p: u64,
    pub exponent: u32,
    /// Λ(n) = log p.
    pub mangoldt: f64,
}

/// Primes and prime powers up to a limit, built by an Eratosthenes sieve.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
    prime_powers: Vec<PrimePower>,
}

impl PrimeTable {
    pub fn new(limit: u64) -> Self {
        let n = limit as usize;
        let mut composite = vec![false; n + 1];
        let mut primes = Vec::new();
        for i in 2..=n {
            if !composite[i] {
                primes.push(i as u64);
                let mut j = i * i;
                while j <= n {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        let mut prime_powers = Vec::new();
        for &p in &primes {
            let log_p = (p as f64).ln();
            let mut pk = p;
            let mut k = 1;
            loop {
                prime_powers.push(PrimePower {
                    n: pk,
                    p,
                    exponent: k,
                    mangoldt: log_p,
                });
                match pk.checked_mul(p) {
                    Some(next) if next <= limit => {
                        pk = next;
                        k += 1;
                    }
                    _ => break,
                }
            }
        }
        prime_powers.sort_unstable_by_key(|pp| pp.n);
        Self {
            limit,
            primes,
            prime_powers,
        }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Prime powers `p^k ≤ limit`, ascending in `p^k`.
    pub fn prime_powers(&self) -> &[PrimePower] {
        &self.prime_powers
    }

    /// Λ(n) for `n ≤ limit`; `None` beyond the table.
    pub fn mangoldt(&self, n: u64) -> Option<f64> {
        if n > self.limit {
            return None;
        }
        Some(
            self.prime_powers
                .binary_search_by_key(&n, |pp| pp.n)
                .map_or(0.0, |i| self.prime_powers[i].mangoldt),
        )
    }

    /// Chebyshev ψ(N) = Σ_{n ≤ N} Λ(n).
    pub fn chebyshev_psi(&self, n: u64) -> f64 {
        crate::sum::sum(
            self.prime_powers
                .iter()
                .take_while(|pp| pp.n <= n)
                .map(|pp| pp.mangoldt),
        )
    }
}

/// Units modulo `c` with their inverses and the cosine table, for
/// evaluating many Kloosterman sums to one modulus.
#[derive(Debug, Clone)]
pub struct KloostermanModulus {
    c: u64,
    units: Vec<(u64, u64)>,
    cosines: Vec<f64>,
}

impl KloostermanModulus {
    pub fn new(c: u64) -> Result<Self> {
        if c == 0 {
            return Err(Error::domain("Kloosterman modulus must be positive"));
        }
        if c > MAX_KLOOSTERMAN_MODULUS {
            return Err(Error::Capacity(format!(
                "Kloosterman modulus {c} exceeds limit {MAX_KLOOSTERMAN_MODULUS}"
            )));
        }
        let units = (1..c)
            .filter_map(|a| mod_inverse(a, c).map(|inv| (a, inv)))
            .collect();
        let cf = c as f64;
        let cosines = (0..=c / 2)
            .map(|r| (2.0 * PI * r as f64 / cf).cos())
            .collect();
        Ok(Self { c, units, cosines })
    }

    pub fn modulus(&self) -> u64 {
        self.c
    }

    /// S(m, n; c).
    ///
    /// Terms are binned by the residue `ma + nā mod c` and the bins are summed
    /// in ascending residue order, so the result depends only on the multiset
    /// of residues. In particular `S(m, n; c) == S(n, m; c)` bitwise.
    pub fn sum(&self, m: i64, n: i64) -> f64 {
        let c = self.c;
        if c == 1 {
            return 1.0;
        }
        let ci = c as i128;
        let mr = (m as i128).rem_euclid(ci) as u128;
        let nr = (n as i128).rem_euclid(ci) as u128;
        let mut bins = vec![0u32; c as usize];
        for &(a, a_inv) in &self.units {
            let r = (mr * a as u128 + nr * a_inv as u128) % c as u128;
            bins[r as usize] += 1;
        }
        // e(r/c) + e((c-r)/c) = 2cos(2πr/c); imaginary parts cancel pairwise.
        let mut acc = Neumaier::new();
        acc.add(bins[0] as f64);
        for r in 1..=(c / 2) as usize {
            let mirror = c as usize - r;
            let count = if r == mirror {
                bins[r]
            } else {
                bins[r] + bins[mirror]
            };
            if count != 0 {
                acc.add(count as f64 * self.cosines[r]);
            }
        }
        acc.value()
    }
}

/// The Kloosterman sum S(m, n; c) = Σ*_{a mod c} e((ma + n ā)/c).
pub fn kloosterman(m: i64, n: i64, c: u64) -> Result<f64> {
    Ok(KloostermanModulus::new(c)?.sum(m, n))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KloostermanResult {
    pub value: f64,
    pub modulus: u64,
    pub weil_bound: f64,
    pub certified: bool,
}

/// Weil's bound (m, n, c)^{1/2} c^{1/2} τ(c), with the convention gcd(0, k) = k.
pub fn weil_bound(m: i64, n: i64, c: u64) -> f64 {
    let g = gcd(gcd(m.unsigned_abs(), n.unsigned_abs()), c);
    (g as f64).sqrt() * (c as f64).sqrt() * divisor_count(c) as f64
}

pub fn weil_certify(m: i64, n: i64, c: u64) -> Result<KloostermanResult> {
    let value = kloosterman(m, n, c)?;
    let bound = weil_bound(m, n, c);
    Ok(KloostermanResult {
        value,
        modulus: c,
        weil_bound: bound,
        certified: value.abs() <= bound + WEIL_SLACK,
    })
}

/// Kloosterman sums for `c = 1..=c_max`, evaluated in parallel and returned in order.
pub fn kloosterman_table(m: i64, n: i64, c_max: u64) -> Result<Vec<KloostermanResult>> {
    (1..=c_max)
        .into_par_iter()
        .map(|c| weil_certify(m, n, c))
        .collect()
}
