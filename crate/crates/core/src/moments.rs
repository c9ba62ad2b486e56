//! Gaussian-weighted moments of S_j(t) and their predicted limits.
//!
//! The weighted n-th moment
//! Σ' e^{−(t_j−T)²/M²}|ν_j(1)|² S_j(t)^n is predicted to be
//! (MT/4π^{3/2})·C_n·(log log T)^{n/2} with C_n = n!/((n/2)!(2π)^n) for even n
//! and 0 for odd n. S_j(t) is replaced by a computable proxy: the smoothed
//! approximation (default) or the prime polynomial M_j(t).

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use libm::erfc;
use rayon::prelude::*;

use crate::arith::{is_prime, PrimeTable};
use crate::dirichlet_poly::{m_poly, s_approx, SigmaPolicy, SmoothingContext};
use crate::maass_data::{Dataset, MaassForm};
use crate::sum::Neumaier;
use crate::trace::{checked_window, gaussian_weighted_sum, weighted_forms, GaussianWindow};
use crate::{Error, Result};

/// Largest moment order accepted by [`general_term_tally`].
pub const TALLY_MAX_N: u32 = 8;
/// Largest prime set accepted by [`general_term_tally`].
pub const TALLY_MAX_PRIMES: usize = 6;

/// C_n = n!/((n/2)!(2π)^n) for even n, 0 for odd n.
pub fn c_n(n: u32) -> f64 {
    if n % 2 == 1 {
        return 0.0;
    }
    let half = n / 2;
    // n!/(n/2)! = (half+1)(half+2)…n
    let mut v = 1.0;
    for k in (half + 1)..=n {
        v *= k as f64 / (2.0 * PI);
    }
    for _ in 0..half {
        v /= 2.0 * PI;
    }
    v
}

/// (MT/4π^{3/2})·C_n·(log log T)^{n/2}.
pub fn predicted_main(t_big: f64, m_width: f64, n: u32) -> Result<f64> {
    if !(t_big > std::f64::consts::E.powf(std::f64::consts::E)) {
        return Err(Error::domain(format!(
            "predicted main term needs T > e^e, got {t_big}"
        )));
    }
    if !(m_width > 0.0) {
        return Err(Error::domain("predicted main term needs M > 0"));
    }
    let ll = t_big.ln().ln();
    Ok(m_width * t_big / (4.0 * PI.powf(1.5)) * c_n(n) * ll.powf(0.5 * n as f64))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Proxy {
    /// Main term of the smoothed approximation with the GRH σ_x.
    #[default]
    SApprox,
    /// The prime polynomial M_j(t).
    MPoly,
}

impl fmt::Display for Proxy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Proxy::SApprox => "s_approx",
            Proxy::MPoly => "m_poly",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentParams {
    pub t_big: f64,
    pub m_width: f64,
    /// The fixed height t at which S_j(t) is sampled.
    pub t: f64,
    pub x: f64,
    pub proxy: Proxy,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentReport {
    pub n: u32,
    pub empirical: f64,
    pub predicted_main: f64,
    pub params: MomentParams,
    pub error_annotation: String,
}

fn proxy_value(form: &MaassForm, params: &MomentParams, ctx: &SmoothingContext) -> Result<f64> {
    match params.proxy {
        Proxy::SApprox => Ok(s_approx(form, params.t, ctx)?.main),
        Proxy::MPoly => m_poly(form, params.t, ctx),
    }
}

fn check_params(params: &MomentParams) -> Result<()> {
    if !(params.t > 0.0) || !params.t.is_finite() {
        return Err(Error::domain("moments need a fixed t > 0"));
    }
    Ok(())
}

/// Proxy values for the forms entering the weighted sum, in the same order.
fn proxy_values(
    dataset: &Dataset,
    window: &GaussianWindow,
    params: &MomentParams,
) -> Result<Vec<f64>> {
    let ctx = SmoothingContext::new(params.x, SigmaPolicy::GrhDefault)?;
    weighted_forms(dataset, window)
        .par_iter()
        .map(|form| proxy_value(form, params, &ctx))
        .collect()
}

/// Weighted moments for every order in `orders`, sharing one set of proxy values.
///
/// Order 0 never touches the proxy and equals the m = n = 1 orthogonality
/// estimator bit for bit.
pub fn weighted_moments(
    dataset: &Dataset,
    params: &MomentParams,
    orders: &[u32],
) -> Result<Vec<MomentReport>> {
    check_params(params)?;
    let window = checked_window(dataset, params.t_big, params.m_width)?;
    let values = if orders.iter().any(|&n| n > 0) {
        proxy_values(dataset, &window, params)?
    } else {
        Vec::new()
    };
    orders
        .iter()
        .map(|&n| {
            let empirical = if n == 0 {
                gaussian_weighted_sum(dataset, &window, |_, form| {
                    Ok(form.hecke.lambda_or_err(1)? * form.hecke.lambda_or_err(1)?)
                })?
            } else {
                gaussian_weighted_sum(dataset, &window, |i, _| Ok(values[i].powi(n as i32)))?
            };
            Ok(MomentReport {
                n,
                empirical,
                predicted_main: predicted_main(params.t_big, params.m_width, n)?,
                params: *params,
                error_annotation: format!(
                    "error O(MT (log log T)^{}) with constants depending on t and n; proxy {}",
                    (n as f64 - 1.0) / 2.0,
                    params.proxy
                ),
            })
        })
        .collect()
}

pub fn weighted_moment(dataset: &Dataset, params: &MomentParams, n: u32) -> Result<MomentReport> {
    Ok(weighted_moments(dataset, params, &[n])?.remove(0))
}

/// Φ for the centred Gaussian of variance 1/(2π²): erfc(−πx)/2.
pub fn limiting_cdf(x: f64) -> f64 {
    0.5 * erfc(-PI * x)
}

/// sup_x |F(x) − Φ(x)| for the weighted empirical CDF F of `(value, weight)` samples.
///
/// The sup is attained at a sample point, from the left or the right.
pub fn gaussian_distance(samples: &[(f64, f64)]) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::domain("gaussian distance of an empty sample"));
    }
    if samples
        .iter()
        .any(|&(v, w)| !v.is_finite() || !(w >= 0.0) || !w.is_finite())
    {
        return Err(Error::domain(
            "samples need finite values and nonnegative weights",
        ));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let total = crate::sum::sum(sorted.iter().map(|s| s.1));
    if !(total > 0.0) {
        return Err(Error::domain("total weight must be positive"));
    }
    let mut acc = Neumaier::new();
    let mut dist: f64 = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let x = sorted[i].0;
        let phi = limiting_cdf(x);
        let before = acc.value() / total;
        while i < sorted.len() && sorted[i].0 == x {
            acc.add(sorted[i].1);
            i += 1;
        }
        let after = acc.value() / total;
        dist = dist.max((before - phi).abs()).max((after - phi).abs());
    }
    Ok(dist)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalMeasure {
    /// (S_j(t)/√(log log T), |ν_j(1)|²) for forms with |t_j − T| ≤ M.
    pub samples: Vec<(f64, f64)>,
    pub gaussian_distance: f64,
}

pub fn empirical_measure(dataset: &Dataset, params: &MomentParams) -> Result<EmpiricalMeasure> {
    check_params(params)?;
    if !(params.t_big > std::f64::consts::E.powf(std::f64::consts::E)) {
        return Err(Error::domain("empirical measure needs T > e^e"));
    }
    let forms = dataset.forms_in(params.t_big - params.m_width, params.t_big + params.m_width);
    if forms.is_empty() {
        return Err(Error::IncompleteData(format!(
            "no forms with |t_j − {}| ≤ {}",
            params.t_big, params.m_width
        )));
    }
    let ctx = SmoothingContext::new(params.x, SigmaPolicy::GrhDefault)?;
    let scale = params.t_big.ln().ln().sqrt();
    let samples: Vec<(f64, f64)> = forms
        .par_iter()
        .map(|form| {
            Ok((
                proxy_value(form, params, &ctx)? / scale,
                form.nu1sq_or_err()?,
            ))
        })
        .collect::<Result<_>>()?;
    let gaussian_distance = gaussian_distance(&samples)?;
    Ok(EmpiricalMeasure {
        samples,
        gaussian_distance,
    })
}

/// The four kinds of general term in the expansion of M_j(t)^n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Case {
    /// Some prime has m(p) ≢ n(p) mod 2: only off-diagonal λ(a)λ(b), a ≠ b.
    I,
    /// Parities match everywhere and some prime has m(p) + n(p) ≥ 4.
    II,
    /// Every m(p) + n(p) = 2 and some prime has m(p) = 2 or n(p) = 2.
    III,
    /// m(p) = n(p) = 1 for every prime that occurs.
    IV,
}

impl Case {
    pub const ALL: [Case; 4] = [Case::I, Case::II, Case::III, Case::IV];

    /// Classifies one exponent vector (m(p), n(p)) over the prime set.
    pub fn classify(exponents: &[(u32, u32)]) -> Case {
        let used = exponents.iter().filter(|(a, b)| a + b > 0);
        if used.clone().any(|(a, b)| (a + b) % 2 == 1) {
            Case::I
        } else if used.clone().any(|(a, b)| a + b >= 4) {
            Case::II
        } else if used.clone().any(|&(a, b)| a == 2 || b == 2) {
            Case::III
        } else {
            Case::IV
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case::I => "I",
            Case::II => "II",
            Case::III => "III",
            Case::IV => "IV",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseTally {
    pub n: u32,
    pub primes: Vec<u64>,
    /// Number of ordered n-tuples of signed prime choices in each case.
    pub counts: BTreeMap<Case, u64>,
    /// Σ over Case IV tuples of Π 1/p, divided by (2π)^n.
    pub case_iv_coefficient: f64,
    /// Σ over Case I tuples of the λ(1)-coefficient of Π λ(p)^{m(p)+n(p)}.
    pub case_i_diagonal: f64,
}

impl CaseTally {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }
}

/// Coefficient of λ(1) when λ(p)^k is expanded in λ(p^j) by the Hecke relation.
///
/// Zero for odd k, the Catalan number C_{k/2} for even k.
pub fn hecke_diagonal(k: u32) -> u64 {
    // coefficients of λ(p^j), j = 0..=k, for λ(p)^0 = λ(1)
    let mut coef = vec![0u64; k as usize + 2];
    coef[0] = 1;
    for _ in 0..k {
        let mut next = vec![0u64; coef.len()];
        for j in 0..coef.len() - 1 {
            if coef[j] == 0 {
                continue;
            }
            // λ(p)λ(p^j) = λ(p^{j+1}) + λ(p^{j−1})
            next[j + 1] += coef[j];
            if j > 0 {
                next[j - 1] += coef[j];
            }
        }
        coef = next;
    }
    coef[0]
}

fn factorial(n: u32) -> u64 {
    (1..=n as u64).product()
}

/// Visits every exponent vector ((m(p), n(p)))_p with total n.
fn for_each_composition(slots: usize, n: u32, f: &mut impl FnMut(&[u32])) {
    fn rec(parts: &mut Vec<u32>, slots: usize, left: u32, f: &mut impl FnMut(&[u32])) {
        if parts.len() + 1 == slots {
            parts.push(left);
            f(parts);
            parts.pop();
            return;
        }
        for k in 0..=left {
            parts.push(k);
            rec(parts, slots, left - k, f);
            parts.pop();
        }
    }
    rec(&mut Vec::with_capacity(slots), slots, n, f);
}

/// Classifies the (2|P|)^n general terms of M_j(t)^n over the prime set P.
///
/// Each term picks, for every one of the n factors, a prime and a sign
/// (p^{−1/2−it} or −p^{−1/2+it}). Terms with equal exponent vectors are
/// grouped and counted by their multinomial multiplicity.
pub fn general_term_tally(primes: &[u64], n: u32) -> Result<CaseTally> {
    if n == 0 {
        return Err(Error::domain("tally needs n ≥ 1"));
    }
    if n > TALLY_MAX_N || primes.len() > TALLY_MAX_PRIMES {
        return Err(Error::Capacity(format!(
            "tally limited to n ≤ {TALLY_MAX_N} and at most {TALLY_MAX_PRIMES} primes"
        )));
    }
    if primes.is_empty() {
        return Err(Error::domain("tally needs at least one prime"));
    }
    let mut sorted = primes.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != primes.len() || sorted.iter().any(|&p| !is_prime(p)) {
        return Err(Error::domain("tally needs distinct primes"));
    }

    let n_fact = factorial(n);
    let mut counts: BTreeMap<Case, u64> = Case::ALL.iter().map(|&c| (c, 0)).collect();
    let mut case_iv = Neumaier::new();
    let mut case_i_diag = 0u64;
    let mut pairs = vec![(0u32, 0u32); primes.len()];
    for_each_composition(2 * primes.len(), n, &mut |parts| {
        for (i, pair) in pairs.iter_mut().enumerate() {
            *pair = (parts[2 * i], parts[2 * i + 1]);
        }
        let multiplicity = n_fact / parts.iter().map(|&k| factorial(k)).product::<u64>();
        let case = Case::classify(&pairs);
        *counts.get_mut(&case).expect("all cases present") += multiplicity;
        match case {
            Case::IV => {
                let prod: f64 = primes
                    .iter()
                    .zip(&pairs)
                    .filter(|(_, (a, _))| *a == 1)
                    .map(|(&p, _)| 1.0 / p as f64)
                    .product();
                case_iv.add(multiplicity as f64 * prod);
            }
            Case::I => {
                let diag: u64 = pairs.iter().map(|(a, b)| hecke_diagonal(a + b)).product();
                case_i_diag += multiplicity * diag;
            }
            _ => {}
        }
    });
    Ok(CaseTally {
        n,
        primes: primes.to_vec(),
        counts,
        case_iv_coefficient: case_iv.value() / (2.0 * PI).powi(n as i32),
        case_i_diagonal: case_i_diag as f64,
    })
}

/// n!/((n/2)!(2π)^n)·Σ_{distinct ordered p_1…p_{n/2}} 1/(p_1⋯p_{n/2}), i.e.
/// C_n·(n/2)!·e_{n/2}(1/p), for even n; 0 for odd n.
pub fn case_iv_closed_form(primes: &[u64], n: u32) -> f64 {
    if n % 2 == 1 {
        return 0.0;
    }
    let k = (n / 2) as usize;
    // elementary symmetric polynomial e_k of the reciprocals
    let mut e = vec![0.0; k + 1];
    e[0] = 1.0;
    for &p in primes {
        let r = 1.0 / p as f64;
        for j in (1..=k).rev() {
            e[j] += e[j - 1] * r;
        }
    }
    c_n(n) * factorial(n / 2) as f64 * e[k]
}

/// Σ_{p ≤ x} 1/p − log log x.
pub fn mertens_deviation(table: &PrimeTable, x: f64) -> f64 {
    let s = crate::sum::sum(
        table
            .primes()
            .iter()
            .take_while(|&&p| p as f64 <= x)
            .map(|&p| 1.0 / p as f64),
    );
    s - x.ln().ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c_n_examples() {
        assert_eq!(c_n(0), 1.0);
        assert!((c_n(2) - 1.0 / (2.0 * PI * PI)).abs() < 1e-16);
        assert_eq!(c_n(3), 0.0);
        assert!((c_n(4) - 24.0 / (2.0 * (2.0 * PI).powi(4))).abs() < 1e-17);
    }

    #[test]
    fn predicted_examples() {
        let p0 = predicted_main(1000.0, 100.0, 0).unwrap();
        assert!((p0 - 1e5 / (4.0 * PI.powf(1.5))).abs() < 1e-9);
        assert!((p0 - 4489.678).abs() < 1e-3);
        let p2 = predicted_main(1000.0, 100.0, 2).unwrap();
        assert!((p2 - p0 * c_n(2) * 1000f64.ln().ln()).abs() < 1e-9);
        assert!((p2 - 439.6).abs() < 0.1);
        assert_eq!(predicted_main(1000.0, 100.0, 3).unwrap(), 0.0);
        assert!(predicted_main(15.0, 1.0, 2).is_err());
    }

    #[test]
    fn distance_examples() {
        assert!((gaussian_distance(&[(0.0, 1.0)]).unwrap() - 0.5).abs() < 1e-15);
        let s = [(0.1, 1.0), (-0.3, 2.0), (0.25, 0.5)];
        let scaled: Vec<_> = s.iter().map(|&(v, w)| (v, 7.0 * w)).collect();
        let a = gaussian_distance(&s).unwrap();
        assert!((a - gaussian_distance(&scaled).unwrap()).abs() < 1e-15);
        let perm = [s[2], s[0], s[1]];
        assert_eq!(a, gaussian_distance(&perm).unwrap());
        assert!(gaussian_distance(&[]).is_err());
    }

    #[test]
    fn limiting_cdf_variance() {
        // Φ(σ) − Φ(−σ) ≈ 0.6827 for σ = 1/(π√2)
        let sigma = 1.0 / (PI * 2f64.sqrt());
        assert!(
            (limiting_cdf(sigma) - limiting_cdf(-sigma) - 0.682_689_492_137_085_9).abs() < 1e-14
        );
        assert_eq!(limiting_cdf(0.0), 0.5);
    }

    #[test]
    fn tally_examples() {
        let t1 = general_term_tally(&[2, 3], 1).unwrap();
        assert_eq!(t1.counts[&Case::I], 4);
        assert_eq!(t1.total(), 4);
        assert_eq!(t1.case_iv_coefficient, 0.0);

        let t2 = general_term_tally(&[2, 3], 2).unwrap();
        assert!((t2.case_iv_coefficient - 5.0 / (12.0 * PI * PI)).abs() < 1e-15);
        assert!((t2.case_iv_coefficient - 0.042217).abs() < 1e-6);

        let t4 = general_term_tally(&[2, 3], 4).unwrap();
        assert!(
            (t4.case_iv_coefficient - 24.0 / (2.0 * (2.0 * PI).powi(4)) * (2.0 / 6.0)).abs()
                < 1e-15
        );
        assert!((t4.case_iv_coefficient - 0.0025664).abs() < 1e-7);
        assert_eq!(t4.total(), 4u64.pow(4));
        assert_eq!(t4.case_i_diagonal, 0.0);

        assert!(matches!(
            general_term_tally(&[2, 3], 9),
            Err(Error::Capacity(_))
        ));
        assert!(matches!(
            general_term_tally(&[2, 4], 2),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn diagonal_is_catalan() {
        let got: Vec<u64> = (0..10).map(hecke_diagonal).collect();
        assert_eq!(got, vec![1, 0, 1, 0, 2, 0, 5, 0, 14, 0]);
    }

    #[test]
    fn mertens_band() {
        let table = PrimeTable::new(1_000_000);
        for x in [1e3, 1e4, 1e5, 1e6] {
            assert!(mertens_deviation(&table, x).abs() <= 1.0);
        }
    }
}
