//! Smoothed prime sums approximating `S_j(t)`.
//!
//! Λ_x(n) tapers the von Mangoldt weights so that the Dirichlet series for
//! −L'/L can be cut at n = x³. With an abscissa σ_x slightly right of 1/2,
//!
//! ```text
//! S_j(t) ≈ (1/π) Im Σ_{n ≤ x³} C_j(n) Λ_x(n) / (n^{σ_x + it} log n)
//! ```
//!
//! and the leading piece over primes alone is M_j(t).

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::arith::{von_mangoldt, PrimePower, PrimeTable};
use crate::hecke::lambda_prime_power;
use crate::maass_data::MaassForm;
use crate::quad::gauss_legendre;
use crate::sum::{Neumaier, NeumaierComplex};
use crate::{Error, Result};

/// Smallest admissible smoothing parameter.
pub const MIN_X: f64 = 4.0;

/// Upper limit on x³, the length of the prime-power sums.
pub const MAX_CUTOFF: f64 = 1e7;

/// Default exponent δ in x = T^{δ/3}.
pub const DEFAULT_DELTA: f64 = 0.05;

/// x = max(4, T^{δ/3}).
pub fn default_x(t_big: f64, delta: f64) -> f64 {
    t_big.powf(delta / 3.0).max(MIN_X)
}

fn check_x(x: f64) -> Result<()> {
    if !(x >= MIN_X) || !x.is_finite() {
        return Err(Error::domain(format!(
            "smoothing parameter x = {x} must be at least {MIN_X}"
        )));
    }
    Ok(())
}

/// The piecewise taper Λ_x(n)/Λ(n) at a real argument `y ≥ 1`.
pub fn smoothing_factor(y: f64, x: f64) -> Result<f64> {
    check_x(x)?;
    let big = x.ln();
    let l = y.ln();
    let x2 = x * x;
    let x3 = x2 * x;
    let denom = 2.0 * big * big;
    Ok(if y <= x {
        1.0
    } else if y <= x2 {
        ((3.0 * big - l).powi(2) - 2.0 * (2.0 * big - l).powi(2)) / denom
    } else if y < x3 {
        (3.0 * big - l).powi(2) / denom
    } else {
        0.0
    })
}

/// Λ_x(n).
pub fn lambda_x(n: u64, x: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("lambda_x needs n ≥ 1"));
    }
    let factor = smoothing_factor(n as f64, x)?;
    Ok(von_mangoldt(n) * factor)
}

/// A zero ρ = β + iγ of L(s, u_j).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Zero {
    pub beta: f64,
    pub gamma: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SigmaPolicy {
    /// σ_x = 1/2 + 10/log x, valid under the generalized Riemann hypothesis.
    GrhDefault,
    /// σ_x from the zeros near height t.
    FromZeros(Vec<Zero>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SigmaX {
    pub value: f64,
    pub warning: Option<String>,
}

pub fn sigma_x(policy: &SigmaPolicy, t: f64, x: f64) -> Result<SigmaX> {
    check_x(x)?;
    let log_x = x.ln();
    let grh = 0.5 + 10.0 / log_x;
    match policy {
        SigmaPolicy::GrhDefault => Ok(SigmaX {
            value: grh,
            warning: None,
        }),
        SigmaPolicy::FromZeros(zeros) if zeros.is_empty() => Ok(SigmaX {
            value: grh,
            warning: Some("empty zero list; using 1/2 + 10/log x".into()),
        }),
        SigmaPolicy::FromZeros(zeros) => {
            let mut widest = 5.0 / log_x;
            for z in zeros {
                let offset = (z.beta - 0.5).abs();
                if (t - z.gamma).abs() <= x.powf(3.0 * offset) / log_x {
                    widest = widest.max(offset);
                }
            }
            Ok(SigmaX {
                value: 0.5 + 2.0 * widest,
                warning: None,
            })
        }
    }
}

/// Cached Λ_x weights on the prime powers below x³.
#[derive(Debug, Clone)]
pub struct SmoothingContext {
    x: f64,
    policy: SigmaPolicy,
    primes: Vec<u64>,
    /// (prime power, Λ_x) for every prime power with Λ_x > 0, ascending.
    weights: Vec<(PrimePower, f64)>,
}

impl SmoothingContext {
    pub fn new(x: f64, policy: SigmaPolicy) -> Result<Self> {
        check_x(x)?;
        let cutoff = x * x * x;
        if cutoff > MAX_CUTOFF {
            return Err(Error::Capacity(format!(
                "x³ = {cutoff} exceeds {MAX_CUTOFF}"
            )));
        }
        let table = PrimeTable::new(cutoff.floor() as u64);
        let weights = table
            .prime_powers()
            .iter()
            .filter_map(|pp| {
                let w = pp.mangoldt * smoothing_factor(pp.n as f64, x).expect("x checked");
                (w > 0.0).then_some((*pp, w))
            })
            .collect();
        let primes = table
            .primes()
            .iter()
            .copied()
            .filter(|&p| (p as f64) < cutoff)
            .collect();
        Ok(Self {
            x,
            policy,
            primes,
            weights,
        })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn cutoff(&self) -> f64 {
        self.x * self.x * self.x
    }

    pub fn policy(&self) -> &SigmaPolicy {
        &self.policy
    }

    /// Primes p < x³.
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn weights(&self) -> &[(PrimePower, f64)] {
        &self.weights
    }

    pub fn sigma_x(&self, t: f64) -> Result<SigmaX> {
        sigma_x(&self.policy, t, self.x)
    }
}

/// M_j(t) = −(1/π) Σ_{p < x³} λ(p) sin(t log p)/√p.
pub fn m_poly(form: &MaassForm, t: f64, ctx: &SmoothingContext) -> Result<f64> {
    let mut acc = Neumaier::new();
    for &p in ctx.primes() {
        let lp = form.hecke.lambda_prime(p)?;
        let pf = p as f64;
        acc.add(lp * (t * pf.ln()).sin() / pf.sqrt());
    }
    Ok(-acc.value() / PI)
}

/// Main term of the `S_j(t)` approximation and the two error quantities
/// whose constants are left unspecified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SApprox {
    pub main: f64,
    /// (σ_x − 1/2)·|Σ C(n)Λ_x(n) n^{−σ_x−it}|.
    pub err_poly: f64,
    /// (σ_x − 1/2)·log(|t| + t_j + 1).
    pub err_log: f64,
    pub sigma_x_used: f64,
}

/// C(p^m) for every weighted prime power, in the context's order.
fn prime_power_coefficients(form: &MaassForm, ctx: &SmoothingContext) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(ctx.weights().len());
    for (pp, _) in ctx.weights() {
        let lp = form.hecke.lambda_prime(pp.p)?;
        let c = if pp.exponent == 1 {
            lp
        } else {
            lambda_prime_power(lp, pp.exponent) - lambda_prime_power(lp, pp.exponent - 2)
        };
        out.push(c);
    }
    Ok(out)
}

pub fn s_approx(form: &MaassForm, t: f64, ctx: &SmoothingContext) -> Result<SApprox> {
    if t == 0.0 || !t.is_finite() {
        return Err(Error::domain("s_approx needs a finite t ≠ 0"));
    }
    let sigma = ctx.sigma_x(t)?.value;
    let coeffs = prime_power_coefficients(form, ctx)?;
    let mut main = Neumaier::new();
    let mut full = NeumaierComplex::new();
    for ((pp, w), c) in ctx.weights().iter().zip(&coeffs) {
        let log_n = pp.mangoldt * pp.exponent as f64;
        let amp = c * w * (-sigma * log_n).exp();
        let phase = t * log_n;
        let (s, co) = phase.sin_cos();
        // Im n^{−it} = −sin(t log n)
        main.add(-amp * s / log_n);
        full.add(Complex64::new(amp * co, -amp * s));
    }
    let excess = sigma - 0.5;
    Ok(SApprox {
        main: main.value() / PI,
        err_poly: excess * full.value().norm(),
        err_log: excess * (t.abs() + form.tj + 1.0).ln(),
        sigma_x_used: sigma,
    })
}

/// (1/2πi)∫_{(α)} y^s/s³ ds, integrated on |Im s| ≤ `u_max`.
///
/// Equals log²(y)/2 for y ≥ 1 and 0 for 0 < y ≤ 1; the truncated tail is
/// below y^α/(2π u_max²).
pub fn mellin_cubic_kernel(y: f64, alpha: f64, u_max: f64) -> Result<f64> {
    if !(y > 0.0 && alpha > 0.0 && u_max > 0.0) {
        return Err(Error::domain("mellin_cubic_kernel needs y, α, u_max > 0"));
    }
    let ln_y = y.ln();
    // the real part of the integrand is even in u
    let f = |u: f64| {
        let s = Complex64::new(alpha, u);
        ((s * ln_y).exp() / (s * s * s)).re
    };
    // panels short against both the oscillation period and the 1/|s|³ scale
    let period = if ln_y.abs() > 0.0 {
        2.0 * PI / ln_y.abs()
    } else {
        f64::INFINITY
    };
    let panel = period.min(alpha).min(1.0);
    let panels = (u_max / panel).ceil() as usize;
    let half: f64 = gauss_legendre(f, 0.0, u_max, panels);
    Ok(half / PI)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    #[test]
    fn lambda_x_examples() {
        assert_eq!(lambda_x(3, 4.0).unwrap(), 3f64.ln());
        assert_eq!(lambda_x(64, 4.0).unwrap(), 0.0);
        assert!((lambda_x(8, 4.0).unwrap() - 0.875 * 2f64.ln()).abs() < 1e-15);
        assert_eq!(lambda_x(6, 4.0).unwrap(), 0.0);
        assert!(matches!(lambda_x(2, 3.9), Err(Error::Domain(_))));
    }

    #[test]
    fn taper_breakpoints() {
        for x in [4.0, 10.0, 100.0] {
            let near = |y: f64, want: f64| {
                assert!(
                    (smoothing_factor(y, x).unwrap() - want).abs() < 1e-12,
                    "x={x} y={y}"
                );
            };
            near(x, 1.0);
            near(x * (1.0 + 1e-14), 1.0);
            near(x * x, 0.5);
            near(x * x * (1.0 + 1e-14), 0.5);
            near(x * x * x * (1.0 - 1e-14), 0.0);
            near(x * x * x, 0.0);
        }
    }

    #[test]
    fn sigma_examples() {
        let x = 10f64.exp();
        let grh = sigma_x(&SigmaPolicy::GrhDefault, 3.0, x).unwrap().value;
        assert!((grh - 1.5).abs() < 1e-15);

        let on_line = SigmaPolicy::FromZeros(vec![
            Zero {
                beta: 0.5,
                gamma: 3.0,
            },
            Zero {
                beta: 0.5,
                gamma: 7.0,
            },
        ]);
        assert!((sigma_x(&on_line, 3.0, x).unwrap().value - grh).abs() < 1e-15);

        let big_x = 1e300;
        let off = SigmaPolicy::FromZeros(vec![Zero {
            beta: 0.6,
            gamma: 40.0,
        }]);
        let s = sigma_x(&off, 40.0, big_x).unwrap().value;
        assert!((s - 0.7).abs() < 1e-12);
        // the same zero far from t is ignored
        let far = sigma_x(&off, 1e90, big_x).unwrap().value;
        assert!((far - (0.5 + 10.0 / big_x.ln())).abs() < 1e-15);

        let empty = sigma_x(&SigmaPolicy::FromZeros(vec![]), 1.0, 100.0).unwrap();
        assert!(empty.warning.is_some());
        assert_eq!(empty.value, 0.5 + 10.0 / 100f64.ln());
    }

    fn form_with(ctx: &SmoothingContext, f: impl Fn(u64) -> f64) -> MaassForm {
        let primes: BTreeMap<u64, f64> = ctx.primes().iter().map(|&p| (p, f(p))).collect();
        MaassForm::new(10.0, Some(1.0), primes).unwrap()
    }

    #[test]
    fn m_poly_examples() {
        let ctx = SmoothingContext::new(4.0, SigmaPolicy::GrhDefault).unwrap();
        let form = form_with(&ctx, |p| if p == 2 { 1.0 } else { 0.0 });
        assert_eq!(m_poly(&form, 0.0, &ctx).unwrap(), 0.0);
        let t = 0.5 * PI / 2f64.ln();
        let want = -1.0 / (PI * 2f64.sqrt());
        assert!((m_poly(&form, t, &ctx).unwrap() - want).abs() < 1e-15);

        let base = form_with(&ctx, |p| (p as f64).sin());
        let doubled = form_with(&ctx, |p| 2.0 * (p as f64).sin());
        let (a, b) = (
            m_poly(&base, 3.3, &ctx).unwrap(),
            m_poly(&doubled, 3.3, &ctx).unwrap(),
        );
        assert!((b - 2.0 * a).abs() < 1e-14);

        let sparse = MaassForm::new(10.0, None, [(2, 1.0)].into_iter().collect()).unwrap();
        assert!(matches!(
            m_poly(&sparse, 1.0, &ctx),
            Err(Error::IncompleteData(_))
        ));
    }

    #[test]
    fn s_approx_with_vanishing_primes() {
        let x = 5.0;
        let ctx = SmoothingContext::new(x, SigmaPolicy::GrhDefault).unwrap();
        let form = form_with(&ctx, |_| 0.0);
        let t = 2.7;
        let got = s_approx(&form, t, &ctx).unwrap();
        let sigma = 0.5 + 10.0 / x.ln();
        // λ(p) = 0 ⇒ α = i and C(p^m) = i^m + i^{−m} = 2cos(mπ/2)
        let mut want = 0.0;
        for n in 2..125u64 {
            let Some((_, m)) = crate::arith::prime_power(n) else {
                continue;
            };
            let c = match m % 4 {
                2 => -2.0,
                0 => 2.0,
                _ => 0.0,
            };
            let ln_n = (n as f64).ln();
            want +=
                c * lambda_x(n, x).unwrap() * (-sigma * ln_n).exp() * (-(t * ln_n).sin()) / ln_n;
        }
        want /= PI;
        assert!((got.main - want).abs() < 1e-14, "{} vs {want}", got.main);
        assert_eq!(got.sigma_x_used, sigma);
        assert!(got.err_poly >= 0.0 && got.err_log > 0.0);
        assert!(matches!(s_approx(&form, 0.0, &ctx), Err(Error::Domain(_))));
    }

    #[test]
    fn s_approx_is_odd_in_t() {
        let ctx = SmoothingContext::new(6.0, SigmaPolicy::GrhDefault).unwrap();
        let form = form_with(&ctx, |p| 1.9 * ((p as f64) * 1.3).cos());
        for t in [0.1, 1.0, 17.5, 300.0] {
            let a = s_approx(&form, t, &ctx).unwrap();
            let b = s_approx(&form, -t, &ctx).unwrap();
            assert_eq!(a.main, -b.main);
        }
    }

    #[test]
    fn mellin_kernel() {
        for (y, want) in [
            (2.0f64, 0.5 * 2f64.ln().powi(2)),
            (10.0, 0.5 * 10f64.ln().powi(2)),
            (0.5, 0.0),
        ] {
            let got = mellin_cubic_kernel(y, 2.0, 2e4).unwrap();
            assert!((got - want).abs() < 1e-6, "y={y}: {got} vs {want}");
        }
    }
}
