//! The Kuznetsov trace formula over even Hecke–Maass forms, for the test
//! function h(t) = e^{−(t−T)²/M²} + e^{−(t+T)²/M²}:
//!
//! ```text
//! Σ' h(t_j)|ν_j(1)|² λ_j(m)λ_j(n) + (1/4π)∫ τ_it(m)τ_it(n) h(t)/|ζ(1+2it)|² dt
//!   = δ_{m,n} H + Σ_c (1/2c)[S(m,n;c) H⁺(4π√(mn)/c) + S(−m,n;c) H⁻(4π√(mn)/c)]
//! ```
//!
//! Every t-integral is even in t and is computed on t ≥ 0 only.

use std::cell::RefCell;
use std::f64::consts::PI;

use rayon::prelude::*;

use crate::arith::{divisor_count, divisors, gcd, kloosterman, weil_bound};
use crate::maass_data::{Dataset, MaassForm};
use crate::quad::{adaptive_gauss_legendre, gauss_legendre, QuadResult, Tolerance};
use crate::specfun::{bessel_ji_imag_scaled, bessel_k_imag_scaled, zeta_one_line, BesselKind};
use crate::sum::Neumaier;
use crate::{Error, Result};

/// Quadrature covers |t − T| ≤ `WINDOW_REACH`·M, where h is below e^{−144}.
pub const WINDOW_REACH: f64 = 12.0;

/// Datasets must be complete on |t − T| ≤ `COVERAGE_REACH`·M.
pub const COVERAGE_REACH: f64 = 8.0;

/// Half-width of the excised interval around the pole of ζ(1 + 2it).
pub const EISENSTEIN_EXCISION: f64 = 1e-3;

/// Constant c in the envelope |ζ(1 + 2it)|^{−1} ≤ c·log(2 + |t|).
pub const ZETA_ENVELOPE_CONSTANT: f64 = 3.0;

/// Exponent ε in max(m, n) ≤ T^{1−ε}.
pub const ORTHOGONALITY_EPSILON: f64 = 0.1;

const B_SAFETY: f64 = 1.1;
const A_SAFETY: f64 = 2.0;
const ENVELOPE_GRID: usize = 16;
const ZETA_THREE_HALVES: f64 = 2.612_375_348_685_488_3;

/// h(t) = a·(e^{−(t−T)²/M²} + e^{−(t+T)²/M²}); a = 1 except for the zero test hook.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianWindow {
    t: f64,
    m: f64,
    amplitude: f64,
}

impl GaussianWindow {
    pub fn new(t: f64, m: f64) -> Result<Self> {
        if !(t.is_finite() && m > 0.0 && m < t) {
            return Err(Error::domain(format!(
                "window needs 0 < M < T, got T = {t}, M = {m}"
            )));
        }
        Ok(Self {
            t,
            m,
            amplitude: 1.0,
        })
    }

    /// The same window multiplied by zero.
    pub fn zeroed(self) -> Self {
        Self {
            amplitude: 0.0,
            ..self
        }
    }

    pub fn t_center(&self) -> f64 {
        self.t
    }

    pub fn m_width(&self) -> f64 {
        self.m
    }

    pub fn h(&self, t: f64) -> f64 {
        let a = (t - self.t) / self.m;
        let b = (t + self.t) / self.m;
        self.amplitude * ((-a * a).exp() + (-b * b).exp())
    }

    /// e^{−(t−T)²/M²} alone, the weight of the orthogonality relation.
    pub fn gaussian(&self, t: f64) -> f64 {
        let a = (t - self.t) / self.m;
        (-a * a).exp()
    }

    /// [max(0, T − 12M), T + 12M].
    pub fn support(&self) -> (f64, f64) {
        (
            (self.t - WINDOW_REACH * self.m).max(0.0),
            self.t + WINDOW_REACH * self.m,
        )
    }

    /// [max(0, T − 8M), T + 8M].
    pub fn coverage(&self) -> (f64, f64) {
        (
            (self.t - COVERAGE_REACH * self.m).max(0.0),
            self.t + COVERAGE_REACH * self.m,
        )
    }

    /// √π·M·(T + M), the size of ∫_0^∞ h(t)·t dt.
    fn first_moment_scale(&self) -> f64 {
        PI.sqrt() * self.m * (self.t + self.m)
    }

    fn panels(&self, lo: f64, hi: f64, width: f64) -> usize {
        ((hi - lo) / width).ceil().max(1.0) as usize
    }
}

/// H = (1/8π²)∫ h(t) tanh(πt) t dt.
pub fn transform_h(window: &GaussianWindow) -> QuadResult<f64> {
    let hi = window.support().1;
    let f = |t: f64| window.h(t) * (PI * t).tanh() * t;
    let tol = Tolerance::new(1e-12, 1e-15 * window.first_moment_scale());
    let panels = window.panels(0.0, hi, 0.5 * window.m);
    let r = adaptive_gauss_legendre(f, 0.0, hi, panels, tol, 1 << 16);
    let c = 2.0 / (8.0 * PI * PI);
    QuadResult {
        value: c * r.value,
        est_error: c * r.est_error,
        evaluations: r.evaluations,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformKind {
    /// H⁺, the J-Bessel transform.
    Plus,
    /// H⁻, the K-Bessel transform.
    Minus,
}

/// The t ≥ 0 integrand of H^± at argument x, without the outer constant.
///
/// Plus: Im(e^{−πt}J_{2it}(x))·h(t)·t·2/(1 + e^{−2πt}), since
/// J_{2it} − J_{−2it} = 2i·Im J_{2it} and e^{πt}/cosh(πt) = 2/(1 + e^{−2πt}).
/// Minus: e^{πt}K_{2it}(x)·(1 − e^{−2πt})/2·h(t)·t, since
/// sinh(πt)K_{2it} = (1 − e^{−2πt})/2·e^{πt}K_{2it}.
pub fn transform_integrand(
    kind: TransformKind,
    window: &GaussianWindow,
    x: f64,
    t: f64,
) -> Result<f64> {
    let ht = window.h(t) * t;
    match kind {
        TransformKind::Plus => {
            let j = bessel_ji_imag_scaled(BesselKind::J, t, x)?.value;
            Ok(j.im * ht * 2.0 / (1.0 + (-2.0 * PI * t).exp()))
        }
        TransformKind::Minus => {
            let k = bessel_k_imag_scaled(t, x)?.value;
            Ok(k * 0.5 * -(-2.0 * PI * t).exp_m1() * ht)
        }
    }
}

/// Outer constant: H⁺ = −(1/π)∫_0^∞ …, H⁻ = (2/π²)∫_0^∞ ….
pub fn transform_constant(kind: TransformKind) -> f64 {
    match kind {
        TransformKind::Plus => -1.0 / PI,
        TransformKind::Minus => 2.0 / (PI * PI),
    }
}

/// H⁺(x) or H⁻(x) by adaptive Gauss–Legendre on the window support.
pub fn transform_hpm(
    kind: TransformKind,
    window: &GaussianWindow,
    x: f64,
) -> Result<QuadResult<f64>> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!(
            "transform argument must be positive, got {x}"
        )));
    }
    let (lo, hi) = window.support();
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let f = |t: f64| match transform_integrand(kind, window, x, t) {
        Ok(v) => v,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            0.0
        }
    };
    // Bessel phases advance by at most ~2·log(8t/x) per unit t
    let width = (0.5 * window.m).min(0.5);
    let tol = Tolerance::new(1e-10, 1e-14 * window.first_moment_scale());
    let r = adaptive_gauss_legendre(f, lo, hi, window.panels(lo, hi, width), tol, 1 << 16);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let c = transform_constant(kind);
    Ok(QuadResult {
        value: c * r.value,
        est_error: c.abs() * r.est_error,
        evaluations: r.evaluations,
    })
}

/// τ_{it}(n) = Σ_{ab=n} (a/b)^{it} = Σ_{d | n} cos(t·log(d²/n)).
pub fn tau_generalized(t: f64, n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("tau_generalized needs n ≥ 1"));
    }
    let ln_n = (n as f64).ln();
    Ok(crate::sum::sum(
        divisors(n)
            .into_iter()
            .map(|d| (t * (2.0 * (d as f64).ln() - ln_n)).cos()),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EisensteinTerm {
    pub value: f64,
    /// Envelope bound on the |t| > t_cut remainder.
    pub tail_estimate: f64,
    pub est_error: f64,
}

/// τ_{it}(m)τ_{it}(n)h(t)/|ζ(1+2it)|² at t ≠ 0.
pub fn eisenstein_integrand(window: &GaussianWindow, m: u64, n: u64, t: f64) -> Result<f64> {
    let z = zeta_one_line(t)?;
    Ok(tau_generalized(t, m)? * tau_generalized(t, n)? * window.h(t) / z.norm_sqr())
}

/// (1/4π)∫_{|t| ≤ t_cut} τ_{it}(m)τ_{it}(n) h(t)/|ζ(1+2it)|² dt.
///
/// The integrand is bounded (≈ 4t² h(0) near 0) but ζ has a pole at 1, so
/// |t| < 10⁻³ is replaced by the midpoint value.
pub fn eisenstein_term(
    window: &GaussianWindow,
    m: u64,
    n: u64,
    t_cut: f64,
) -> Result<EisensteinTerm> {
    if m == 0 || n == 0 {
        return Err(Error::domain("Eisenstein term needs m, n ≥ 1"));
    }
    let need = window.t + COVERAGE_REACH * window.m;
    if !(t_cut >= need) {
        return Err(Error::domain(format!(
            "insufficient cutoff: t_cut = {t_cut} < T + 8M = {need}"
        )));
    }
    let eps = EISENSTEIN_EXCISION;
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let f = |t: f64| match eisenstein_integrand(window, m, n, t) {
        Ok(v) => v,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            0.0
        }
    };
    let freq = 1.0 + ((m * n) as f64).ln();
    let width = (0.5 * window.m).min(2.0 / freq);
    let scale = PI.sqrt() * window.m;
    let tol = Tolerance::new(1e-11, 1e-15 * scale);
    let r = adaptive_gauss_legendre(
        &f,
        eps,
        t_cut,
        window.panels(eps, t_cut, width),
        tol,
        1 << 18,
    );
    let bridge = eps * f(0.5 * eps);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let c = 2.0 / (4.0 * PI);

    let taus = (divisor_count(m) * divisor_count(n)) as f64;
    let envelope = |t: f64| {
        let z = ZETA_ENVELOPE_CONSTANT * (2.0 + t).ln();
        taus * window.h(t) * z * z
    };
    let tail = gauss_legendre(envelope, t_cut, t_cut + 40.0 * window.m, 400);
    Ok(EisensteinTerm {
        value: c * (bridge + r.value),
        tail_estimate: c * tail,
        est_error: c * (r.est_error + eps.powi(3) * window.h(0.0) * taus),
    })
}

/// Grid-measured constants bounding |H^±(x)| for the omitted c > c_max terms.
///
/// `b_*` bound |H^±| for x ≥ 1 (x up to 4π√(mn)); `a_*` bound |H^±(x)|/x for
/// x ≤ 1. Both are maxima over a log-spaced grid times a safety factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailEnvelope {
    pub b_plus: f64,
    pub b_minus: f64,
    pub a_plus: f64,
    pub a_minus: f64,
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if hi <= lo {
        return vec![lo];
    }
    (0..n)
        .map(|k| lo * (hi / lo).powf(k as f64 / (n - 1) as f64))
        .collect()
}

impl TailEnvelope {
    pub fn measure(window: &GaussianWindow, m: u64, n: u64) -> Result<Self> {
        let x_top = 4.0 * PI * ((m * n) as f64).sqrt();
        let high = if x_top >= 1.0 {
            log_grid(1.0, x_top, ENVELOPE_GRID)
        } else {
            Vec::new()
        };
        let low = log_grid(1e-3, 1.0, ENVELOPE_GRID);
        let sup = |kind: TransformKind, xs: &[f64], per_x: bool| -> Result<f64> {
            let vals: Vec<f64> = xs
                .par_iter()
                .map(|&x| {
                    transform_hpm(kind, window, x).map(|r| {
                        if per_x {
                            r.value.abs() / x
                        } else {
                            r.value.abs()
                        }
                    })
                })
                .collect::<Result<_>>()?;
            Ok(vals.into_iter().fold(0.0, f64::max))
        };
        Ok(Self {
            b_plus: B_SAFETY * sup(TransformKind::Plus, &high, false)?,
            b_minus: B_SAFETY * sup(TransformKind::Minus, &high, false)?,
            a_plus: A_SAFETY * sup(TransformKind::Plus, &low, true)?,
            a_minus: A_SAFETY * sup(TransformKind::Minus, &low, true)?,
        })
    }
}

/// Upper bound for Σ_{c > C} τ(c) c^{−3/2}.
///
/// Writing c = ab: for a ≤ C the b-sum runs over b > C/a and is at most
/// min(ζ(3/2), 2/√⌊C/a⌋); the a > C part is at most ζ(3/2)·2/√C.
pub fn divisor_tail_bound(c: u64) -> f64 {
    if c == 0 {
        return f64::INFINITY;
    }
    let mut acc = Neumaier::new();
    for a in 1..=c {
        let q = c / a;
        let inner = (2.0 / (q as f64).sqrt()).min(ZETA_THREE_HALVES);
        acc.add(inner * (a as f64).powf(-1.5));
    }
    acc.add(ZETA_THREE_HALVES * 2.0 / (c as f64).sqrt());
    acc.value()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometricSide {
    pub kloosterman_j: f64,
    pub kloosterman_k: f64,
    pub tail_bound: f64,
    /// Accumulated quadrature error estimates of the included terms.
    pub est_error: f64,
}

pub fn geometric_side(
    window: &GaussianWindow,
    m: u64,
    n: u64,
    c_max: u64,
) -> Result<GeometricSide> {
    let envelope = TailEnvelope::measure(window, m, n)?;
    geometric_side_with(window, m, n, c_max, &envelope)
}

/// As [`geometric_side`] with a precomputed tail envelope.
pub fn geometric_side_with(
    window: &GaussianWindow,
    m: u64,
    n: u64,
    c_max: u64,
    envelope: &TailEnvelope,
) -> Result<GeometricSide> {
    if m == 0 || n == 0 || c_max == 0 {
        return Err(Error::domain("geometric side needs m, n, c_max ≥ 1"));
    }
    let (mi, ni) = (m as i64, n as i64);
    let root = ((m * n) as f64).sqrt();
    let terms: Vec<(f64, f64, f64)> = (1..=c_max)
        .into_par_iter()
        .map(|c| {
            let x = 4.0 * PI * root / c as f64;
            let hp = transform_hpm(TransformKind::Plus, window, x)?;
            let hm = transform_hpm(TransformKind::Minus, window, x)?;
            let s_plus = kloosterman(mi, ni, c)?;
            let s_minus = kloosterman(-mi, ni, c)?;
            let half_c = 0.5 / c as f64;
            let err = half_c * (s_plus.abs() * hp.est_error + s_minus.abs() * hm.est_error);
            Ok((half_c * s_plus * hp.value, half_c * s_minus * hm.value, err))
        })
        .collect::<Result<_>>()?;
    let (mut j, mut k, mut e) = (Neumaier::new(), Neumaier::new(), Neumaier::new());
    for (a, b, c) in terms {
        j.add(a);
        k.add(b);
        e.add(c);
    }

    // omitted terms with x = 4π√(mn)/c ≥ 1
    let c_switch = (4.0 * PI * root).floor() as u64;
    let mut tail = Neumaier::new();
    for c in (c_max + 1)..=c_switch {
        tail.add(weil_bound(mi, ni, c) * (envelope.b_plus + envelope.b_minus) * 0.5 / c as f64);
    }
    // x < 1: |H^±(x)| ≤ a·x and the Weil bound leave τ(c)c^{−3/2}
    let g = (gcd(m, n) as f64).sqrt();
    let start = c_max.max(c_switch);
    tail.add(
        (envelope.a_plus + envelope.a_minus) * 2.0 * PI * root * g * divisor_tail_bound(start),
    );

    Ok(GeometricSide {
        kloosterman_j: j.value(),
        kloosterman_k: k.value(),
        tail_bound: tail.value(),
        est_error: e.value(),
    })
}

/// Kim–Sarnak envelope n^{7/64}τ(n) for |λ_j(n)|.
fn eigenvalue_envelope(n: u64) -> f64 {
    (n as f64).powf(crate::hecke::KIM_SARNAK_THETA) * divisor_count(n) as f64
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralSide {
    pub value: f64,
    /// Bound on forms outside the completeness window, from the Weyl law.
    pub truncation_bound: f64,
}

fn hecke_pair(form: &MaassForm, m: u64, n: u64) -> Result<f64> {
    Ok(form.hecke.lambda_or_err(m)? * form.hecke.lambda_or_err(n)?)
}

/// Σ' h(t_j)|ν_j(1)|²λ_j(m)λ_j(n) over the forms in the completeness window.
///
/// The truncation bound is 2·(m^{7/64}τ(m))(n^{7/64}τ(n))·∫_{outside} h(t)·2t/π² dt,
/// the Weyl density d/dT(T²/π²) with safety factor 2.
pub fn spectral_side(
    dataset: &Dataset,
    window: &GaussianWindow,
    m: u64,
    n: u64,
) -> Result<SpectralSide> {
    let (lo, hi) = dataset
        .window()
        .ok_or_else(|| Error::IncompleteData("dataset declares no completeness window".into()))?;
    let mut acc = Neumaier::new();
    for form in dataset.forms_in(lo, hi) {
        acc.add(window.h(form.tj) * form.nu1sq_or_err()? * hecke_pair(form, m, n)?);
    }
    let density = |t: f64| window.h(t) * 2.0 * t / (PI * PI);
    let below = if lo > 0.0 {
        gauss_legendre(density, 0.0, lo, window.panels(0.0, lo, 0.5 * window.m))
    } else {
        0.0
    };
    let top = hi.max(window.support().1) + 20.0 * window.m;
    let above = gauss_legendre(density, hi, top, window.panels(hi, top, 0.5 * window.m));
    let truncation_bound = 2.0 * eigenvalue_envelope(m) * eigenvalue_envelope(n) * (below + above);
    Ok(SpectralSide {
        value: acc.value(),
        truncation_bound,
    })
}

/// Σ' e^{−(t_j−T)²/M²}|ν_j(1)|²·f(i, form) over the forms with
/// |t_j − T| ≤ 12M, ascending in t_j; `i` indexes [`weighted_forms`].
///
/// Shared by the orthogonality estimator and the moment estimator so that
/// both produce bitwise-identical normalisations.
pub fn gaussian_weighted_sum(
    dataset: &Dataset,
    window: &GaussianWindow,
    f: impl Fn(usize, &MaassForm) -> Result<f64>,
) -> Result<f64> {
    let mut acc = Neumaier::new();
    for (i, form) in weighted_forms(dataset, window).iter().enumerate() {
        acc.add(window.gaussian(form.tj) * form.nu1sq_or_err()? * f(i, form)?);
    }
    Ok(acc.value())
}

/// The forms entering [`gaussian_weighted_sum`].
pub fn weighted_forms<'a>(dataset: &'a Dataset, window: &GaussianWindow) -> &'a [MaassForm] {
    let (lo, hi) = window.support();
    dataset.forms_in(lo, hi)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrthogonalityRecord {
    pub m: u64,
    pub n: u64,
    pub empirical: f64,
    /// MT·δ_{m,n}/(4π^{3/2}).
    pub predicted: f64,
    pub discrepancy: f64,
    pub annotation: String,
}

/// Checks the window parameters and dataset coverage shared by the weighted estimators.
pub fn checked_window(dataset: &Dataset, t: f64, m_width: f64) -> Result<GaussianWindow> {
    let window = GaussianWindow::new(t, m_width)?;
    let (lo, hi) = window.coverage();
    dataset.require_coverage(lo, hi)?;
    Ok(window)
}

pub fn orthogonality_estimate(
    dataset: &Dataset,
    t: f64,
    m_width: f64,
    m: u64,
    n: u64,
) -> Result<OrthogonalityRecord> {
    if m == 0 || n == 0 {
        return Err(Error::domain("orthogonality needs m, n ≥ 1"));
    }
    let limit = t.powf(1.0 - ORTHOGONALITY_EPSILON);
    if (m.max(n) as f64) > limit {
        return Err(Error::domain(format!(
            "max(m, n) = {} exceeds T^(1-ε) = {limit:.3} with ε = {ORTHOGONALITY_EPSILON}",
            m.max(n)
        )));
    }
    let window = checked_window(dataset, t, m_width)?;
    let empirical = gaussian_weighted_sum(dataset, &window, |_, form| hecke_pair(form, m, n))?;
    let predicted = if m == n {
        m_width * t / (4.0 * PI.powf(1.5))
    } else {
        0.0
    };
    Ok(OrthogonalityRecord {
        m,
        n,
        empirical,
        predicted,
        discrepancy: empirical - predicted,
        annotation: format!("error term O(M T^{ORTHOGONALITY_EPSILON}) with unspecified constant"),
    })
}

/// Both sides of the trace formula for one (m, n, window).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceReport {
    pub spectral: f64,
    pub eisenstein: f64,
    pub delta_term: f64,
    pub kloosterman_j: f64,
    pub kloosterman_k: f64,
    pub tail_bound: f64,
    pub spectral_truncation_bound: f64,
    pub residual: f64,
}

impl TraceReport {
    pub fn from_parts(
        spectral: SpectralSide,
        eisenstein: f64,
        delta_term: f64,
        geometric: GeometricSide,
    ) -> Self {
        let residual = spectral.value + eisenstein
            - delta_term
            - geometric.kloosterman_j
            - geometric.kloosterman_k;
        Self {
            spectral: spectral.value,
            eisenstein,
            delta_term,
            kloosterman_j: geometric.kloosterman_j,
            kloosterman_k: geometric.kloosterman_k,
            tail_bound: geometric.tail_bound,
            spectral_truncation_bound: spectral.truncation_bound,
            residual,
        }
    }

    /// Allowed |residual|: tail bound + truncation bound + 1% of the delta term.
    pub fn budget(&self) -> f64 {
        self.tail_bound + self.spectral_truncation_bound + 1e-2 * self.delta_term.abs()
    }

    pub fn within_budget(&self) -> bool {
        self.residual.abs() <= self.budget()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceParams {
    pub t: f64,
    pub m_width: f64,
    pub m: u64,
    pub n: u64,
    pub c_max: u64,
    pub t_cut: f64,
}

pub fn trace_report(dataset: &Dataset, p: &TraceParams) -> Result<TraceReport> {
    let window = checked_window(dataset, p.t, p.m_width)?;
    let spectral = spectral_side(dataset, &window, p.m, p.n)?;
    let eisenstein = eisenstein_term(&window, p.m, p.n, p.t_cut)?.value;
    let delta_term = if p.m == p.n {
        transform_h(&window).value
    } else {
        0.0
    };
    let geometric = geometric_side(&window, p.m, p.n, p.c_max)?;
    Ok(TraceReport::from_parts(
        spectral, eisenstein, delta_term, geometric,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::trapezoid_halving;

    #[test]
    fn window_examples() {
        let w = GaussianWindow::new(10.0, 2.0).unwrap();
        assert!((w.h(10.0) - (1.0 + (-100.0f64).exp())).abs() < 1e-15);
        assert_eq!(w.h(0.0), 2.0 * (-25.0f64).exp());
        assert_eq!(w.h(-17.3), w.h(17.3));
        assert!(GaussianWindow::new(5.0, 5.0).is_err());
        assert!(GaussianWindow::new(5.0, 0.0).is_err());
    }

    #[test]
    fn transform_h_gaussian_moment() {
        let w = GaussianWindow::new(100.0, 10.0).unwrap();
        let want = 2.0 * PI.sqrt() * 1000.0 / (8.0 * PI * PI);
        let got = transform_h(&w).value;
        assert!(((got - want) / want).abs() < 1e-6, "{got} vs {want}");
        assert_eq!(transform_h(&w.zeroed()).value, 0.0);
    }

    #[test]
    fn tau_examples() {
        assert_eq!(tau_generalized(3.7, 1).unwrap(), 1.0);
        assert!((tau_generalized(0.0, 12).unwrap() - 6.0).abs() < 1e-15);
        let t = 2.3;
        assert!((tau_generalized(t, 7).unwrap() - 2.0 * (t * 7f64.ln()).cos()).abs() < 1e-14);
    }

    #[test]
    fn hminus_fold_matches_full_line() {
        let w = GaussianWindow::new(5.0, 1.0).unwrap();
        let x = 2.0;
        let folded = transform_hpm(TransformKind::Minus, &w, x).unwrap().value;
        // full line: K_{2it} and sinh(πt)·t are both even in t
        let full = |t: f64| {
            let k = bessel_k_imag_scaled(t, x).unwrap().value;
            let s = 0.5 * -(-2.0 * PI * t.abs()).exp_m1() * t.signum();
            k * s * w.h(t) * t
        };
        let r = trapezoid_halving(full, -17.0, 17.0, 256, Tolerance::new(1e-13, 0.0), 1 << 16);
        let full_value = r.value / (PI * PI);
        assert!(
            (folded - full_value).abs() < 1e-9 * folded.abs().max(1e-3),
            "{folded} vs {full_value}"
        );
    }

    #[test]
    fn eisenstein_rejects_short_cutoff() {
        let w = GaussianWindow::new(5.0, 1.0).unwrap();
        assert!(matches!(
            eisenstein_term(&w, 1, 1, 12.9),
            Err(Error::Domain(_))
        ));
        let e = eisenstein_term(&w, 1, 1, 13.0).unwrap();
        assert!(e.value > 0.0 && e.tail_estimate >= 0.0);
    }

    #[test]
    fn divisor_tail_bound_dominates_partial_sums() {
        for c in [1u64, 5, 40] {
            let partial: f64 = (c + 1..200_000)
                .map(|k| divisor_count(k) as f64 * (k as f64).powf(-1.5))
                .sum();
            assert!(divisor_tail_bound(c) > partial, "c = {c}");
        }
    }

    #[test]
    fn residual_is_the_stored_combination() {
        let r = TraceReport::from_parts(
            SpectralSide {
                value: 1.25,
                truncation_bound: 0.5,
            },
            0.75,
            2.0,
            GeometricSide {
                kloosterman_j: 0.125,
                kloosterman_k: -0.5,
                tail_bound: 0.1,
                est_error: 0.0,
            },
        );
        assert_eq!(r.residual, 1.25 + 0.75 - 2.0 - 0.125 - -0.5);
        assert_eq!(r.budget(), 0.1 + 0.5 + 0.02);
    }
}
