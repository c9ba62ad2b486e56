use std::collections::BTreeMap;
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spectral_moments::arith::{kloosterman_table, PrimeTable};
use spectral_moments::dirichlet_poly::{default_x, DEFAULT_DELTA};
use spectral_moments::maass_data::{parse_dataset, serialize, validate, Dataset, MaassForm};
use spectral_moments::moments::{
    case_iv_closed_form, empirical_measure, general_term_tally, weighted_moments, Case,
    MomentParams, Proxy,
};
use spectral_moments::specfun::{
    bessel_ji_imag_integral_scaled, bessel_ji_imag_scaled, bessel_k_asymptotic,
    bessel_k_imag_scaled, bessel_k_imag_scaled_quadrature, bessel_k_imag_scaled_series, BesselKind,
};
use spectral_moments::trace::{orthogonality_estimate, trace_report, TraceParams, WINDOW_REACH};
use spectral_moments::zeta_clt::selberg_moment;

use crate::report::{num, write_output, Report};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "spectral-moments",
    version,
    about = "Moments of S_j(t) over even Hecke–Maass forms and the zeta analog"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Table of Kloosterman sums S(m, n; c) with Weil certification.
    Kloosterman(KloostermanArgs),
    /// Cross-method table of e^{πt}K_{2it}(x) and e^{-πt}J_{2it}(x).
    Bessel(BesselArgs),
    /// Both sides of the trace formula for one (m, n, T, M).
    TraceCheck(TraceArgs),
    /// Weighted Hecke-pair sums against δ_{m,n}·MT/(4π^{3/2}) on an (m, n) grid.
    Orthogonality(OrthogonalityArgs),
    /// Gaussian-weighted moments of S_j(t) and the distance to the limiting Gaussian.
    Moments(MomentsArgs),
    /// Even moments of S(t) for ζ over [T, 2T].
    ZetaMoments(ZetaArgs),
    /// Parse, validate and canonically re-serialize a maass-v1 dataset.
    Ingest(IngestArgs),
    /// Case counts of the general moment term for a set of primes.
    Tally(TallyArgs),
    /// Seeded synthetic dataset with Sato–Tate distributed λ(p) (not eigenforms).
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
pub struct KloostermanArgs {
    #[arg(long, allow_negative_numbers = true)]
    m: i64,
    #[arg(long, allow_negative_numbers = true)]
    n: i64,
    #[arg(long)]
    c_max: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BesselArgs {
    /// Half-orders t (the Bessel order is 2it).
    #[arg(long, value_delimiter = ',', required = true)]
    t: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true)]
    x: Vec<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    #[arg(long)]
    dataset: PathBuf,
    #[arg(long = "T")]
    t_big: f64,
    #[arg(long = "M")]
    m_width: f64,
    #[arg(long, default_value_t = 1)]
    m: u64,
    #[arg(long, default_value_t = 1)]
    n: u64,
    #[arg(long, default_value_t = 60)]
    c_max: u64,
    /// Eisenstein cut point; defaults to T + 12M.
    #[arg(long)]
    t_cut: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OrthogonalityArgs {
    #[arg(long)]
    dataset: PathBuf,
    #[arg(long = "T")]
    t_big: f64,
    #[arg(long = "M")]
    m_width: f64,
    /// Largest m and n on the grid.
    #[arg(long, default_value_t = 4)]
    max_mn: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ProxyArg {
    SApprox,
    MPoly,
}

#[derive(Debug, Args)]
pub struct MomentsArgs {
    #[arg(long)]
    dataset: PathBuf,
    #[arg(long = "T")]
    t_big: f64,
    #[arg(long = "M")]
    m_width: f64,
    /// Height at which S_j is sampled.
    #[arg(long)]
    t: f64,
    /// Smoothing parameter; defaults to max(4, T^{δ/3}) with δ = 0.05.
    #[arg(long)]
    x: Option<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0,1,2,3,4")]
    orders: Vec<u32>,
    #[arg(long, value_enum, default_value = "s-approx")]
    proxy: ProxyArg,
    /// Also write the μ_TM samples (normalised S_j(t), weight) here.
    #[arg(long)]
    samples_out: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ZetaArgs {
    #[arg(long = "T")]
    t_big: f64,
    #[arg(long, default_value_t = 1)]
    n: u32,
    #[arg(long, default_value_t = 0.05)]
    grid_step: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    #[arg(long)]
    dataset: PathBuf,
    /// Canonical re-serialization target; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-form validation table.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TallyArgs {
    #[arg(long)]
    n: u32,
    #[arg(long, value_delimiter = ',', required = true)]
    primes: Vec<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    count: usize,
    #[arg(long, default_value_t = 10.0)]
    t_lo: f64,
    #[arg(long, default_value_t = 30.0)]
    t_hi: f64,
    /// λ(p) is drawn for every prime up to this bound.
    #[arg(long, default_value_t = 100)]
    primes_up_to: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Kloosterman(a) => kloosterman(a),
        Command::Bessel(a) => bessel(a),
        Command::TraceCheck(a) => trace_check(a),
        Command::Orthogonality(a) => orthogonality(a),
        Command::Moments(a) => moments(a),
        Command::ZetaMoments(a) => zeta_moments(a),
        Command::Ingest(a) => ingest(a),
        Command::Tally(a) => tally(a),
        Command::Synth(a) => synth(a),
    }
}

fn load(path: &Path) -> Result<Dataset, CliError> {
    let file = File::open(path).map_err(|e| {
        CliError::Validation(format!("cannot open dataset {}: {e}", path.display()))
    })?;
    parse_dataset(BufReader::new(file))
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

fn kloosterman(a: KloostermanArgs) -> Result<(), CliError> {
    let table = kloosterman_table(a.m, a.n, a.c_max)?;
    let mut r = Report::new("kloosterman", &a);
    r.row(&["m", "n", "c", "value", "weil_bound", "certified"]);
    for k in &table {
        r.row(&[
            a.m.to_string(),
            a.n.to_string(),
            k.modulus.to_string(),
            num(k.value),
            num(k.weil_bound),
            k.certified.to_string(),
        ]);
    }
    r.emit(a.out.as_deref())
}

fn cell<T>(res: spectral_moments::Result<T>, f: impl Fn(T) -> String) -> String {
    res.map(f).unwrap_or_default()
}

fn bessel(a: BesselArgs) -> Result<(), CliError> {
    let mut r = Report::new("bessel", &a);
    r.comment("k_* are e^{πt}K_{2it}(x); j_* are e^{-πt}J_{2it}(x); empty cells mark methods outside their range");
    r.row(&[
        "t",
        "x",
        "k_method",
        "k_value",
        "k_est_error",
        "k_series",
        "k_quadrature",
        "k_asymptotic",
        "j_re",
        "j_im",
        "j_integral_re",
        "j_integral_im",
    ]);
    for &t in &a.t {
        for &x in &a.x {
            let k = bessel_k_imag_scaled(t, x)?;
            let j = bessel_ji_imag_scaled(BesselKind::J, t, x)?;
            r.row(&[
                num(t),
                num(x),
                format!("{:?}", k.method),
                num(k.value),
                num(k.est_error),
                cell(bessel_k_imag_scaled_series(t, x), |e| num(e.value)),
                cell(bessel_k_imag_scaled_quadrature(t, x), |e| num(e.value)),
                cell(bessel_k_asymptotic(t, x), |e| num(e.value)),
                num(j.value.re),
                num(j.value.im),
                cell(bessel_ji_imag_integral_scaled(BesselKind::J, t, x), |e| {
                    num(e.value.re)
                }),
                cell(bessel_ji_imag_integral_scaled(BesselKind::J, t, x), |e| {
                    num(e.value.im)
                }),
            ]);
        }
    }
    r.emit(a.out.as_deref())
}

fn trace_check(a: TraceArgs) -> Result<(), CliError> {
    let ds = load(&a.dataset)?;
    let params = TraceParams {
        t: a.t_big,
        m_width: a.m_width,
        m: a.m,
        n: a.n,
        c_max: a.c_max,
        t_cut: a.t_cut.unwrap_or(a.t_big + WINDOW_REACH * a.m_width),
    };
    let rep = trace_report(&ds, &params)?;
    let mut r = Report::new("trace-check", &a);
    r.row(&[
        "T",
        "M",
        "m",
        "n",
        "c_max",
        "t_cut",
        "spectral",
        "eisenstein",
        "delta_term",
        "kloosterman_j",
        "kloosterman_k",
        "tail_bound",
        "spectral_truncation_bound",
        "residual",
        "budget",
        "within_budget",
    ]);
    r.row(&[
        num(params.t),
        num(params.m_width),
        params.m.to_string(),
        params.n.to_string(),
        params.c_max.to_string(),
        num(params.t_cut),
        num(rep.spectral),
        num(rep.eisenstein),
        num(rep.delta_term),
        num(rep.kloosterman_j),
        num(rep.kloosterman_k),
        num(rep.tail_bound),
        num(rep.spectral_truncation_bound),
        num(rep.residual),
        num(rep.budget()),
        rep.within_budget().to_string(),
    ]);
    r.emit(a.out.as_deref())
}

fn orthogonality(a: OrthogonalityArgs) -> Result<(), CliError> {
    let ds = load(&a.dataset)?;
    let mut r = Report::new("orthogonality", &a);
    r.row(&["m", "n", "empirical", "predicted", "discrepancy"]);
    let mut annotation = None;
    for m in 1..=a.max_mn {
        for n in 1..=a.max_mn {
            let rec = orthogonality_estimate(&ds, a.t_big, a.m_width, m, n)?;
            r.row(&[
                m.to_string(),
                n.to_string(),
                num(rec.empirical),
                num(rec.predicted),
                num(rec.discrepancy),
            ]);
            annotation.get_or_insert(rec.annotation);
        }
    }
    if let Some(note) = annotation {
        r.comment(&note);
    }
    r.emit(a.out.as_deref())
}

fn moments(a: MomentsArgs) -> Result<(), CliError> {
    let ds = load(&a.dataset)?;
    let params = MomentParams {
        t_big: a.t_big,
        m_width: a.m_width,
        t: a.t,
        x: a.x.unwrap_or_else(|| default_x(a.t_big, DEFAULT_DELTA)),
        proxy: match a.proxy {
            ProxyArg::SApprox => Proxy::SApprox,
            ProxyArg::MPoly => Proxy::MPoly,
        },
    };
    let reports = weighted_moments(&ds, &params, &a.orders)?;
    let mut r = Report::new("moments", &a);
    r.comment(&format!("x = {}, proxy = {}", num(params.x), params.proxy));
    match empirical_measure(&ds, &params) {
        Ok(measure) => {
            r.comment(&format!(
                "gaussian_distance = {}",
                num(measure.gaussian_distance)
            ));
            if let Some(path) = &a.samples_out {
                let mut s = Report::new("moments samples", &a);
                s.row(&["s_normalised", "weight"]);
                for &(v, w) in &measure.samples {
                    s.row(&[num(v), num(w)]);
                }
                s.emit(Some(path))?;
            }
        }
        Err(e) => r.comment(&format!("gaussian_distance unavailable: {e}")),
    }
    r.row(&["n", "empirical", "predicted_main", "error_annotation"]);
    for rep in &reports {
        r.row(&[
            rep.n.to_string(),
            num(rep.empirical),
            num(rep.predicted_main),
            rep.error_annotation.clone(),
        ]);
    }
    r.emit(a.out.as_deref())
}

fn zeta_moments(a: ZetaArgs) -> Result<(), CliError> {
    let rep = selberg_moment(a.t_big, a.n, a.grid_step)?;
    let mut r = Report::new("zeta-moments", &a);
    if let Some(w) = &rep.warning {
        r.comment(&format!("warning: {w}"));
    }
    r.row(&["T", "n", "empirical", "predicted", "ratio"]);
    r.row(&[
        num(rep.t_big),
        rep.n.to_string(),
        num(rep.empirical),
        num(rep.predicted),
        num(rep.ratio),
    ]);
    r.emit(a.out.as_deref())
}

fn ingest(a: IngestArgs) -> Result<(), CliError> {
    let ds = load(&a.dataset)?;
    let reports: Vec<_> = ds.forms().iter().map(validate).collect();
    if let Some(path) = &a.report {
        let mut r = Report::new("ingest", &a);
        r.row(&["tj", "coeff_limit", "nu1sq_missing", "violations"]);
        for v in &reports {
            r.row(&[
                num(v.tj),
                v.coeff_limit.to_string(),
                v.nu1sq_missing.to_string(),
                v.violations.join("; "),
            ]);
        }
        r.emit(Some(path))?;
    }
    write_output(&serialize(&ds), a.out.as_deref())?;
    let bad: Vec<String> = reports
        .iter()
        .filter(|v| !v.is_clean())
        .map(|v| format!("t_j = {}: {}", v.tj, v.violations.join("; ")))
        .collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(CliError::Validation(format!(
            "{} form(s) failed validation\n{}",
            bad.len(),
            bad.join("\n")
        )))
    }
}

fn tally(a: TallyArgs) -> Result<(), CliError> {
    let t = general_term_tally(&a.primes, a.n)?;
    let mut r = Report::new("tally", &a);
    r.row(&[
        "n",
        "primes",
        "case_i",
        "case_ii",
        "case_iii",
        "case_iv",
        "total",
        "case_iv_coefficient",
        "case_iv_closed_form",
        "case_i_diagonal",
    ]);
    let count = |c: Case| t.counts.get(&c).copied().unwrap_or(0).to_string();
    let primes: Vec<String> = t.primes.iter().map(u64::to_string).collect();
    r.row(&[
        t.n.to_string(),
        primes.join(";"),
        count(Case::I),
        count(Case::II),
        count(Case::III),
        count(Case::IV),
        t.total().to_string(),
        num(t.case_iv_coefficient),
        num(case_iv_closed_form(&a.primes, a.n)),
        num(t.case_i_diagonal),
    ]);
    r.emit(a.out.as_deref())
}

/// Angle with the Sato–Tate density (2/π) sin²θ on [0, π], by rejection.
fn sato_tate_angle(rng: &mut ChaCha8Rng) -> f64 {
    loop {
        let theta = rng.gen_range(0.0..std::f64::consts::PI);
        if rng.gen::<f64>() < theta.sin().powi(2) {
            return theta;
        }
    }
}

fn synth(a: SynthArgs) -> Result<(), CliError> {
    if !(a.t_lo > 0.0 && a.t_hi > a.t_lo) {
        return Err(CliError::Validation("synth needs 0 < t-lo < t-hi".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let primes = PrimeTable::new(a.primes_up_to.max(2));
    let mut forms = Vec::with_capacity(a.count);
    for _ in 0..a.count {
        let tj = rng.gen_range(a.t_lo..a.t_hi);
        let nu1sq = rng.gen_range(0.5..2.0);
        let values: BTreeMap<u64, f64> = primes
            .primes()
            .iter()
            .map(|&p| (p, 2.0 * sato_tate_angle(&mut rng).cos()))
            .collect();
        forms.push(MaassForm::new(tj, Some(nu1sq), values)?);
    }
    let provenance = format!(
        "synthetic seed={} count={} t in [{}, {}); Sato-Tate lambda(p); not eigenforms of any surface",
        a.seed, a.count, a.t_lo, a.t_hi
    );
    let ds = Dataset::new(forms, None, Some(provenance))?;
    write_output(&serialize(&ds), a.out.as_deref())
}
