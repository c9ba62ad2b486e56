//! Even Hecke–Maass form datasets in the line-oriented `maass-v1` format.
//!
//! ```text
//! %maass-v1
//! provenance LMFDB export, level 1
//! window 0 30
//! form
//! tj 13.779751351891
//! parity even
//! nu1sq 0.5631
//! ap 2 1.549304
//! ap 3 0.246899
//! end
//! ```
//!
//! The numbers above are illustrative. `#` starts a comment line; blank lines are ignored. Harmonic weights
//! (`nu1sq`) are carried verbatim; nothing here computes them.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::BufRead;

use crate::arith::is_prime;
use crate::hecke::{HeckeSystem, KimSarnakViolation, HECKE_MAX_N};
use crate::{Error, Result};

pub const FORMAT_HEADER: &str = "%maass-v1";

/// Spectral parameters closer than this are treated as the same form.
pub const DUPLICATE_TJ_TOLERANCE: f64 = 1e-9;

/// One even Hecke–Maass form.
#[derive(Debug, Clone, PartialEq)]
pub struct MaassForm {
    pub tj: f64,
    /// |ν_j(1)|², when the source supplies it.
    pub nu1sq: Option<f64>,
    pub hecke: HeckeSystem,
}

impl MaassForm {
    /// Builds the form, extending λ(n) as far as the supplied primes allow.
    pub fn new(tj: f64, nu1sq: Option<f64>, prime_values: BTreeMap<u64, f64>) -> Result<Self> {
        if !tj.is_finite() {
            return Err(Error::domain("spectral parameter must be finite"));
        }
        if nu1sq.is_some_and(|w| !w.is_finite()) {
            return Err(Error::domain("nu1sq must be finite"));
        }
        let hecke = HeckeSystem::with_available(prime_values, HECKE_MAX_N)?;
        Ok(Self { tj, nu1sq, hecke })
    }

    /// Largest n with λ(n) available.
    pub fn coeff_limit(&self) -> u64 {
        self.hecke.n_max()
    }

    pub fn nu1sq_or_err(&self) -> Result<f64> {
        self.nu1sq
            .ok_or_else(|| Error::IncompleteData(format!("form at t_j = {} has no nu1sq", self.tj)))
    }
}

/// Forms sorted by spectral parameter plus the range claimed to be exhaustive.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Dataset {
    forms: Vec<MaassForm>,
    window: Option<(f64, f64)>,
    provenance: Option<String>,
}

impl Dataset {
    /// Sorts the forms; rejects near-duplicate spectral parameters and bad windows.
    pub fn new(
        mut forms: Vec<MaassForm>,
        window: Option<(f64, f64)>,
        provenance: Option<String>,
    ) -> Result<Self> {
        if let Some((lo, hi)) = window {
            check_window(lo, hi).map_err(Error::Domain)?;
        }
        forms.sort_by(|a, b| a.tj.total_cmp(&b.tj));
        if let Some(w) = forms
            .windows(2)
            .find(|w| w[1].tj - w[0].tj <= DUPLICATE_TJ_TOLERANCE)
        {
            return Err(Error::Duplicate {
                line: 0,
                tj: w[1].tj,
            });
        }
        Ok(Self {
            forms,
            window,
            provenance,
        })
    }

    pub fn forms(&self) -> &[MaassForm] {
        &self.forms
    }

    pub fn window(&self) -> Option<(f64, f64)> {
        self.window
    }

    pub fn provenance(&self) -> Option<&str> {
        self.provenance.as_deref()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    /// Every dataset in this format holds even forms only.
    pub fn even_only(&self) -> bool {
        true
    }

    /// Whether the completeness window contains `[lo, hi]`.
    pub fn covers(&self, lo: f64, hi: f64) -> bool {
        self.window.is_some_and(|(a, b)| a <= lo && hi <= b)
    }

    pub fn require_coverage(&self, lo: f64, hi: f64) -> Result<()> {
        if self.covers(lo, hi) {
            return Ok(());
        }
        Err(Error::IncompleteData(match self.window {
            Some((a, b)) => format!("completeness window [{a}, {b}] does not cover [{lo}, {hi}]"),
            None => format!("dataset declares no completeness window; [{lo}, {hi}] required"),
        }))
    }

    /// Forms with `lo ≤ t_j ≤ hi`, ascending.
    pub fn forms_in(&self, lo: f64, hi: f64) -> &[MaassForm] {
        let start = self.forms.partition_point(|f| f.tj < lo);
        let end = self.forms.partition_point(|f| f.tj <= hi);
        &self.forms[start..end.max(start)]
    }

    /// Forms inside the completeness window (all forms if none is declared).
    pub fn forms_in_window(&self) -> &[MaassForm] {
        match self.window {
            Some((lo, hi)) => self.forms_in(lo, hi),
            None => &self.forms,
        }
    }

    /// Union of two datasets; windows must be adjacent or overlapping.
    pub fn merged(&self, other: &Dataset) -> Result<Dataset> {
        let window = match (self.window, other.window) {
            (Some((a, b)), Some((c, d))) => {
                if b < c || d < a {
                    return Err(Error::domain("completeness windows are disjoint"));
                }
                Some((a.min(c), b.max(d)))
            }
            _ => None,
        };
        let mut forms = self.forms.clone();
        forms.extend(other.forms.iter().cloned());
        Dataset::new(forms, window, self.provenance.clone())
    }
}

fn check_window(lo: f64, hi: f64) -> std::result::Result<(), String> {
    if !(lo.is_finite() && hi.is_finite() && 0.0 <= lo && lo <= hi) {
        return Err(format!("window [{lo}, {hi}] must satisfy 0 ≤ lo ≤ hi"));
    }
    Ok(())
}

#[derive(Default)]
struct PendingForm {
    start_line: usize,
    tj: Option<(f64, usize)>,
    parity: bool,
    nu1sq: Option<f64>,
    ap: BTreeMap<u64, f64>,
}

fn parse_decimal(token: Option<&str>, what: &str, line: usize) -> Result<f64> {
    let token = token.ok_or_else(|| Error::Parse {
        line,
        message: format!("missing {what}"),
    })?;
    match token.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(Error::Parse {
            line,
            message: format!("{what}: `{token}` is not a finite decimal"),
        }),
    }
}

fn expect_end(tokens: &mut std::str::SplitWhitespace<'_>, line: usize) -> Result<()> {
    match tokens.next() {
        None => Ok(()),
        Some(extra) => Err(Error::Parse {
            line,
            message: format!("unexpected trailing token `{extra}`"),
        }),
    }
}

/// Parses a `maass-v1` stream.
pub fn parse_dataset(reader: impl BufRead) -> Result<Dataset> {
    let mut window = None;
    let mut provenance = None;
    let mut forms: Vec<(MaassForm, usize)> = Vec::new();
    let mut pending: Option<PendingForm> = None;
    let mut saw_header = false;
    let mut last_line = 0;

    for (idx, raw) in reader.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let raw = raw.map_err(|e| Error::Parse {
            line,
            message: e.to_string(),
        })?;
        let text = raw.trim();
        if !saw_header {
            if text != FORMAT_HEADER {
                return Err(Error::Parse {
                    line,
                    message: format!("expected `{FORMAT_HEADER}` header"),
                });
            }
            saw_header = true;
            continue;
        }
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let mut tokens = text.split_whitespace();
        let key = tokens.next().expect("non-empty line");
        match (key, pending.as_mut()) {
            ("window", None) => {
                if window.is_some() {
                    return Err(Error::Parse {
                        line,
                        message: "window given twice".into(),
                    });
                }
                let lo = parse_decimal(tokens.next(), "window lower end", line)?;
                let hi = parse_decimal(tokens.next(), "window upper end", line)?;
                expect_end(&mut tokens, line)?;
                check_window(lo, hi).map_err(|message| Error::Parse { line, message })?;
                window = Some((lo, hi));
            }
            ("provenance", None) => {
                if provenance.is_some() {
                    return Err(Error::Parse {
                        line,
                        message: "provenance given twice".into(),
                    });
                }
                provenance = Some(text["provenance".len()..].trim().to_string());
            }
            ("form", None) => {
                expect_end(&mut tokens, line)?;
                pending = Some(PendingForm {
                    start_line: line,
                    ..Default::default()
                });
            }
            ("tj", Some(f)) => {
                if f.tj.is_some() {
                    return Err(Error::Parse {
                        line,
                        message: "tj given twice".into(),
                    });
                }
                let tj = parse_decimal(tokens.next(), "tj", line)?;
                expect_end(&mut tokens, line)?;
                f.tj = Some((tj, line));
            }
            ("parity", Some(f)) => {
                match tokens.next() {
                    Some("even") => {}
                    Some("odd") => {
                        return Err(Error::Parse {
                            line,
                            message: "odd forms are not supported; only even parity is accepted"
                                .into(),
                        })
                    }
                    Some(other) => {
                        return Err(Error::Parse {
                            line,
                            message: format!("unknown parity `{other}`"),
                        })
                    }
                    None => {
                        return Err(Error::Parse {
                            line,
                            message: "missing parity".into(),
                        })
                    }
                }
                expect_end(&mut tokens, line)?;
                f.parity = true;
            }
            ("nu1sq", Some(f)) => {
                if f.nu1sq.is_some() {
                    return Err(Error::Parse {
                        line,
                        message: "nu1sq given twice".into(),
                    });
                }
                let w = parse_decimal(tokens.next(), "nu1sq", line)?;
                expect_end(&mut tokens, line)?;
                f.nu1sq = Some(w);
            }
            ("ap", Some(f)) => {
                let p_tok = tokens.next().ok_or_else(|| Error::Parse {
                    line,
                    message: "missing prime".into(),
                })?;
                let p: u64 = p_tok.parse().map_err(|_| Error::Parse {
                    line,
                    message: format!("`{p_tok}` is not a positive integer"),
                })?;
                if !is_prime(p) {
                    return Err(Error::Parse {
                        line,
                        message: format!("{p} is not prime"),
                    });
                }
                let v = parse_decimal(tokens.next(), "eigenvalue", line)?;
                expect_end(&mut tokens, line)?;
                if f.ap.insert(p, v).is_some() {
                    return Err(Error::Parse {
                        line,
                        message: format!("ap {p} given twice"),
                    });
                }
            }
            ("end", Some(_)) => {
                expect_end(&mut tokens, line)?;
                let f = pending.take().expect("inside a form");
                let (tj, tj_line) = f.tj.ok_or_else(|| Error::Parse {
                    line: f.start_line,
                    message: "form without tj".into(),
                })?;
                if !f.parity {
                    return Err(Error::Parse {
                        line: f.start_line,
                        message: "form without parity".into(),
                    });
                }
                if f.ap.is_empty() {
                    return Err(Error::Parse {
                        line: f.start_line,
                        message: "form without ap lines".into(),
                    });
                }
                let form = MaassForm::new(tj, f.nu1sq, f.ap).map_err(|e| Error::Parse {
                    line,
                    message: e.to_string(),
                })?;
                forms.push((form, tj_line));
            }
            (key @ ("window" | "provenance" | "form"), Some(_)) => {
                return Err(Error::Parse {
                    line,
                    message: format!("`{key}` inside a form block"),
                });
            }
            (key @ ("tj" | "parity" | "nu1sq" | "ap" | "end"), None) => {
                return Err(Error::Parse {
                    line,
                    message: format!("`{key}` outside a form block"),
                });
            }
            (other, _) => {
                return Err(Error::Parse {
                    line,
                    message: format!("unknown key `{other}`"),
                })
            }
        }
    }
    if !saw_header {
        return Err(Error::Parse {
            line: 1,
            message: format!("expected `{FORMAT_HEADER}` header"),
        });
    }
    if let Some(f) = pending {
        return Err(Error::Parse {
            line: last_line.max(f.start_line),
            message: "unterminated form block".into(),
        });
    }

    // duplicates are reported at the later record's tj line
    let mut order: Vec<usize> = (0..forms.len()).collect();
    order.sort_by(|&a, &b| {
        forms[a]
            .0
            .tj
            .total_cmp(&forms[b].0.tj)
            .then(forms[a].1.cmp(&forms[b].1))
    });
    for w in order.windows(2) {
        let (a, b) = (&forms[w[0]], &forms[w[1]]);
        if b.0.tj - a.0.tj <= DUPLICATE_TJ_TOLERANCE {
            let later = if a.1 > b.1 { a } else { b };
            return Err(Error::Duplicate {
                line: later.1,
                tj: later.0.tj,
            });
        }
    }
    Dataset::new(
        forms.into_iter().map(|(f, _)| f).collect(),
        window,
        provenance,
    )
}

pub fn parse_str(text: &str) -> Result<Dataset> {
    parse_dataset(text.as_bytes())
}

/// Canonical text: header, provenance, window, then forms by ascending t_j
/// with primes ascending. Decimals use the shortest round-trip scientific form.
pub fn serialize(dataset: &Dataset) -> String {
    let mut out = String::new();
    out.push_str(FORMAT_HEADER);
    out.push('\n');
    if let Some(p) = &dataset.provenance {
        let _ = writeln!(out, "provenance {p}");
    }
    if let Some((lo, hi)) = dataset.window {
        let _ = writeln!(out, "window {lo:e} {hi:e}");
    }
    for f in &dataset.forms {
        out.push_str("form\n");
        let _ = writeln!(out, "tj {:e}", f.tj);
        out.push_str("parity even\n");
        if let Some(w) = f.nu1sq {
            let _ = writeln!(out, "nu1sq {w:e}");
        }
        for (p, v) in f.hecke.prime_values() {
            let _ = writeln!(out, "ap {p} {v:e}");
        }
        out.push_str("end\n");
    }
    out
}

/// Findings for one form; never modifies it.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub tj: f64,
    pub coeff_limit: u64,
    pub kim_sarnak: Vec<KimSarnakViolation>,
    pub nu1sq_missing: bool,
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate(form: &MaassForm) -> ValidationReport {
    let mut violations = Vec::new();
    if !(form.tj > 0.0) {
        violations.push(format!(
            "spectral parameter t_j = {} is not positive",
            form.tj
        ));
    }
    match form.nu1sq {
        Some(w) if !(w > 0.0) => violations.push(format!("nu1sq = {w} is not positive")),
        _ => {}
    }
    let coeff_limit = form.coeff_limit();
    let kim_sarnak = form
        .hecke
        .kim_sarnak_certify(coeff_limit)
        .expect("limit is within the table");
    for v in &kim_sarnak {
        violations.push(format!(
            "Kim–Sarnak bound exceeded at n = {}: |{}| > {}",
            v.n, v.value, v.bound
        ));
    }
    ValidationReport {
        tj: form.tj,
        coeff_limit,
        kim_sarnak,
        nu1sq_missing: form.nu1sq.is_none(),
        violations,
    }
}

/// Harmonic-weighted eigenvalue count against T²/π².
#[derive(Debug, Clone, PartialEq)]
pub struct WeylReport {
    pub t: f64,
    pub weighted_count: f64,
    pub expected: f64,
    pub ratio: f64,
    /// Heuristic ratio for an even-only basis (about half of the full basis).
    pub even_only_expected_ratio: Option<f64>,
    pub warning: Option<String>,
}

pub fn weyl_check(dataset: &Dataset, t: f64) -> Result<WeylReport> {
    if !(t > 0.0) {
        return Err(Error::domain("weyl_check needs T > 0"));
    }
    let expected = t * t / (std::f64::consts::PI * std::f64::consts::PI);
    let even_only_expected_ratio = dataset.even_only().then_some(0.5);
    if dataset.is_empty() {
        return Ok(WeylReport {
            t,
            weighted_count: 0.0,
            expected,
            ratio: 0.0,
            even_only_expected_ratio,
            warning: Some("empty dataset".into()),
        });
    }
    dataset.require_coverage(0.0, t)?;
    let mut acc = crate::sum::Neumaier::new();
    for f in dataset.forms_in(f64::NEG_INFINITY, t) {
        acc.add(f.nu1sq_or_err()?);
    }
    let weighted_count = acc.value();
    Ok(WeylReport {
        t,
        weighted_count,
        expected,
        ratio: weighted_count / expected,
        even_only_expected_ratio,
        warning: None,
    })
}
