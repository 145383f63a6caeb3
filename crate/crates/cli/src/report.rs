//! Output records and the three output formats.

use std::fmt::Write as _;

use clap::ValueEnum;
use num_bigint::BigInt;
use p2betti_core::asymptotics::TruncatedCheckReport;
use p2betti_core::{GvTable, HalfLaurent, OmegaHat, OmegaPoly};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// One outcome of one check at one degree.
#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub check: String,
    pub d: u32,
    /// Exponents below this bound were compared, for series checks.
    pub order: Option<i32>,
    pub pass: bool,
    pub exponent: Option<i32>,
    pub got: Option<String>,
    pub want: Option<String>,
    pub detail: Option<String>,
}

impl CheckRecord {
    pub fn plain(check: &str, d: u32, pass: bool, detail: impl Into<Option<String>>) -> Self {
        CheckRecord {
            check: check.to_string(),
            d,
            order: None,
            pass,
            exponent: None,
            got: None,
            want: None,
            detail: detail.into(),
        }
    }

    pub fn series(check: &str, r: &TruncatedCheckReport) -> Self {
        let m = r.mismatch.as_ref();
        CheckRecord {
            check: check.to_string(),
            d: r.d,
            order: Some(r.order),
            pass: r.pass,
            exponent: m.map(|m| m.exponent),
            got: m.map(|m| m.got.clone()),
            want: m.map(|m| m.want.clone()),
            detail: None,
        }
    }

    /// First differing coefficient of two coefficient lists.
    pub fn coeffs(check: &str, d: u32, got: &[BigInt], want: &[BigInt]) -> Self {
        let n = got.len().max(want.len());
        let at = |v: &[BigInt], i: usize| v.get(i).cloned().unwrap_or_default();
        let first = (0..n).find(|&i| at(got, i) != at(want, i));
        CheckRecord {
            check: check.to_string(),
            d,
            order: Some(n as i32),
            pass: first.is_none(),
            exponent: first.map(|i| i as i32),
            got: first.map(|i| at(got, i).to_string()),
            want: first.map(|i| at(want, i).to_string()),
            detail: None,
        }
    }
}

/// `y`-exponent given in half units, as `k` or `k/2`.
fn half_exp(h: i64) -> String {
    if h % 2 == 0 {
        (h / 2).to_string()
    } else {
        format!("{h}/2")
    }
}

fn omega_terms(p: &HalfLaurent) -> Vec<(i64, String)> {
    p.real_terms()
        .expect("Omega_d is real")
        .into_iter()
        .map(|(h, c)| (h, c.to_string()))
        .collect()
}

#[derive(Serialize)]
struct OmegaJson {
    /// `[exponent, coefficient]` pairs; exponents of `y` may be half-integers.
    terms: Vec<(String, String)>,
}

#[derive(Serialize)]
struct RowJson {
    d: u32,
    omega_hat: Vec<String>,
    omega: OmegaJson,
}

#[derive(Serialize)]
struct ComputeJson<'a> {
    command: &'static str,
    method: &'a str,
    rows: Vec<RowJson>,
    checks: &'a [CheckRecord],
    pass: bool,
}

#[derive(Serialize)]
struct SeriesCsv {
    d: u32,
    series: &'static str,
    y_exponent: String,
    coeff: String,
}

fn csv_string<T: Serialize>(rows: impl IntoIterator<Item = T>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("in-memory csv write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}

fn json_string<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

pub fn render_compute(
    format: Format,
    method: &str,
    rows: &[(OmegaPoly, OmegaHat)],
    checks: &[CheckRecord],
) -> String {
    match format {
        Format::Json => json_string(&ComputeJson {
            command: "compute",
            method,
            rows: rows
                .iter()
                .map(|(o, h)| RowJson {
                    d: h.d,
                    omega_hat: h.coeffs.iter().map(|c| c.to_string()).collect(),
                    omega: OmegaJson {
                        terms: omega_terms(&o.poly).into_iter().map(|(e, c)| (half_exp(e), c)).collect(),
                    },
                })
                .collect(),
            checks,
            pass: checks.iter().all(|c| c.pass),
        }),
        Format::Csv => {
            let mut out = Vec::new();
            for (o, h) in rows {
                for (j, c) in h.coeffs.iter().enumerate() {
                    out.push(SeriesCsv {
                        d: h.d,
                        series: "omega_hat",
                        y_exponent: j.to_string(),
                        coeff: c.to_string(),
                    });
                }
                for (e, c) in omega_terms(&o.poly) {
                    out.push(SeriesCsv {
                        d: o.d,
                        series: "omega",
                        y_exponent: half_exp(e),
                        coeff: c,
                    });
                }
            }
            let mut s = csv_string(out);
            if !checks.is_empty() {
                s.push('\n');
                s.push_str(&csv_string(checks));
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for (_, h) in rows {
                let cs: Vec<String> = h.coeffs.iter().map(|c| c.to_string()).collect();
                let _ = writeln!(s, "d={}\t{}", h.d, cs.join(" "));
            }
            s.push_str(&render_checks_text(checks));
            s
        }
    }
}

#[derive(Serialize)]
struct GvEntryJson {
    d: u32,
    g: u32,
    n: String,
}

#[derive(Serialize)]
struct GvJson {
    surface: &'static str,
    provenance: String,
    entries: Vec<GvEntryJson>,
}

pub fn render_gv(format: Format, gv: &GvTable, provenance: &str) -> String {
    let entries: Vec<GvEntryJson> = gv
        .entries()
        .map(|(d, g, n)| GvEntryJson { d, g, n: n.to_string() })
        .collect();
    match format {
        Format::Json => json_string(&GvJson {
            surface: "P2",
            provenance: provenance.to_string(),
            entries,
        }),
        Format::Csv => csv_string(entries),
        Format::Text => {
            let mut s = String::new();
            for e in entries {
                let _ = writeln!(s, "n_{{{},{}}} = {}", e.g, e.d, e.n);
            }
            s
        }
    }
}

#[derive(Serialize)]
struct Summary {
    total: usize,
    failed: usize,
}

#[derive(Serialize)]
struct VerifyJson<'a> {
    command: &'static str,
    checks: &'a [CheckRecord],
    summary: Summary,
}

fn render_checks_text(checks: &[CheckRecord]) -> String {
    let mut s = String::new();
    for c in checks {
        let _ = write!(s, "{} {} d={}", if c.pass { "PASS" } else { "FAIL" }, c.check, c.d);
        if let Some(o) = c.order {
            let _ = write!(s, " below {o}");
        }
        if let (Some(e), Some(g), Some(w)) = (c.exponent, &c.got, &c.want) {
            let _ = write!(s, ": first mismatch at exponent {e}, got {g}, want {w}");
        }
        if let Some(d) = &c.detail {
            let _ = write!(s, " ({d})");
        }
        s.push('\n');
    }
    s
}

pub fn render_verify(format: Format, checks: &[CheckRecord]) -> String {
    let failed = checks.iter().filter(|c| !c.pass).count();
    match format {
        Format::Json => json_string(&VerifyJson {
            command: "verify",
            checks,
            summary: Summary {
                total: checks.len(),
                failed,
            },
        }),
        Format::Csv => csv_string(checks),
        Format::Text => {
            let mut s = render_checks_text(checks);
            let _ = writeln!(s, "{} checks, {} failed", checks.len(), failed);
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_exponents() {
        assert_eq!(half_exp(-4), "-2");
        assert_eq!(half_exp(-3), "-3/2");
        assert_eq!(half_exp(5), "5/2");
    }

    #[test]
    fn coefficient_mismatch_located() {
        let a: Vec<BigInt> = [1, 2, 3].iter().map(|&x| BigInt::from(x)).collect();
        let b: Vec<BigInt> = [1, 2, 4].iter().map(|&x| BigInt::from(x)).collect();
        let r = CheckRecord::coeffs("golden", 3, &a, &b);
        assert!(!r.pass);
        assert_eq!(r.exponent, Some(2));
        assert!(CheckRecord::coeffs("golden", 3, &a, &a).pass);
    }
}
