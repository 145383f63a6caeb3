//! JSON input formats and the bundled tables.
//!
//! * invariants: `{"surface": "P2", "provenance": "...", "entries": [{"d": 1, "g": 0, "n": "3"}]}`
//! * normalized polynomials: `{"rows": [{"d": 3, "coeffs": ["1", "1", "1"]}]}`, a bare
//!   row, or a bare array of rows; coefficients ascend from `y^0`
//! * refined polynomials: same shapes with `{"d": 1, "terms": [{"q": 0, "t": 2, "c": "1"}]}`
//!
//! Integers may be JSON numbers or decimal strings.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::Deserialize;
use thiserror::Error;

use crate::solver::{genus, GvTable, OmegaHat, SolverError};

#[derive(Debug, Error)]
pub enum DataError {
    #[error("{what}: malformed JSON at line {line}, column {column}: {msg}")]
    Json {
        what: &'static str,
        line: usize,
        column: usize,
        msg: String,
    },
    #[error("{what}: bad integer {value:?}")]
    BadInteger { what: &'static str, value: String },
    #[error("invariants: {0}")]
    Gv(#[from] SolverError),
    #[error("invariants: unsupported surface {0:?}")]
    Surface(String),
    #[error("{what}: degree {d}: {detail}")]
    BadRow {
        what: &'static str,
        d: u32,
        detail: String,
    },
}

#[derive(Deserialize)]
#[serde(untagged)]
enum IntLit {
    Num(i64),
    Str(String),
}

impl IntLit {
    fn parse(&self, what: &'static str) -> Result<BigInt, DataError> {
        match self {
            IntLit::Num(n) => Ok(BigInt::from(*n)),
            IntLit::Str(s) => BigInt::from_str(s.trim()).map_err(|_| DataError::BadInteger {
                what,
                value: s.clone(),
            }),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GvFile {
    surface: String,
    #[serde(default)]
    #[allow(dead_code)]
    provenance: Option<String>,
    entries: Vec<GvEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GvEntry {
    d: u32,
    g: u32,
    n: IntLit,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Rows<T> {
    Wrapped { rows: Vec<T> },
    Many(Vec<T>),
    One(T),
}

impl<T> Rows<T> {
    fn into_vec(self) -> Vec<T> {
        match self {
            Rows::Wrapped { rows } | Rows::Many(rows) => rows,
            Rows::One(r) => vec![r],
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HatRow {
    d: u32,
    coeffs: Vec<IntLit>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RefinedRowRaw {
    d: u32,
    terms: Vec<RefinedTermRaw>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RefinedTermRaw {
    q: i32,
    t: i32,
    c: IntLit,
}

fn from_json<'a, T: Deserialize<'a>>(what: &'static str, text: &'a str) -> Result<T, DataError> {
    serde_json::from_str(text).map_err(|e| DataError::Json {
        what,
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    })
}

/// Untagged enums lose position information, so parse generically first.
fn parse_rows<T: for<'de> Deserialize<'de>>(what: &'static str, text: &str) -> Result<Vec<T>, DataError> {
    let value: serde_json::Value = from_json(what, text)?;
    serde_json::from_value::<Rows<T>>(value)
        .map(Rows::into_vec)
        .map_err(|e| DataError::Json {
            what,
            line: 0,
            column: 0,
            msg: format!("does not match any accepted row layout: {e}"),
        })
}

pub fn parse_gv(text: &str) -> Result<GvTable, DataError> {
    let file: GvFile = from_json("invariants", text)?;
    if !file.surface.eq_ignore_ascii_case("P2") {
        return Err(DataError::Surface(file.surface));
    }
    let mut gv = GvTable::new();
    for e in file.entries {
        if e.d == 0 {
            return Err(DataError::BadRow {
                what: "invariants",
                d: 0,
                detail: "degree must be positive".into(),
            });
        }
        gv.insert(e.d, e.g, e.n.parse("invariants")?)?;
    }
    Ok(gv)
}

pub fn parse_omega_hat(text: &str) -> Result<Vec<OmegaHat>, DataError> {
    const WHAT: &str = "normalized polynomials";
    let mut out = Vec::new();
    for row in parse_rows::<HatRow>(WHAT, text)? {
        let coeffs = row
            .coeffs
            .iter()
            .map(|c| c.parse(WHAT))
            .collect::<Result<Vec<_>, _>>()?;
        let want = 2 * genus(row.d) as usize + 1;
        if row.d == 0 || coeffs.len() != want {
            return Err(DataError::BadRow {
                what: WHAT,
                d: row.d,
                detail: format!("expected {want} coefficients, found {}", coeffs.len()),
            });
        }
        out.push(OmegaHat { d: row.d, coeffs });
    }
    out.sort_by_key(|h| h.d);
    if out.windows(2).any(|w| w[0].d == w[1].d) {
        let d = out.windows(2).find(|w| w[0].d == w[1].d).unwrap()[0].d;
        return Err(DataError::BadRow {
            what: WHAT,
            d,
            detail: "duplicate degree".into(),
        });
    }
    Ok(out)
}

/// Refined polynomials `P_d(q, t)` as lists of `(a, b, c)` for `c q^a t^b`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RefinedTable {
    pub rows: BTreeMap<u32, Vec<(i32, i32, BigInt)>>,
}

pub fn parse_refined(text: &str) -> Result<RefinedTable, DataError> {
    const WHAT: &str = "refined polynomials";
    let mut table = RefinedTable::default();
    for row in parse_rows::<RefinedRowRaw>(WHAT, text)? {
        let mut terms = Vec::with_capacity(row.terms.len());
        for t in &row.terms {
            if t.q < 0 || t.t < 0 {
                return Err(DataError::BadRow {
                    what: WHAT,
                    d: row.d,
                    detail: "negative exponent".into(),
                });
            }
            terms.push((t.q, t.t, t.c.parse(WHAT)?));
        }
        if table.rows.insert(row.d, terms).is_some() {
            return Err(DataError::BadRow {
                what: WHAT,
                d: row.d,
                detail: "duplicate degree".into(),
            });
        }
    }
    Ok(table)
}

const GV_JSON: &str = include_str!("../data/gv_p2_d6.json");
const HAT_JSON: &str = include_str!("../data/omega_hat_table.json");
const REFINED_JSON: &str = include_str!("../data/refined_p2_d2.json");

/// Invariants of local P2 for degrees 1 through 6.
pub fn bundled_gv() -> GvTable {
    parse_gv(GV_JSON).expect("bundled invariants parse")
}

/// Normalized polynomials for degrees 1 through 10.
pub fn bundled_omega_hat() -> Vec<OmegaHat> {
    parse_omega_hat(HAT_JSON).expect("bundled table parses")
}

/// Refined polynomials for degrees 1 and 2.
pub fn bundled_refined() -> RefinedTable {
    parse_refined(REFINED_JSON).expect("bundled refined table parses")
}
