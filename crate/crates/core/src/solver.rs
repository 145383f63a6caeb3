//! From Gopakumar-Vafa invariants to shifted Poincare polynomials and back.
//!
//! With `delta = y^{1/2} - y^{-1/2}`, `F_d = sum_g n_{g,d} (-1)^g delta^{2g}`
//! and the bracket
//!
//! ```text
//! B_d = -(3d (-1)^{d+1} Omega_d / [3d] - F_d) / delta^2
//! ```
//!
//! the graph-sum identity reads `sum_{k | d} B_{d/k}(y^k) / k = RHS(d)`.
//! Solving for the `k = 1` term gives `Omega_d`; solving for `F_d` instead
//! recovers the invariants from known polynomials.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exactalg::{delta_sq, quantum_integer, AlgError, GaussRat, HalfLaurent, RatFun};
use crate::{gfunctional, treesum};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolverError {
    #[error("no Gopakumar-Vafa data for degree {d}")]
    MissingGv { d: u32 },
    #[error("n_{{{g},{d}}} is nonzero but the genus bound is {bound}")]
    GenusTooLarge { d: u32, g: u32, bound: u32 },
    #[error("degree {d}: {what} is not exactly divisible: {source}")]
    NotDivisible {
        d: u32,
        what: &'static str,
        #[source]
        source: AlgError,
    },
    #[error("degree {d}: Omega_d is not a real palindromic polynomial")]
    NotPalindromic { d: u32 },
    #[error("degree {d}: coefficient of y^({half}/2) is {value}, not a nonnegative integer")]
    NegativeCoefficient { d: u32, half: i64, value: String },
    #[error("degree {d}: top exponent is y^({got}/2), expected y^({want}/2)")]
    WrongDegree { d: u32, got: i64, want: i64 },
    #[error("degree {d}: normalized polynomial is malformed: {detail}")]
    BadOmegaHat { d: u32, detail: String },
    #[error("degree {d}, genus {g}: recovered invariant {value} is not an integer")]
    NonIntegerGv { d: u32, g: u32, value: String },
    #[error("degree {d}: recovered F_d is not of the expected form: {detail}")]
    BadCurlyF { d: u32, detail: String },
    #[error("degree {d}: graph sum is not a Laurent polynomial: {detail}")]
    NonPolynomialRhs { d: u32, detail: String },
    #[error("degree {d}: tree and functional routes disagree")]
    RouteMismatch { d: u32 },
    #[error("Omega_{d} is required but was not supplied")]
    MissingOmega { d: u32 },
}

/// `g(d) = (d-1)(d-2)/2`, the arithmetic genus of a plane curve of degree `d`.
pub fn genus(d: u32) -> u32 {
    if d < 2 {
        0
    } else {
        (d - 1) * (d - 2) / 2
    }
}

/// Integer invariants `n_{g,d}`. Absent entries are zero; a degree counts as
/// present once any of its entries has been inserted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GvTable {
    entries: BTreeMap<(u32, u32), BigInt>,
}

impl GvTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, d: u32, g: u32, n: BigInt) -> Result<(), SolverError> {
        if g > genus(d) && !n.is_zero() {
            return Err(SolverError::GenusTooLarge {
                d,
                g,
                bound: genus(d),
            });
        }
        self.entries.insert((d, g), n);
        Ok(())
    }

    pub fn get(&self, d: u32, g: u32) -> BigInt {
        self.entries.get(&(d, g)).cloned().unwrap_or_default()
    }

    pub fn has_degree(&self, d: u32) -> bool {
        self.entries.range((d, 0)..=(d, u32::MAX)).next().is_some()
    }

    pub fn max_degree(&self) -> u32 {
        self.entries.keys().map(|k| k.0).max().unwrap_or(0)
    }

    /// `n_{0,d}, ..., n_{g(d),d}`.
    pub fn row(&self, d: u32) -> Vec<BigInt> {
        (0..=genus(d)).map(|g| self.get(d, g)).collect()
    }

    /// Entries in `(d, g)` order, zeros included only if inserted.
    pub fn entries(&self) -> impl Iterator<Item = (u32, u32, &BigInt)> {
        self.entries.iter().map(|(&(d, g), n)| (d, g, n))
    }

    /// Copy restricted to degrees `<= dmax`.
    pub fn truncated(&self, dmax: u32) -> GvTable {
        GvTable {
            entries: self
                .entries
                .iter()
                .filter(|(k, _)| k.0 <= dmax)
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        }
    }
}

/// Shifted Poincare polynomial `Omega_d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaPoly {
    pub d: u32,
    pub poly: HalfLaurent,
}

/// `y^{g(d)} Omega_d / [3d]`, an integer polynomial of degree `2 g(d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaHat {
    pub d: u32,
    /// Ascending coefficients of `y^0, ..., y^{2 g(d)}`.
    pub coeffs: Vec<BigInt>,
}

impl OmegaHat {
    pub fn as_laurent(&self) -> HalfLaurent {
        HalfLaurent::from_y_coeffs(0, &self.coeffs)
    }

    /// Appendix-style `P_d = Omega^_d (1 + y + ... + y^{3d-1})`.
    pub fn poincare(&self) -> Vec<BigInt> {
        let n = 3 * self.d as usize;
        let mut out = vec![BigInt::zero(); self.coeffs.len() + n - 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            for slot in &mut out[i..i + n] {
                *slot += c;
            }
        }
        out
    }
}

/// Which assembly of the graph sum feeds the solver.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RhsMethod {
    Trees,
    Functional,
    /// Compute both and insist they agree.
    Both,
}

fn sign(d: u32) -> i64 {
    // (-1)^{d^2+1} = (-1)^{d+1}
    if d % 2 == 1 {
        1
    } else {
        -1
    }
}

/// `F_d(y) = sum_g n_{g,d} (-1)^g (y^{1/2} - y^{-1/2})^{2g}`.
pub fn f_curly(d: u32, gv: &GvTable) -> Result<HalfLaurent, SolverError> {
    if !gv.has_degree(d) {
        return Err(SolverError::MissingGv { d });
    }
    let basis = delta_sq().scale_int(-1);
    let mut acc = HalfLaurent::zero();
    let mut pow = HalfLaurent::one();
    for n in gv.row(d) {
        acc = &acc + &pow.scale(&GaussRat::from_bigint(n));
        pow = &pow * &basis;
    }
    Ok(acc)
}

/// `W_d = sum_{k | d} -F_{d/k}(y^k) / (k (y^{k/2} - y^{-k/2})^2)`.
pub fn w_series(d: u32, gv: &GvTable) -> Result<RatFun, SolverError> {
    let mut acc = RatFun::zero();
    for k in divisors(d) {
        let f = f_curly(d / k, gv)?.substitute_power(k as i64);
        let den = delta_sq().substitute_power(k as i64).scale_int(k as i64);
        acc = &acc + &RatFun::new(-f, den).expect("nonzero denominator");
    }
    Ok(acc)
}

pub(crate) fn divisors(d: u32) -> Vec<u32> {
    (1..=d).filter(|k| d % k == 0).collect()
}

/// `W_1, ..., W_n` for the square vertices of the graph sum.
pub(crate) fn w_table(n: u32, gv: &GvTable) -> Result<Vec<RatFun>, SolverError> {
    (1..=n).map(|d| w_series(d, gv)).collect()
}

/// Right-hand side of the graph-sum identity for degree `d`.
pub fn rhs(d: u32, gv: &GvTable, method: RhsMethod) -> Result<HalfLaurent, SolverError> {
    match method {
        RhsMethod::Trees => treesum::rhs_tree_sum(d, gv),
        RhsMethod::Functional => gfunctional::rhs_via_g(d, gv),
        RhsMethod::Both => {
            let a = treesum::rhs_tree_sum(d, gv)?;
            let b = gfunctional::rhs_via_g(d, gv)?;
            if a != b {
                return Err(SolverError::RouteMismatch { d });
            }
            Ok(a)
        }
    }
}

/// `3d (-1)^{d+1} Omega_d / [3d]`.
pub fn normalized_omega(omega: &OmegaPoly) -> Result<HalfLaurent, SolverError> {
    let d = omega.d;
    let q = omega
        .poly
        .exact_div(&quantum_integer(3 * d as i64))
        .map_err(|source| SolverError::NotDivisible {
            d,
            what: "Omega_d by [3d]",
            source,
        })?;
    Ok(q.scale_int(3 * d as i64 * sign(d)))
}

/// The bracket `B_d` built from a known `Omega_d`.
pub fn bracket(omega: &OmegaPoly, gv: &GvTable) -> Result<HalfLaurent, SolverError> {
    let d = omega.d;
    let a = &normalized_omega(omega)? - &f_curly(d, gv)?;
    a.exact_div(&delta_sq())
        .map(|q| -q)
        .map_err(|source| SolverError::NotDivisible {
            d,
            what: "the integrality bracket",
            source,
        })
}

/// True iff `B_d` lies in `Z[y, y^{-1}]`.
pub fn integrality_bracket(omega: &OmegaPoly, gv: &GvTable) -> bool {
    bracket(omega, gv).is_ok_and(|b| b.is_integral_laurent())
}

/// `RHS(d) - sum_{k | d, k > 1} B_{d/k}(y^k) / k`, i.e. the `k = 1` bracket.
fn leading_bracket(
    d: u32,
    gv: &GvTable,
    known: &BTreeMap<u32, OmegaPoly>,
    method: RhsMethod,
) -> Result<HalfLaurent, SolverError> {
    let mut b = rhs(d, gv, method)?;
    for k in divisors(d).into_iter().skip(1) {
        let e = d / k;
        let om = known.get(&e).ok_or(SolverError::MissingOmega { d: e })?;
        let term = bracket(om, gv)?
            .substitute_power(k as i64)
            .scale(&GaussRat::ratio(1, k as i64));
        b = &b - &term;
    }
    Ok(b)
}

/// Solve for `Omega_d` given `Omega_e` for every proper divisor `e` of `d`.
pub fn solve_omega(
    d: u32,
    gv: &GvTable,
    known: &BTreeMap<u32, OmegaPoly>,
    method: RhsMethod,
) -> Result<OmegaPoly, SolverError> {
    let b = leading_bracket(d, gv, known, method)?;
    let inner = &f_curly(d, gv)? - &(&delta_sq() * &b);
    let poly = (&quantum_integer(3 * d as i64) * &inner)
        .scale(&GaussRat::ratio(sign(d), 3 * d as i64));
    let omega = OmegaPoly { d, poly };
    check_omega(&omega)?;
    Ok(omega)
}

/// Run the recursion for `d = 1..=dmax`.
pub fn solve_all(dmax: u32, gv: &GvTable, method: RhsMethod) -> Result<Vec<OmegaPoly>, SolverError> {
    let mut known = BTreeMap::new();
    for d in 1..=dmax {
        let om = solve_omega(d, gv, &known, method)?;
        known.insert(d, om);
    }
    Ok(known.into_values().collect())
}

/// Structural checks every `Omega_d` must pass: real, palindromic,
/// nonnegative integer coefficients, top degree `(d^2+1)/2`, divisible by
/// `[3d]` with a well-formed quotient.
pub fn check_omega(omega: &OmegaPoly) -> Result<(), SolverError> {
    let d = omega.d;
    let p = &omega.poly;
    if !p.is_real() || !p.is_palindromic() {
        return Err(SolverError::NotPalindromic { d });
    }
    for (half, v) in p.terms() {
        if !v.is_integer() || v.re.is_negative() {
            return Err(SolverError::NegativeCoefficient {
                d,
                half,
                value: v.to_string(),
            });
        }
    }
    let want = (d * d + 1) as i64;
    let got = p.max_half().unwrap_or(i64::MIN);
    if got != want {
        return Err(SolverError::WrongDegree { d, got, want });
    }
    omega_hat(omega).map(|_| ())
}

/// `Omega^_d = y^{g(d)} Omega_d / [3d]`.
pub fn omega_hat(omega: &OmegaPoly) -> Result<OmegaHat, SolverError> {
    let d = omega.d;
    let q = omega
        .poly
        .exact_div(&quantum_integer(3 * d as i64))
        .map_err(|source| SolverError::NotDivisible {
            d,
            what: "Omega_d by [3d]",
            source,
        })?
        .shift_half(2 * genus(d) as i64);
    let bad = |detail: &str| SolverError::BadOmegaHat {
        d,
        detail: detail.to_string(),
    };
    let (lo, coeffs) = q.to_y_int_coeffs().ok_or_else(|| bad("not an integer polynomial in y"))?;
    if lo != 0 || coeffs.len() != 2 * genus(d) as usize + 1 {
        return Err(bad("wrong degree range"));
    }
    if !coeffs[0].is_one() {
        return Err(bad("constant term is not 1"));
    }
    Ok(OmegaHat { d, coeffs })
}

/// `Omega_d = y^{-g(d)} Omega^_d [3d]`.
pub fn omega_from_hat(hat: &OmegaHat) -> OmegaPoly {
    let d = hat.d;
    let poly = (&hat.as_laurent() * &quantum_integer(3 * d as i64)).shift_half(-2 * genus(d) as i64);
    OmegaPoly { d, poly }
}

/// Recover `n_{g,d}` for `d = 1..=D` from `Omega_1, ..., Omega_D`.
pub fn invert_to_gv(omegas: &[OmegaPoly], method: RhsMethod) -> Result<GvTable, SolverError> {
    let mut gv = GvTable::new();
    let mut known = BTreeMap::new();
    let mut sorted: Vec<&OmegaPoly> = omegas.iter().collect();
    sorted.sort_by_key(|o| o.d);
    for (idx, om) in sorted.into_iter().enumerate() {
        let d = om.d;
        if d != idx as u32 + 1 {
            return Err(SolverError::MissingOmega { d: idx as u32 + 1 });
        }
        // The graph sum only needs invariants of degree <= d - 3.
        let b = leading_bracket(d, &gv, &known, method)?;
        let f = &normalized_omega(om)? + &(&delta_sq() * &b);
        for (g, n) in expand_curly(d, &f)?.into_iter().enumerate() {
            gv.insert(d, g as u32, n)?;
        }
        known.insert(d, om.clone());
    }
    Ok(gv)
}

/// Write `F` in the basis `(-1)^g (y^{1/2} - y^{-1/2})^{2g}` by peeling the
/// top `y`-degree, checking integrality of every coefficient.
pub fn expand_curly(d: u32, f: &HalfLaurent) -> Result<Vec<BigInt>, SolverError> {
    let bad = |detail: String| SolverError::BadCurlyF { d, detail };
    if !f.is_real() || !f.has_integer_exponents() || !f.is_palindromic() {
        return Err(bad(format!("not a real palindromic Laurent polynomial in y: {f}")));
    }
    let top = f.max_half().map_or(0, |h| h / 2);
    if top > genus(d) as i64 {
        return Err(bad(format!("y-degree {top} exceeds the genus bound {}", genus(d))));
    }
    let basis = delta_sq().scale_int(-1);
    let mut rest = f.clone();
    let mut out = vec![BigInt::zero(); top.max(0) as usize + 1];
    for g in (0..=top.max(0)).rev() {
        let c = rest.coeff(2 * g);
        let n = if g % 2 == 0 { c } else { -c };
        if !n.is_integer() {
            return Err(SolverError::NonIntegerGv {
                d,
                g: g as u32,
                value: n.to_string(),
            });
        }
        let term = basis.pow(g as u32).scale(&n);
        rest = &rest - &term;
        out[g as usize] = n.re.to_integer();
    }
    if !rest.is_zero() {
        return Err(bad(format!("remainder {rest} after basis expansion")));
    }
    Ok(out)
}
