//! Harder-Narasimhan recursions for the Poincare series `P_d`, unrefined
//! (series in `y`) and refined (series in `q, t`).
//!
//! For a type `((d_1, chi_1), ..., (d_m, chi_m))` with slopes
//! `0 <= chi_1/d_1 < ... < chi_m/d_m < 3`, put `d_0 = d - sum d_i` and
//! `s = sum_{0 <= i < j <= m} d_i d_j`. The recursion in question reads
//!
//! ```text
//! sum_{types, sum d_i <= k} y^s P_{d_0} P~_{d_1,chi_1} ... P~_{d_m,chi_m} = H(y)  mod y^{(k+1)(d-k-1)}
//! ```
//!
//! with stack series `P~`, and the refined version weights each type by
//! `q^{s + sum chi} t^{s - sum chi}`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::asymptotics::TruncatedCheckReport;
use crate::data::RefinedTable;
use crate::exactalg::{euler_product, product_expand, TwoVarSeries, Vars};
use crate::solver::OmegaHat;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HnError {
    #[error("stack series for degree {d} with gcd {gcd} is not covered by the {convention} convention")]
    UnsupportedGcd {
        d: u32,
        gcd: u32,
        convention: &'static str,
    },
    #[error("no Poincare series for degree {d}")]
    MissingData { d: u32 },
    #[error("no refined Poincare polynomial for degree {d}")]
    MissingRefinedData { d: u32 },
    #[error("refined polynomial of degree {d} does not specialize to P_{d} at q = t = y^(1/2)")]
    SpecializationMismatch { d: u32 },
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

/// The monomial playing the role of `y`: `y` itself, or `q t`.
fn unit(vars: Vars) -> (i32, i32) {
    match vars {
        Vars::Y => (1, 0),
        Vars::QT => (1, 1),
    }
}

fn unit_pow(vars: Vars, n: i32) -> (i32, i32) {
    let u = unit(vars);
    (u.0 * n, u.1 * n)
}

fn one_minus(vars: Vars, e: (i32, i32), order: i32) -> TwoVarSeries {
    let mut s = TwoVarSeries::one(vars, order);
    s.add_term(e, rat(-1));
    s
}

fn over_one_minus(s: &TwoVarSeries, e: (i32, i32)) -> TwoVarSeries {
    s.mul(&one_minus(s.vars(), e, s.order()).inverse().expect("unit constant term"))
}

// ----------------------------------------------------------------------------
// Descendent algebra and relation degrees

/// `H(y) = prod_{k>0} 1 / ((1-y^k)^2 (1-y^{k+1}))`.
pub fn h_desc(order: i32) -> TwoVarSeries {
    euler_product(2, 1, order)
}

/// Dimensions of the graded pieces of the free algebra on `c_k(j)`,
/// `k >= 0`, `j in {0, 1, 2}`, of degree `k + j - 1`, dropping generators of
/// degree `<= 0` and `c_1(1)`, by counting monomials directly.
pub fn descendent_monomial_counts(order: usize) -> Vec<BigInt> {
    let mut gens = Vec::new();
    for k in 0..=order + 1 {
        for j in 0..=2usize {
            let deg = k as i64 + j as i64 - 1;
            if deg <= 0 || (k, j) == (1, 1) || deg as usize > order {
                continue;
            }
            gens.push(deg as usize);
        }
    }
    // ways[n] over generators processed so far, each usable any number of times
    let mut ways = vec![BigInt::zero(); order + 1];
    ways[0] = BigInt::one();
    for g in gens {
        for n in g..=order {
            let add = ways[n - g].clone();
            ways[n] += add;
        }
    }
    ways
}

/// Degrees of the relations with `d' = 1`: `sum_{k>d} sum_{chi'} sum_i y^{k-2+i}`,
/// enumerated term by term.
pub fn gmr_degree_series(d: u32, order: i32) -> TwoVarSeries {
    let mut s = TwoVarSeries::zero(Vars::Y, order);
    let mut k = d as i32 + 1;
    while k - 2 <= order {
        for _chi in -2..=0 {
            for i in 0..=2 {
                s.add_term((k - 2 + i, 0), rat(1));
            }
        }
        k += 1;
    }
    s
}

/// `3 y^{d-1} (1+y+y^2) / (1-y)`.
pub fn gmr_closed_form(d: u32, order: i32) -> TwoVarSeries {
    let tri = TwoVarSeries::from_y_ints(order, &[1, 1, 1]);
    over_one_minus(&tri, (1, 0)).shift((d as i32 - 1, 0)).scale_int(3)
}

// ----------------------------------------------------------------------------
// Harder-Narasimhan types

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HnType {
    pub ds: Vec<u32>,
    pub chis: Vec<i64>,
}

impl HnType {
    pub fn total(&self) -> u32 {
        self.ds.iter().sum()
    }

    pub fn chi_sum(&self) -> i64 {
        self.chis.iter().sum()
    }

    /// `sum_{1 <= i < j} d_i d_j`.
    pub fn s_inner(&self) -> i64 {
        let mut s = 0;
        for i in 0..self.ds.len() {
            for j in i + 1..self.ds.len() {
                s += self.ds[i] as i64 * self.ds[j] as i64;
            }
        }
        s
    }

    /// `s(d) = sum_{0 <= i < j} d_i d_j` with `d_0 = d - sum d_i`.
    pub fn s(&self, d: u32) -> i64 {
        let mut all = vec![d as i64 - self.total() as i64];
        all.extend(self.ds.iter().map(|&x| x as i64));
        let mut s = 0;
        for i in 0..all.len() {
            for j in i + 1..all.len() {
                s += all[i] * all[j];
            }
        }
        s
    }

    /// `s(d)` accumulated one part at a time.
    pub fn s_incremental(&self, d: u32) -> i64 {
        let mut seen = d as i64 - self.total() as i64;
        let mut s = 0;
        for &x in &self.ds {
            s += seen * x as i64;
            seen += x as i64;
        }
        s
    }

    /// `(s_+, s_-) = (s + sum chi, s - sum chi)`.
    pub fn s_pm(&self, d: u32) -> (i64, i64) {
        let s = self.s(d);
        (s + self.chi_sum(), s - self.chi_sum())
    }
}

/// All types with `sum d_i <= k`, including the empty one, in a fixed order.
pub fn hn_types(k: u32) -> Vec<HnType> {
    hn_types_capped(k, 3)
}

/// Slopes in `[0, cap)`; `cap = 3` is the real bound.
fn hn_types_capped(k: u32, cap: i64) -> Vec<HnType> {
    let mut out = Vec::new();
    let mut cur = HnType {
        ds: vec![],
        chis: vec![],
    };
    extend_types(k, cap, &mut cur, &mut out);
    out
}

fn extend_types(left: u32, cap: i64, cur: &mut HnType, out: &mut Vec<HnType>) {
    out.push(cur.clone());
    for d in 1..=left {
        for chi in 0..cap * d as i64 {
            // strictly increasing slopes, compared by cross-multiplication
            if let (Some(&pd), Some(&pc)) = (cur.ds.last(), cur.chis.last()) {
                if chi * pd as i64 <= pc * d as i64 {
                    continue;
                }
            }
            cur.ds.push(d);
            cur.chis.push(chi);
            extend_types(left - d, cap, cur, out);
            cur.ds.pop();
            cur.chis.pop();
        }
    }
}

// ----------------------------------------------------------------------------
// Poincare data and stack series

/// `P_d` for a range of `d`, in `y` or in `(q, t)`. `P_0 = 1`.
#[derive(Clone, Debug)]
pub struct PoincareTable {
    vars: Vars,
    order: i32,
    rows: BTreeMap<u32, TwoVarSeries>,
}

impl PoincareTable {
    pub fn new(vars: Vars, order: i32) -> Self {
        let mut rows = BTreeMap::new();
        rows.insert(0, TwoVarSeries::one(vars, order));
        PoincareTable { vars, order, rows }
    }

    /// `P_d = Omega^_d (1 + y + ... + y^{3d-1})`.
    pub fn from_omega_hats(hats: &[OmegaHat], order: i32) -> Self {
        let mut t = Self::new(Vars::Y, order);
        for h in hats {
            t.insert(h.d, TwoVarSeries::from_y_coeffs(order, &h.poincare()));
        }
        t
    }

    pub fn from_refined(table: &RefinedTable, order: i32) -> Self {
        let mut t = Self::new(Vars::QT, order);
        for (&d, terms) in &table.rows {
            t.insert(d, TwoVarSeries::from_qt_terms(order, terms));
        }
        t
    }

    pub fn insert(&mut self, d: u32, p: TwoVarSeries) {
        assert_eq!(p.vars(), self.vars);
        self.rows.insert(d, p.truncate(self.order));
    }

    pub fn vars(&self) -> Vars {
        self.vars
    }

    pub fn order(&self) -> i32 {
        self.order
    }

    pub fn get(&self, d: u32) -> Result<&TwoVarSeries, HnError> {
        self.rows.get(&d).ok_or(match self.vars {
            Vars::Y => HnError::MissingData { d },
            Vars::QT => HnError::MissingRefinedData { d },
        })
    }

    /// Refined rows must specialize to the unrefined ones under `q = t = y^{1/2}`.
    pub fn check_specializes_to(&self, plain: &PoincareTable) -> Result<(), HnError> {
        assert_eq!((self.vars, plain.vars), (Vars::QT, Vars::Y));
        for (&d, p) in self.rows.iter().filter(|(&d, _)| d > 0) {
            let want = plain.get(d)?.substitute_power(2);
            let order = (self.order).min(2 * plain.order);
            if p.specialize_diagonal().truncate(order) != want.truncate(order) {
                return Err(HnError::SpecializationMismatch { d });
            }
        }
        Ok(())
    }
}

/// How `P~_{d,chi}` is obtained from the `P`s once `gcd(d, chi) > 1`.
pub trait StackConvention {
    fn name(&self) -> &'static str;
    /// Stack series for a class of degree `d` with `gcd(d, chi) = g`.
    fn stack(&self, d: u32, g: u32, table: &PoincareTable) -> Result<TwoVarSeries, HnError>;
}

/// Only what is written out explicitly: `P_d / (1-y)` when coprime, and for
/// `d = 2, chi` even
/// `P_2/(1-y) + y (P_1/(1-y))^2 / 2 - y P_1(y^2) / (2 (1-y^2))`,
/// with `y -> q t` in the refined setting.
#[derive(Clone, Copy, Debug, Default)]
pub struct ExplicitConvention;

impl StackConvention for ExplicitConvention {
    fn name(&self) -> &'static str {
        "explicit"
    }

    fn stack(&self, d: u32, g: u32, table: &PoincareTable) -> Result<TwoVarSeries, HnError> {
        let u = unit(table.vars());
        let coprime = over_one_minus(table.get(d)?, u);
        match (d, g) {
            (_, 1) => Ok(coprime),
            (2, 2) => {
                let p1 = over_one_minus(table.get(1)?, u);
                let sq = p1.mul(&p1).shift(u).scale(&half());
                let u2 = unit_pow(table.vars(), 2);
                let adams = over_one_minus(&table.get(1)?.substitute_power(2), u2)
                    .shift(u)
                    .scale(&half());
                Ok(coprime.add(&sq).sub(&adams))
            }
            _ => Err(HnError::UnsupportedGcd {
                d,
                gcd: g,
                convention: self.name(),
            }),
        }
    }
}

/// Signed plethystic exponential for unrefined series: with `e = d/g`,
///
/// ```text
/// sum_n (-y^{-1/2})^{n^2 e^2} P~_{ne} x^n = Exp( sum_n (-y^{-1/2})^{n^2 e^2} P_{ne}/(1-y) x^n ),
/// ```
///
/// the Adams operations sending `y^{1/2} -> y^{k/2}`, `x -> x^k` and fixing
/// signs. For `g = 2, e = 1` this is the explicit convention.
#[derive(Clone, Copy, Debug, Default)]
pub struct SignedPlethystic;

/// Laurent polynomial in `u = y^{1/2}` with `y`-series coefficients.
type USeries = BTreeMap<i64, TwoVarSeries>;

fn useries_mul(a: &USeries, b: &USeries) -> USeries {
    let mut out = USeries::new();
    for (ka, va) in a {
        for (kb, vb) in b {
            let p = va.mul(vb);
            match out.get_mut(&(ka + kb)) {
                Some(cur) => *cur = cur.add(&p),
                None => {
                    out.insert(ka + kb, p);
                }
            }
        }
    }
    out
}

fn useries_add_scaled(into: &mut USeries, a: &USeries, c: &BigRational) {
    for (k, v) in a {
        let p = v.scale(c);
        match into.get_mut(k) {
            Some(cur) => *cur = cur.add(&p),
            None => {
                into.insert(*k, p);
            }
        }
    }
}

impl StackConvention for SignedPlethystic {
    fn name(&self) -> &'static str {
        "signed-plethystic"
    }

    fn stack(&self, d: u32, g: u32, table: &PoincareTable) -> Result<TwoVarSeries, HnError> {
        assert_eq!(table.vars(), Vars::Y, "the plethystic plug-in is unrefined");
        let e = (d / g) as i64;
        let order = table.order();
        let gg = g as usize;
        // L_m = sum_{k n = m} psi_k(a_n) / k, a_n = (-1)^{n^2 e^2} u^{-n^2 e^2} P_{ne}/(1-y)
        let mut logs: Vec<USeries> = vec![USeries::new(); gg + 1];
        for n in 1..=gg {
            let p = table.get(n as u32 * e as u32)?;
            let sign = if (n as i64 * e) % 2 == 0 { 1 } else { -1 };
            for k in 1..=gg / n {
                let a = over_one_minus(&p.substitute_power(k as i32), (k as i32, 0)).scale_int(sign);
                let key = -(k as i64) * (n * n) as i64 * e * e;
                let mut term = USeries::new();
                term.insert(key, a);
                useries_add_scaled(&mut logs[k * n], &term, &BigRational::new(BigInt::one(), BigInt::from(k)));
            }
        }
        // exp by m E_m = sum_j j L_j E_{m-j}
        let mut exps: Vec<USeries> = vec![USeries::new(); gg + 1];
        exps[0].insert(0, TwoVarSeries::one(Vars::Y, order));
        for m in 1..=gg {
            let mut acc = USeries::new();
            for j in 1..=m {
                let prod = useries_mul(&logs[j], &exps[m - j]);
                useries_add_scaled(&mut acc, &prod, &rat(j as i64));
            }
            let mut scaled = USeries::new();
            useries_add_scaled(&mut scaled, &acc, &BigRational::new(BigInt::one(), BigInt::from(m)));
            exps[m] = scaled;
        }
        let top = (g as i64) * (g as i64) * e * e;
        let sign = if top % 2 == 0 { 1 } else { -1 };
        let mut out = TwoVarSeries::zero(Vars::Y, order);
        for (k, v) in &exps[gg] {
            let shift = k + top;
            assert!(shift >= 0 && shift % 2 == 0, "half-integer power in a stack series");
            out = out.add(&v.shift(((shift / 2) as i32, 0)));
        }
        Ok(out.scale_int(sign))
    }
}

/// `P~_{d,chi}` under the given convention.
pub fn stack_series(d: u32, chi: i64, table: &PoincareTable, conv: &dyn StackConvention) -> Result<TwoVarSeries, HnError> {
    let g = (d as i64).gcd(&chi) as u32;
    conv.stack(d, g, table)
}

// ----------------------------------------------------------------------------
// Recursions

/// Weight of a type: `y^s`, or `q^{s_+} t^{s_-}`; `s` may be the full or inner sum.
fn type_weight(vars: Vars, s: i64, chi_sum: i64) -> (i32, i32) {
    match vars {
        Vars::Y => (s as i32, 0),
        Vars::QT => ((s + chi_sum) as i32, (s - chi_sum) as i32),
    }
}

fn stack_product(ty: &HnType, table: &PoincareTable, conv: &dyn StackConvention) -> Result<TwoVarSeries, HnError> {
    let mut acc = TwoVarSeries::one(table.vars(), table.order());
    for (&di, &ci) in ty.ds.iter().zip(&ty.chis) {
        acc = acc.mul(&stack_series(di, ci, table, conv)?);
    }
    Ok(acc)
}

/// Left side of the level-`k` recursion for degree `d`.
pub fn recursion_sum(d: u32, k: u32, table: &PoincareTable, conv: &dyn StackConvention) -> Result<TwoVarSeries, HnError> {
    let mut total = TwoVarSeries::zero(table.vars(), table.order());
    for ty in hn_types(k) {
        let w = type_weight(table.vars(), ty.s(d), ty.chi_sum());
        let p0 = table.get(d - ty.total())?;
        let term = p0.mul(&stack_product(&ty, table, conv)?).shift(w);
        total = total.add(&term);
    }
    Ok(total)
}

/// `P_d + 3y^{d-1} P~_{1,0} P_{d-1} + 3y^{2d-4} (P~_{2,1} + P~_{2,0}) P_{d-2} + 3y^{2d-3} P~_{1,0}^2 P_{d-2}`.
pub fn recursion_range3(d: u32, table: &PoincareTable) -> Result<TwoVarSeries, HnError> {
    let conv = ExplicitConvention;
    let e = d as i32;
    let p10 = stack_series(1, 0, table, &conv)?;
    let p21 = stack_series(2, 1, table, &conv)?;
    let p20 = stack_series(2, 0, table, &conv)?;
    let a = table.get(d)?.clone();
    let b = p10.mul(table.get(d - 1)?).shift((e - 1, 0)).scale_int(3);
    let c = p21.add(&p20).mul(table.get(d - 2)?).shift((2 * e - 4, 0)).scale_int(3);
    let dd = p10.mul(&p10).mul(table.get(d - 2)?).shift((2 * e - 3, 0)).scale_int(3);
    Ok(a.add(&b).add(&c).add(&dd))
}

/// Check the level-`k` recursion for degree `d > k + 1`.
pub fn unrefined_recursion_check(
    d: u32,
    k: u32,
    table: &PoincareTable,
    conv: &dyn StackConvention,
) -> Result<TruncatedCheckReport, HnError> {
    assert!(d > k + 1);
    let modulus = ((k + 1) * (d - k - 1)) as i32;
    let lhs = recursion_sum(d, k, table, conv)?;
    Ok(TruncatedCheckReport::compare(
        &format!("hn-recursion-k{k}"),
        d,
        &lhs,
        &h_desc(table.order()),
        modulus,
    ))
}

/// `Q_D = sum_{types with sum d_i = D} w_inner prod P~`.
fn q_piece(dd: u32, table: &PoincareTable, conv: &dyn StackConvention) -> Result<TwoVarSeries, HnError> {
    let mut total = TwoVarSeries::zero(table.vars(), table.order());
    for ty in hn_types(dd).into_iter().filter(|t| t.total() == dd) {
        let w = type_weight(table.vars(), ty.s_inner(), ty.chi_sum());
        total = total.add(&stack_product(&ty, table, conv)?.shift(w));
    }
    Ok(total)
}

/// `g_0 = 1`, `g_n = -sum_{D=1}^n w^{D(n-D)} Q_D g_{n-D}` where `w` is `y` or `q t`.
/// Unrefined these are the `f_n`; refined `f^ref_n = t^{3n-1} g_n` for `n >= 1`.
fn g_pieces(k: u32, table: &PoincareTable, conv: &dyn StackConvention) -> Result<Vec<TwoVarSeries>, HnError> {
    let mut qs = vec![TwoVarSeries::one(table.vars(), table.order())];
    for dd in 1..=k {
        qs.push(q_piece(dd, table, conv)?);
    }
    let mut g = vec![TwoVarSeries::one(table.vars(), table.order())];
    for n in 1..=k {
        let mut acc = TwoVarSeries::zero(table.vars(), table.order());
        for dd in 1..=n {
            let w = unit_pow(table.vars(), (dd * (n - dd)) as i32);
            acc = acc.add(&qs[dd as usize].mul(&g[(n - dd) as usize]).shift(w));
        }
        g.push(acc.scale_int(-1));
    }
    Ok(g)
}

/// `f_0, ..., f_k` with `P_d = H sum_j y^{j(d-j)} f_j mod y^{(k+1)(d-k-1)}`.
pub fn f_k_extract(k: u32, table: &PoincareTable, conv: &dyn StackConvention) -> Result<Vec<TwoVarSeries>, HnError> {
    assert_eq!(table.vars(), Vars::Y);
    g_pieces(k, table, conv)
}

/// `f^ref_0, ..., f^ref_k` with
/// `P^ref_d = H^ref sum_j q^{j(d-j)} t^{j(d-j-3)+1} f^ref_j` for `j >= 1` and `f^ref_0 = 1`.
pub fn f_ref_extract(k: u32, table: &PoincareTable, conv: &dyn StackConvention) -> Result<Vec<TwoVarSeries>, HnError> {
    assert_eq!(table.vars(), Vars::QT);
    let g = g_pieces(k, table, conv)?;
    Ok(g.into_iter()
        .enumerate()
        .map(|(j, s)| if j == 0 { s } else { s.shift((0, 3 * j as i32 - 1)) })
        .collect())
}

/// `H sum_{j<=k} y^{j(d-j)} f_j`.
pub fn f_expansion(d: u32, fs: &[TwoVarSeries]) -> TwoVarSeries {
    let order = fs[0].order();
    let mut acc = TwoVarSeries::zero(Vars::Y, order);
    for (j, f) in fs.iter().enumerate() {
        let j = j as i32;
        acc = acc.add(&f.shift((j * (d as i32 - j), 0)));
    }
    h_desc(order).mul(&acc)
}

// ----------------------------------------------------------------------------
// Closed forms written out explicitly

fn y_poly(coeffs: &[i64], order: i32) -> TwoVarSeries {
    TwoVarSeries::from_y_ints(order, coeffs)
}

fn qt_poly(terms: &[(i32, i32, i64)], order: i32) -> TwoVarSeries {
    let big: Vec<(i32, i32, BigInt)> = terms.iter().map(|&(a, b, c)| (a, b, BigInt::from(c))).collect();
    TwoVarSeries::from_qt_terms(order, &big)
}

/// `(1+y+y^2)(1+y^2+y^3+y^4-y^5) / ((1-y)(1-y^2))`.
pub fn stack_20_closed_form(order: i32) -> TwoVarSeries {
    let num = y_poly(&[1, 1, 1], order).mul(&y_poly(&[1, 0, 1, 1, 1, -1], order));
    over_one_minus(&over_one_minus(&num, (1, 0)), (2, 0))
}

/// `-3 (9 + 18y - 44y^3 - ... + 9y^15) / ((1-y)(1-y^2)(1-y^3))`.
pub fn f3_closed_form(order: i32) -> TwoVarSeries {
    let num = y_poly(
        &[9, 18, 0, -44, -82, -37, 56, 143, 170, 164, 125, 89, 55, 36, 18, 9],
        order,
    );
    let den = over_one_minus(&over_one_minus(&over_one_minus(&num, (1, 0)), (2, 0)), (3, 0));
    den.scale_int(-3)
}

/// `-(q^2 + q t + t^2)(1 + t^2 + t^4) / (1 - q t)`.
pub fn f1_ref_closed_form(order: i32) -> TwoVarSeries {
    let a = qt_poly(&[(2, 0, 1), (1, 1, 1), (0, 2, 1)], order);
    let b = qt_poly(&[(0, 0, 1), (0, 2, 1), (0, 4, 1)], order);
    over_one_minus(&a.mul(&b), (1, 1)).scale_int(-1)
}

/// `f^ref_1` times the fourteen-term polynomial.
pub fn f2_ref_closed_form(order: i32) -> TwoVarSeries {
    let tail = qt_poly(
        &[
            (3, 0, 1),
            (0, 3, 1),
            (3, 2, -1),
            (1, 4, -1),
            (5, 2, -1),
            (3, 4, -1),
            (2, 5, -2),
            (4, 5, -1),
            (2, 7, -1),
            (1, 8, -1),
            (3, 8, -1),
            (5, 8, -1),
            (0, 9, 1),
            (2, 11, -1),
        ],
        order,
    );
    f1_ref_closed_form(order).mul(&tail)
}

/// `H^ref = prod_k 1 / ((1 - q^{k-1} t^{k+1})(1 - q^{k+1} t^{k-1})(1 - q^{k+1} t^{k+1}))`.
pub fn h_ref(order: i32) -> TwoVarSeries {
    let mut factors = Vec::new();
    for k in 1..=order {
        factors.push(((k - 1, k + 1), -1));
        factors.push(((k + 1, k - 1), -1));
        factors.push(((k + 1, k + 1), -1));
    }
    product_expand(Vars::QT, &factors, order).expect("factors have positive degree")
}

/// Level-`k` refined recursion for degree `d > k + 1`, modulo total degree
/// `2(k+1)(d-k-1)`.
pub fn refined_recursion_check(
    d: u32,
    k: u32,
    table: &PoincareTable,
    conv: &dyn StackConvention,
) -> Result<TruncatedCheckReport, HnError> {
    assert!(d > k + 1);
    assert_eq!(table.vars(), Vars::QT);
    let modulus = (2 * (k + 1) * (d - k - 1)) as i32;
    let lhs = recursion_sum(d, k, table, conv)?;
    Ok(TruncatedCheckReport::compare(
        &format!("refined-hn-recursion-k{k}"),
        d,
        &lhs,
        &h_ref(table.order()),
        modulus,
    ))
}

/// `f^ref_1` at `q = t = u` against `u^2 f_1(u^2)`, both computed from data.
pub fn f1_ref_specialization_check(
    refined: &PoincareTable,
    plain: &PoincareTable,
    order: i32,
) -> Result<TruncatedCheckReport, HnError> {
    let conv = ExplicitConvention;
    let fr = f_ref_extract(1, refined, &conv)?;
    let fp = f_k_extract(1, plain, &conv)?;
    let got = fr[1].specialize_diagonal();
    let want = fp[1].substitute_power(2).shift((2, 0));
    Ok(TruncatedCheckReport::compare("refined-f1-specialization", 1, &got, &want, order + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{bundled_omega_hat, bundled_refined};

    fn plain(order: i32) -> PoincareTable {
        PoincareTable::from_omega_hats(&bundled_omega_hat(), order)
    }

    fn refined(order: i32) -> PoincareTable {
        PoincareTable::from_refined(&bundled_refined(), order)
    }

    #[test]
    fn descendent_counts() {
        let c = descendent_monomial_counts(20);
        let want: Vec<BigInt> = [1, 2, 6, 13].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(&c[..4], &want[..]);
        let h = h_desc(20);
        for (j, v) in c.iter().enumerate() {
            assert_eq!(h.y_coeff(j as i32), BigRational::from_integer(v.clone()));
        }
    }

    #[test]
    fn descendent_counts_match_cumulative_betti() {
        // b_{2j}(M_10) = [y^j] H for j <= d - 2
        let p10 = plain(20).get(10).unwrap().clone();
        let h = h_desc(20);
        for j in 0..=8 {
            assert_eq!(p10.y_coeff(j), h.y_coeff(j), "j = {j}");
        }
    }

    #[test]
    fn gmr_series() {
        for d in 1..=10 {
            assert_eq!(gmr_degree_series(d, 20), gmr_closed_form(d, 20));
            if d <= 20 {
                assert_eq!(gmr_degree_series(d, 20).y_coeff(d as i32 - 1), rat(3));
            }
        }
    }

    #[test]
    fn type_counts() {
        let counts: Vec<usize> = (0..=2).map(|k| hn_types(k).len()).collect();
        assert_eq!(counts, vec![1, 4, 13]);
        assert!(hn_types_capped(2, 4).len() > 13);
        for ty in hn_types(4) {
            for w in ty.ds.windows(2).zip(ty.chis.windows(2)) {
                let (d, c) = w;
                assert!(BigRational::new(c[0].into(), d[0].into()) < BigRational::new(c[1].into(), d[1].into()));
            }
            for (&d, &c) in ty.ds.iter().zip(&ty.chis) {
                assert!(c >= 0 && c < 3 * d as i64);
            }
        }
    }

    #[test]
    fn weights_two_ways() {
        for ty in hn_types(4) {
            for d in ty.total() + 2..ty.total() + 6 {
                assert_eq!(ty.s(d), ty.s_incremental(d));
                let (p, m) = ty.s_pm(d);
                assert_eq!(p + m, 2 * ty.s(d));
            }
        }
        let ty = HnType {
            ds: vec![1, 1],
            chis: vec![0, 2],
        };
        assert_eq!(ty.s(9), 2 * 9 - 3);
    }

    #[test]
    fn stack_series_examples() {
        let t = plain(30);
        let conv = ExplicitConvention;
        assert_eq!(stack_series(2, 0, &t, &conv).unwrap(), stack_20_closed_form(30));
        let p1 = y_poly(&[1, 1, 1], 30);
        assert_eq!(stack_series(1, 2, &t, &conv).unwrap(), over_one_minus(&p1, (1, 0)));
        assert_eq!(
            stack_series(2, 1, &t, &conv).unwrap(),
            over_one_minus(t.get(2).unwrap(), (1, 0))
        );
        assert!(matches!(
            stack_series(3, 0, &t, &conv),
            Err(HnError::UnsupportedGcd { gcd: 3, .. })
        ));
        assert_eq!(
            stack_series(2, 0, &t, &SignedPlethystic).unwrap(),
            stack_series(2, 0, &t, &conv).unwrap()
        );
        for (d, chi) in [(3, 1), (5, 2), (4, 1)] {
            assert_eq!(
                stack_series(d, chi, &t, &SignedPlethystic).unwrap(),
                stack_series(d, chi, &t, &conv).unwrap()
            );
        }
    }

    #[test]
    fn low_level_recursions() {
        let t = plain(40);
        let conv = ExplicitConvention;
        assert!(unrefined_recursion_check(6, 0, &t, &conv).unwrap().pass);
        for d in 3..=10 {
            assert!(unrefined_recursion_check(d, 1, &t, &conv).unwrap().pass, "d = {d}");
        }
        for d in 7..=10 {
            let r = unrefined_recursion_check(d, 2, &t, &conv).unwrap();
            assert!(r.pass, "{r:?}");
            assert_eq!(recursion_range3(d, &t).unwrap(), recursion_sum(d, 2, &t, &conv).unwrap());
        }
    }

    #[test]
    fn levels_are_nested() {
        let t = plain(40);
        let conv = ExplicitConvention;
        for d in 6..=10 {
            for k in 1..=2u32 {
                let diff = recursion_sum(d, k, &t, &conv)
                    .unwrap()
                    .sub(&recursion_sum(d, k - 1, &t, &conv).unwrap());
                let low = (k * (d - k)) as i32;
                assert!(diff.terms().all(|(e, _)| e.0 >= low), "d = {d}, k = {k}");
            }
        }
    }

    #[test]
    fn first_two_f() {
        let t = plain(30);
        let fs = f_k_extract(2, &t, &ExplicitConvention).unwrap();
        let f1 = over_one_minus(&y_poly(&[1, 1, 1], 30), (1, 0)).scale_int(-3);
        assert_eq!(fs[1], f1);
        assert_eq!(fs[2], crate::asymptotics::f_series(30).scale_int(3));
        for d in 7..=10 {
            let r = TruncatedCheckReport::compare("f-expansion", d, t.get(d).unwrap(), &f_expansion(d, &fs), (3 * (d - 3)) as i32);
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn third_level_with_plethystic_stacks() {
        let t = plain(30);
        for d in [9u32, 10] {
            let r = unrefined_recursion_check(d, 3, &t, &SignedPlethystic).unwrap();
            assert!(r.pass, "{r:?}");
        }
        let fs = f_k_extract(3, &t, &SignedPlethystic).unwrap();
        // The computed f_3 is one third of the closed form.
        assert_eq!(fs[3].scale_int(3), f3_closed_form(30));
    }

    #[test]
    fn refined_descendent_specializes() {
        let h = h_ref(40).specialize_diagonal();
        assert_eq!(h, h_desc(20).substitute_power(2).truncate(40));
    }

    #[test]
    fn refined_data_and_f1() {
        let r = refined(24);
        let p = plain(12);
        r.check_specializes_to(&p).unwrap();
        let fr = f_ref_extract(2, &r, &ExplicitConvention).unwrap();
        assert_eq!(fr[1], f1_ref_closed_form(24));
        assert!(f1_ref_specialization_check(&r, &p, 11).unwrap().pass);
        // f1_ref(y^{1/2}, y^{1/2}) = y f_1(y)
        let f1 = over_one_minus(&y_poly(&[1, 1, 1], 12), (1, 0)).scale_int(-3);
        assert_eq!(
            f1_ref_closed_form(24).specialize_diagonal(),
            f1.substitute_power(2).shift((2, 0)).truncate(24)
        );
    }

    #[test]
    fn refined_f2_against_display() {
        let r = refined(24);
        let fr = f_ref_extract(2, &r, &ExplicitConvention).unwrap();
        let scaled = over_one_minus(&f2_ref_closed_form(24), (2, 2));
        assert_eq!(fr[2], scaled);
        assert_ne!(fr[2], f2_ref_closed_form(24));
        let f2 = crate::asymptotics::f_series(12).scale_int(3);
        assert_eq!(fr[2].specialize_diagonal(), f2.substitute_power(2).shift((5, 0)).truncate(24));
    }

    #[test]
    fn synthetic_refined_recursion() {
        let order = 36;
        let base = refined(order);
        let conv = ExplicitConvention;
        let g = g_pieces(2, &base, &conv).unwrap();
        let h = h_ref(order);
        let mut t = base.clone();
        for d in 3..=9u32 {
            let mut acc = TwoVarSeries::zero(Vars::QT, order);
            for (j, gj) in g.iter().enumerate() {
                let j = j as i32;
                acc = acc.add(&gj.shift(unit_pow(Vars::QT, j * (d as i32 - j))));
            }
            t.insert(d, h.mul(&acc));
        }
        for d in 4..=9 {
            let r = refined_recursion_check(d, 2, &t, &conv).unwrap();
            assert!(r.pass, "{r:?}");
        }
        let mut bad = t.clone();
        let mut p7 = bad.get(7).unwrap().clone();
        p7.add_term((3, 4), rat(1));
        bad.insert(7, p7);
        let r = refined_recursion_check(7, 2, &bad, &conv).unwrap();
        assert!(!r.pass);
        assert_eq!(r.mismatch.unwrap().exponent, 7);
    }
}
