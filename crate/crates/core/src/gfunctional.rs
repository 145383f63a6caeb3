//! Packaged star-tree series `G(d_E, beta)` from the partition functional
//! equation, an independent route to the graph sum.
//!
//! Variables: `q` graded by P2-degree (the cubic has degree 3) and one `p_b`
//! per line degree `b`. A key `(d_E, {b_1, ..., b_s})` stands for the
//! monomial `q^{3 d_E + sum b_i} p_{b_1} ... p_{b_s}`. With
//!
//! ```text
//! I = exp(-sum_{d_E >= 0} G(d_E, beta) mono / |Aut beta|),  G(0, {b}) = 1,
//! I_c = I(q y^{3c}),  R_c = I_c^2 / (I_{c+1} I_{c-1}),
//! ```
//!
//! the equation is `sum_rho (-1)^{|rho|} q^{3|rho|} y^{9 c_rho} prod_box R_{c(box)} = H`
//! where `H = exp(-sum_{d_E >= 1} G mono / |Aut|)`. The left side at degree
//! `m` only sees `G` of degree `<= m - 3`, so the unknowns are extracted
//! three degrees at a time.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use crate::exactalg::{half_diff, GaussRat, HalfLaurent, RatFun};
use crate::localcurve::multiset_aut;
use crate::partitions::{content_sum, e_tilde, partitions_of, Partition};
use crate::solver::{w_table, GvTable, SolverError};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GKey {
    pub d_e: u32,
    /// Sorted line degrees.
    pub ms: Vec<u32>,
}

impl GKey {
    pub fn new(d_e: u32, mut ms: Vec<u32>) -> Self {
        ms.sort_unstable();
        GKey { d_e, ms }
    }

    pub fn total_degree(&self) -> u32 {
        3 * self.d_e + self.ms.iter().sum::<u32>()
    }

    pub fn aut_order(&self) -> u64 {
        multiset_aut(&self.ms)
    }

    fn merge(&self, o: &GKey) -> GKey {
        let mut ms = Vec::with_capacity(self.ms.len() + o.ms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.ms.len() || j < o.ms.len() {
            if j == o.ms.len() || (i < self.ms.len() && self.ms[i] <= o.ms[j]) {
                ms.push(self.ms[i]);
                i += 1;
            } else {
                ms.push(o.ms[j]);
                j += 1;
            }
        }
        GKey {
            d_e: self.d_e + o.d_e,
            ms,
        }
    }
}

/// All keys of total degree `m` (any `d_E >= 0`).
pub fn keys_of_degree(m: u32) -> Vec<GKey> {
    let mut out = Vec::new();
    for d_e in 0..=m / 3 {
        for rho in partitions_of(m - 3 * d_e) {
            out.push(GKey::new(d_e, rho.parts().to_vec()));
        }
    }
    out
}

type Homog = BTreeMap<GKey, HalfLaurent>;

/// Truncated series, stored by homogeneous degree.
#[derive(Clone, Debug, PartialEq)]
struct Series {
    parts: Vec<Homog>,
}

fn add_into(map: &mut Homog, k: GKey, v: HalfLaurent) {
    if v.is_zero() {
        return;
    }
    match map.get_mut(&k) {
        Some(cur) => {
            *cur = &*cur + &v;
            if cur.is_zero() {
                map.remove(&k);
            }
        }
        None => {
            map.insert(k, v);
        }
    }
}

fn mul_homog(a: &Homog, b: &Homog, out: &mut Homog) {
    for (ka, va) in a {
        for (kb, vb) in b {
            add_into(out, ka.merge(kb), va * vb);
        }
    }
}

impl Series {
    fn zero(order: u32) -> Self {
        Series {
            parts: vec![Homog::new(); order as usize + 1],
        }
    }

    fn one(order: u32) -> Self {
        let mut s = Self::zero(order);
        s.parts[0].insert(GKey::new(0, vec![]), HalfLaurent::one());
        s
    }

    fn order(&self) -> u32 {
        self.parts.len() as u32 - 1
    }

    fn add_term(&mut self, k: GKey, v: HalfLaurent) {
        let m = k.total_degree() as usize;
        if m < self.parts.len() {
            add_into(&mut self.parts[m], k, v);
        }
    }

    fn get(&self, k: &GKey) -> HalfLaurent {
        let m = k.total_degree() as usize;
        self.parts
            .get(m)
            .and_then(|p| p.get(k))
            .cloned()
            .unwrap_or_else(HalfLaurent::zero)
    }

    fn add(&self, o: &Series) -> Series {
        let mut out = self.clone();
        for p in &o.parts {
            for (k, v) in p {
                out.add_term(k.clone(), v.clone());
            }
        }
        out
    }

    fn map_coeffs(&self, f: impl Fn(u32, &HalfLaurent) -> HalfLaurent) -> Series {
        let mut out = Series::zero(self.order());
        for (m, p) in self.parts.iter().enumerate() {
            for (k, v) in p {
                add_into(&mut out.parts[m], k.clone(), f(m as u32, v));
            }
        }
        out
    }

    fn mul(&self, o: &Series) -> Series {
        let order = self.order().min(o.order());
        let mut out = Series::zero(order);
        for da in 0..=order as usize {
            for db in 0..=order as usize - da {
                let (a, b) = (&self.parts[da], &o.parts[db]);
                if a.is_empty() || b.is_empty() {
                    continue;
                }
                let mut tmp = std::mem::take(&mut out.parts[da + db]);
                mul_homog(a, b, &mut tmp);
                out.parts[da + db] = tmp;
            }
        }
        out
    }

    /// `exp(x)` for `x` without constant term, via `m E_m = sum_k k X_k E_{m-k}`.
    fn exp(&self) -> Series {
        assert!(self.parts[0].is_empty(), "exp needs a series without constant term");
        let order = self.order();
        let mut e = Series::one(order);
        for m in 1..=order as usize {
            let mut acc = Homog::new();
            for k in 1..=m {
                if self.parts[k].is_empty() {
                    continue;
                }
                let kx: Homog = self.parts[k].iter().map(|(key, v)| (key.clone(), v.scale_int(k as i64))).collect();
                mul_homog(&kx, &e.parts[m - k], &mut acc);
            }
            let inv = GaussRat::ratio(1, m as i64);
            e.parts[m] = acc.into_iter().map(|(k, v)| (k, v.scale(&inv))).collect();
        }
        e
    }

    /// Inverse of a series with constant term 1.
    fn inverse(&self) -> Series {
        assert!(self.get(&GKey::new(0, vec![])).is_one() && self.parts[0].len() == 1);
        let order = self.order();
        let mut j = Series::one(order);
        for m in 1..=order as usize {
            let mut acc = Homog::new();
            for k in 1..=m {
                mul_homog(&self.parts[k], &j.parts[m - k], &mut acc);
            }
            j.parts[m] = acc.into_iter().map(|(k, v)| (k, -v)).collect();
        }
        j
    }

    /// `q -> q y^{3c}` on P2-degree: the degree-`m` part gains `y^{3 c m}`.
    fn twist(&self, c: i64) -> Series {
        self.map_coeffs(|m, v| v.shift_half(6 * c * m as i64))
    }

    /// Multiply by `q^{3n}` carried by `n` extra cubic classes.
    fn times_cubic(&self, n: u32, order: u32) -> Series {
        let mut out = Series::zero(order);
        for p in &self.parts {
            for (k, v) in p {
                let key = GKey {
                    d_e: k.d_e + n,
                    ms: k.ms.clone(),
                };
                out.add_term(key, v.clone());
            }
        }
        out
    }

    fn truncate(&self, order: u32) -> Series {
        Series {
            parts: self.parts[..=order.min(self.order()) as usize].to_vec(),
        }
    }
}

/// `sum_{d_E >= d_min} G mono / |Aut|` with `G(0, {b}) = 1` when `d_min = 0`.
fn log_series(g: &BTreeMap<GKey, HalfLaurent>, order: u32, d_min: u32) -> Series {
    let mut s = Series::zero(order);
    if d_min == 0 {
        for b in 1..=order {
            s.add_term(GKey::new(0, vec![b]), HalfLaurent::one());
        }
    }
    for (k, v) in g {
        if k.d_e >= d_min.max(1) && k.total_degree() <= order {
            s.add_term(k.clone(), v.scale(&GaussRat::ratio(1, k.aut_order() as i64)));
        }
    }
    s
}

fn box_sign_and_weight(rho: &Partition) -> HalfLaurent {
    let sign = if rho.size() % 2 == 0 { 1 } else { -1 };
    HalfLaurent::monomial(18 * content_sum(rho), GaussRat::from_int(sign))
}

/// Left side of the equation through `order`, using only the `G` supplied.
fn partition_side(g: &BTreeMap<GKey, HalfLaurent>, order: u32) -> Series {
    let mut total = Series::one(order);
    if order < 3 {
        return total;
    }
    let inner = order - 3;
    let i0 = log_series(g, inner, 0);
    let mut r_cache: HashMap<i64, Series> = HashMap::new();
    let mut i_cache: HashMap<i64, Series> = HashMap::new();
    let mut i_at = |c: i64| -> Series {
        i_cache
            .entry(c)
            .or_insert_with(|| i0.twist(c).map_coeffs(|_, v| -v).exp())
            .clone()
    };
    for n in 1..=order / 3 {
        let rest = order - 3 * n;
        for rho in partitions_of(n) {
            let mut prod = Series::one(rest);
            for c in rho.contents() {
                let r = r_cache.entry(c).or_insert_with(|| {
                    let ic = i_at(c);
                    let num = ic.mul(&ic);
                    let den = i_at(c + 1).mul(&i_at(c - 1));
                    num.mul(&den.inverse())
                });
                prod = prod.mul(&r.truncate(rest));
            }
            let w = box_sign_and_weight(&rho);
            let term = prod.map_coeffs(|_, v| v * &w).times_cubic(n, order);
            total = total.add(&term);
        }
    }
    total
}

/// All `G(d_E, beta)` with `d_E >= 1` and total degree `<= dmax`.
pub fn solve_g(dmax: u32) -> Arc<BTreeMap<GKey, HalfLaurent>> {
    static CACHE: OnceLock<RwLock<(u32, Arc<BTreeMap<GKey, HalfLaurent>>)>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new((0, Arc::new(BTreeMap::new()))));
    {
        let c = cache.read().unwrap();
        if c.0 >= dmax {
            return Arc::new(
                c.1.iter()
                    .filter(|(k, _)| k.total_degree() <= dmax)
                    .map(|(k, v)| (k.clone(), v.clone()))
                    .collect(),
            );
        }
    }
    let g = Arc::new(solve_uncached(dmax));
    let mut c = cache.write().unwrap();
    if c.0 < dmax {
        *c = (dmax, g.clone());
    }
    g
}

fn solve_uncached(dmax: u32) -> BTreeMap<GKey, HalfLaurent> {
    let mut g = BTreeMap::new();
    let mut lo = 1;
    while lo <= dmax {
        let hi = (lo + 2).min(dmax);
        let lhs = partition_side(&g, hi);
        for m in lo..=hi {
            let h0 = log_series(&g, m, 1).map_coeffs(|_, v| -v).exp();
            for key in keys_of_degree(m).into_iter().filter(|k| k.d_e >= 1) {
                let v = (&h0.get(&key) - &lhs.get(&key)).scale_int(key.aut_order() as i64);
                g.insert(key, v);
            }
        }
        lo = hi + 1;
    }
    g
}

/// Single value `G(d_E, ms)`.
pub fn g_value(d_e: u32, ms: &[u32]) -> HalfLaurent {
    let key = GKey::new(d_e, ms.to_vec());
    solve_g(key.total_degree())
        .get(&key)
        .cloned()
        .unwrap_or_else(HalfLaurent::zero)
}

/// `sum (1/|Aut beta|) G(d_E, beta) prod W_{b_i}` over keys of degree `d`.
pub fn rhs_via_g(d: u32, gv: &GvTable) -> Result<HalfLaurent, SolverError> {
    let w = w_table(d.saturating_sub(3), gv)?;
    let g = solve_g(d);
    let mut total = RatFun::zero();
    for (k, v) in g.iter().filter(|(k, _)| k.total_degree() == d) {
        let mut term = RatFun::from(v.scale(&GaussRat::ratio(1, k.aut_order() as i64)));
        for &b in &k.ms {
            term = &term * &w[b as usize - 1];
        }
        total = &total + &term;
    }
    total.into_laurent().map_err(|r| SolverError::NonPolynomialRhs {
        d,
        detail: r.to_string(),
    })
}

/// Two-sided degree bound `|deg_y G| <= 9 (d_E-1)(d_E-2)/2 + (d_E-1) sum 3 b_i`
/// for `d_E >= 2`.
pub fn g_degree_bounds(d_e: u32, ms: &[u32]) -> bool {
    assert!(d_e >= 2);
    let g = g_value(d_e, ms);
    let bound = (9 * (d_e - 1) * (d_e - 2) / 2 + (d_e - 1) * 3 * ms.iter().sum::<u32>()) as i64;
    match (g.min_half(), g.max_half()) {
        (Some(lo), Some(hi)) => lo >= -2 * bound && hi <= 2 * bound,
        _ => true,
    }
}

/// Re-evaluate the untwisted form of the equation,
/// `1 + sum_{rho != 0} (-1)^{|rho|} q^{3|rho|} y^{9 c_rho} exp(sum G e_rho mono / |Aut|) = H`
/// with `e_rho = e~(rho, 3m) (y^{3m/2} - y^{-3m/2})`, and require exact equality.
pub fn residual_vanishes(dmax: u32) -> bool {
    let g = solve_g(dmax);
    let h = log_series(&g, dmax, 1).map_coeffs(|_, v| -v).exp();
    let mut lhs = Series::one(dmax);
    for n in 1..=dmax / 3 {
        let rest = dmax - 3 * n;
        let base = log_series(&g, rest, 0);
        for rho in partitions_of(n) {
            let x = base.map_coeffs(|m, v| {
                let z = 3 * m as i64;
                &(v * &e_tilde(&rho, z)) * &half_diff(z)
            });
            let w = box_sign_and_weight(&rho);
            lhs = lhs.add(&x.exp().map_coeffs(|_, v| v * &w).times_cubic(n, dmax));
        }
    }
    lhs == h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::bundled_gv;
    use crate::exactalg::quantum_integer;
    use crate::treesum::rhs_tree_sum;

    fn sq(m: i64) -> HalfLaurent {
        half_diff(m).pow(2)
    }

    #[test]
    fn cubic_degree_one() {
        assert_eq!(g_value(1, &[]), HalfLaurent::one());
        for d in 1..=4 {
            assert_eq!(g_value(1, &[d]), sq(3 * d as i64), "d = {d}");
        }
        assert_eq!(g_value(1, &[1, 2]), &sq(3) * &sq(6));
    }

    #[test]
    fn cubic_degree_two() {
        assert_eq!(g_value(2, &[]), HalfLaurent::constant(GaussRat::ratio(-3, 2)));
        for d in 1..=3 {
            assert_eq!(g_value(2, &[d]), sq(3 * d as i64).scale_int(-3));
        }
        assert_eq!(g_value(2, &[1, 1]), sq(3).pow(2).scale_int(-6));
    }

    #[test]
    fn degree_bounds_and_symmetry() {
        for m in 6..=10 {
            for key in keys_of_degree(m).into_iter().filter(|k| k.d_e >= 2) {
                assert!(g_degree_bounds(key.d_e, &key.ms), "{key:?}");
                let v = g_value(key.d_e, &key.ms);
                assert!(v.is_real() && v.is_palindromic(), "{key:?}");
            }
        }
        assert!(g_degree_bounds(3, &[]));
    }

    #[test]
    fn residual_is_zero() {
        assert!(residual_vanishes(9));
    }

    #[test]
    fn small_rhs_values() {
        let gv = bundled_gv();
        assert_eq!(rhs_via_g(3, &gv).unwrap(), HalfLaurent::one());
        assert_eq!(rhs_via_g(4, &gv).unwrap(), quantum_integer(3).pow(2).scale_int(-3));
        assert!(rhs_via_g(2, &gv).unwrap().is_zero());
    }

    #[test]
    fn agrees_with_trees_through_eight() {
        let gv = bundled_gv();
        for d in 3u32..=8 {
            let need = d.saturating_sub(3);
            if need > gv.max_degree() {
                break;
            }
            assert_eq!(rhs_via_g(d, &gv).unwrap(), rhs_tree_sum(d, &gv).unwrap(), "d = {d}");
        }
    }
}
