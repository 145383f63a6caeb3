//! Stationary Gromov-Witten series of a twisted local elliptic curve.
//!
//! The disconnected series has the closed form
//! `sum_{|rho| = d} (-1)^{k d} y^{k c_rho} prod_i (-m_i) e~(rho, m_i) / i`
//! where `k` is the self-intersection of the curve class (9 for a cubic in
//! P2). Connected series are extracted by the exponential formula, with the
//! convention that every connected component has positive degree.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use thiserror::Error;

use crate::exactalg::{sin_factor, GaussRat, HalfLaurent, RatFun};
use crate::partitions::{content_sum, e_tilde, partitions_of};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LocalCurveError {
    #[error("connected series at degree 0 with no markings is undefined")]
    EmptyDegreeZero,
    #[error("marking entries must be positive")]
    NonPositiveMarking,
}

/// Multiset of positive intersection numbers, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MarkingList(Vec<u32>);

impl MarkingList {
    pub fn new(mut ms: Vec<u32>) -> Result<Self, LocalCurveError> {
        if ms.iter().any(|&m| m == 0) {
            return Err(LocalCurveError::NonPositiveMarking);
        }
        ms.sort_unstable();
        Ok(MarkingList(ms))
    }

    pub fn empty() -> Self {
        MarkingList(Vec::new())
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Product of factorials of the multiplicities.
    pub fn aut_order(&self) -> u64 {
        multiset_aut(&self.0)
    }
}

impl From<&[u32]> for MarkingList {
    fn from(ms: &[u32]) -> Self {
        MarkingList::new(ms.to_vec()).expect("markings must be positive")
    }
}

/// Product of factorials of multiplicities in a sorted slice.
pub fn multiset_aut<T: PartialEq>(sorted: &[T]) -> u64 {
    let mut aut = 1u64;
    let mut run = 0u64;
    for (i, v) in sorted.iter().enumerate() {
        if i > 0 && sorted[i - 1] == *v {
            run += 1;
        } else {
            run = 1;
        }
        aut *= run;
    }
    aut
}

type Key = (u32, Vec<u32>, i64);

fn disc_cache() -> &'static RwLock<HashMap<Key, HalfLaurent>> {
    static C: OnceLock<RwLock<HashMap<Key, HalfLaurent>>> = OnceLock::new();
    C.get_or_init(Default::default)
}

fn conn_cache() -> &'static RwLock<HashMap<Key, HalfLaurent>> {
    static C: OnceLock<RwLock<HashMap<Key, HalfLaurent>>> = OnceLock::new();
    C.get_or_init(Default::default)
}

/// Disconnected series `F^bullet_{d_E, ms}` for `d_E >= 1`.
pub fn f_disconnected(d_e: u32, ms: &MarkingList, k: i64) -> HalfLaurent {
    assert!(d_e >= 1, "disconnected series needs positive degree");
    disconnected_raw(d_e, ms.as_slice(), k)
}

fn disconnected_raw(d_e: u32, ms: &[u32], k: i64) -> HalfLaurent {
    let key = (d_e, ms.to_vec(), k);
    if let Some(v) = disc_cache().read().unwrap().get(&key) {
        return v.clone();
    }
    let sign = if (k * d_e as i64) % 2 == 0 { 1 } else { -1 };
    let mut total = HalfLaurent::zero();
    for rho in partitions_of(d_e) {
        let mut term = HalfLaurent::monomial(2 * k * content_sum(&rho), GaussRat::from_int(sign));
        for &m in ms {
            // (-m) / i = m * i
            let f = e_tilde(&rho, m as i64).scale(&GaussRat::imag_int(m as i64));
            term = &term * &f;
            if term.is_zero() {
                break;
            }
        }
        total = &total + &term;
    }
    disc_cache().write().unwrap().insert(key, total.clone());
    total
}

/// Connected series. At `d_E = 0` only a single marking contributes,
/// `m i / (y^{m/2} - y^{-m/2})`; for `d_E >= 1` the value is a Laurent
/// polynomial.
pub fn f_connected(d_e: u32, ms: &MarkingList, k: i64) -> Result<RatFun, LocalCurveError> {
    if d_e == 0 {
        return match ms.as_slice() {
            [] => Err(LocalCurveError::EmptyDegreeZero),
            [m] => Ok(RatFun::new(
                HalfLaurent::constant(GaussRat::imag_int(*m as i64)),
                crate::exactalg::half_diff(*m as i64),
            )
            .expect("nonzero denominator")),
            _ => Ok(RatFun::zero()),
        };
    }
    Ok(RatFun::from(f_connected_poly(d_e, ms, k)))
}

/// Connected series for `d_E >= 1` as a Laurent polynomial.
pub fn f_connected_poly(d_e: u32, ms: &MarkingList, k: i64) -> HalfLaurent {
    assert!(d_e >= 1);
    connected_raw(d_e, ms.as_slice(), k)
}

fn disconnected_or_unit(d: u32, ms: &[u32], k: i64) -> Option<HalfLaurent> {
    match (d, ms.is_empty()) {
        (0, true) => Some(HalfLaurent::one()),
        (0, false) => None,
        _ => Some(disconnected_raw(d, ms, k)),
    }
}

fn connected_raw(d: u32, ms: &[u32], k: i64) -> HalfLaurent {
    let key = (d, ms.to_vec(), k);
    if let Some(v) = conn_cache().read().unwrap().get(&key) {
        return v.clone();
    }
    let full = disconnected_raw(d, ms, k);
    let value = if ms.is_empty() {
        // d F^bullet_d = sum_j j F_j F^bullet_{d-j}
        let mut acc = full.scale_int(d as i64);
        for j in 1..d {
            let fj = connected_raw(j, &[], k);
            let rest = disconnected_or_unit(d - j, &[], k).unwrap();
            acc = &acc - &(&fj * &rest).scale_int(j as i64);
        }
        acc.scale(&GaussRat::ratio(1, d as i64))
    } else {
        // Peel off the component carrying the first marking.
        let n = ms.len();
        let mut acc = full;
        for mask in 0u32..(1 << (n - 1)) {
            let mut block = vec![ms[0]];
            let mut rest = Vec::new();
            for (idx, &m) in ms.iter().enumerate().skip(1) {
                if mask >> (idx - 1) & 1 == 1 {
                    block.push(m);
                } else {
                    rest.push(m);
                }
            }
            for d1 in 1..=d {
                if rest.is_empty() && d1 == d {
                    continue;
                }
                let Some(other) = disconnected_or_unit(d - d1, &rest, k) else {
                    continue;
                };
                let c = connected_raw(d1, &block, k);
                acc = &acc - &(&c * &other);
            }
        }
        acc
    };
    conn_cache().write().unwrap().insert(key, value.clone());
    value
}

/// True iff the disconnected series is divisible by
/// `prod_i (y^{m_i/2} - y^{-m_i/2}) / i` with a quotient in `Q[y, y^{-1}]`.
pub fn check_divisibility(d_e: u32, ms: &MarkingList, k: i64) -> bool {
    let f = f_disconnected(d_e, ms, k);
    let divisor = ms
        .as_slice()
        .iter()
        .fold(HalfLaurent::one(), |acc, &m| &acc * &sin_factor(m as i64));
    match f.exact_div(&divisor) {
        Ok(q) => q.is_real() && q.has_integer_exponents(),
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{half_diff, quantum_integer};
    use num_traits::Zero;

    fn ml(v: &[u32]) -> MarkingList {
        MarkingList::from(v)
    }

    #[test]
    fn degree_one_values() {
        assert_eq!(f_disconnected(1, &ml(&[]), 9), HalfLaurent::from_int(-1));
        let v = f_disconnected(1, &ml(&[3]), 9);
        let vi = v.scale(&GaussRat::i());
        assert_eq!(vi, half_diff(3).scale_int(3));
    }

    #[test]
    fn degree_two_empty() {
        let want = &HalfLaurent::y_pow(9) + &HalfLaurent::y_pow(-9);
        assert_eq!(f_disconnected(2, &ml(&[]), 9), want);
        let conn = f_connected(2, &ml(&[]), 9).unwrap();
        let want_c = &want - &HalfLaurent::constant(GaussRat::ratio(1, 2));
        assert_eq!(conn.as_laurent().unwrap(), &want_c);
    }

    #[test]
    fn degree_one_is_connected() {
        for ms in [vec![], vec![3], vec![3, 6], vec![1, 2, 4]] {
            let m = ml(&ms);
            assert_eq!(f_connected_poly(1, &m, 9), f_disconnected(1, &m, 9));
        }
    }

    #[test]
    fn degree_zero_single_marking() {
        for m in 1..6u32 {
            let f = f_connected(0, &ml(&[m]), 9).unwrap();
            let back = &f * &RatFun::from(half_diff(m as i64));
            assert_eq!(back.as_laurent().unwrap(), &HalfLaurent::constant(GaussRat::imag_int(m as i64)));
        }
        assert!(f_connected(0, &ml(&[2, 3]), 9).unwrap().is_zero());
        assert_eq!(f_connected(0, &ml(&[]), 9), Err(LocalCurveError::EmptyDegreeZero));
    }

    #[test]
    fn divisibility_examples() {
        assert!(check_divisibility(1, &ml(&[3]), 9));
        assert!(check_divisibility(3, &ml(&[3, 6]), 9));
        assert!(check_divisibility(2, &ml(&[1, 1, 1]), 9));
    }

    #[test]
    fn circle_with_one_edge_matches_quantum_square() {
        // sin(3)/3 * (-F_{1,{3}}) * W_1 with W_1 = -3/(y^{1/2}-y^{-1/2})^2 gives -3[3]^2.
        let f = f_connected_poly(1, &ml(&[3]), 9);
        let lhs = (&sin_factor(3) * &f).scale(&GaussRat::ratio(-1, 3)).scale_int(-3);
        let want = quantum_integer(3).pow(2).scale_int(-3);
        assert_eq!(lhs.exact_div(&half_diff(1).pow(2)).unwrap(), want);
    }

    #[test]
    fn marking_list_canonical() {
        let a = MarkingList::new(vec![6, 3, 3]).unwrap();
        assert_eq!(a.as_slice(), &[3, 3, 6]);
        assert_eq!(a.aut_order(), 2);
        assert!(MarkingList::new(vec![0]).is_err());
        assert!(f_disconnected(2, &a, 9).eval_at_one().is_zero());
    }
}
