//! Integer partitions, box contents and the row sum `e~(rho, m)`.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_traits::One;

use crate::exactalg::{GaussRat, HalfLaurent};

/// Weakly decreasing sequence of positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Panics unless `parts` is weakly decreasing and positive.
    pub fn new(parts: Vec<u32>) -> Self {
        assert!(parts.iter().all(|&p| p > 0), "parts must be positive");
        assert!(parts.windows(2).all(|w| w[0] >= w[1]), "parts must be non-increasing");
        Partition(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Transpose of the Young diagram.
    pub fn conjugate(&self) -> Partition {
        let first = self.0.first().copied().unwrap_or(0);
        Partition(
            (1..=first)
                .map(|j| self.0.iter().filter(|&&p| p >= j).count() as u32)
                .collect(),
        )
    }

    /// Contents `j - i` of all boxes, rows first (0-based positions).
    pub fn contents(&self) -> impl Iterator<Item = i64> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(i, &p)| (0..p as i64).map(move |j| j - i as i64))
    }
}

fn cache() -> &'static RwLock<HashMap<u32, Vec<Partition>>> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Vec<Partition>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// All partitions of `n` in lexicographically decreasing order.
/// `partitions_of(0)` is the single empty partition.
pub fn partitions_of(n: u32) -> Vec<Partition> {
    if let Some(v) = cache().read().unwrap().get(&n) {
        return v.clone();
    }
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fill(n, n, &mut cur, &mut out);
    cache().write().unwrap().insert(n, out.clone());
    out
}

fn fill(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(Partition(cur.clone()));
        return;
    }
    for p in (1..=max.min(rest)).rev() {
        cur.push(p);
        fill(rest - p, p, cur, out);
        cur.pop();
    }
}

/// Sum of the contents of all boxes.
pub fn content_sum(rho: &Partition) -> i64 {
    rho.contents().sum()
}

/// `e~(rho, z)` at `z = m i hbar`:
/// `sum_i (y^{m(rho_i - i + 1/2)} - y^{m(-i + 1/2)})` over nonzero rows,
/// with rows indexed from 1. The tail rows cancel termwise.
pub fn e_tilde(rho: &Partition, m: i64) -> HalfLaurent {
    let terms = rho.parts().iter().enumerate().flat_map(|(idx, &p)| {
        let i = idx as i64 + 1;
        [
            (m * (2 * p as i64 - 2 * i + 1), GaussRat::one()),
            (m * (1 - 2 * i), -GaussRat::one()),
        ]
    });
    HalfLaurent::from_terms(terms)
}
