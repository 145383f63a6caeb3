//! Rooted trees for the graph sum and their contributions.
//!
//! A circle vertex carries a cubic class `d0 >= 1` (P2-degree `3 d0`); a
//! square vertex is a leaf carrying a line class `d1 >= 1`. The root is a
//! circle. An edge into a subtree of total degree `s` meets the cubic with
//! multiplicity `3 s`.

use std::collections::HashMap;
use std::fmt;

use crate::exactalg::{sin_factor, GaussRat, HalfLaurent, RatFun};
use crate::localcurve::{f_connected_poly, multiset_aut, MarkingList};
use crate::solver::{w_table, GvTable, SolverError};

/// Self-intersection of the cubic in P2.
const CUBIC_SELF_INTERSECTION: i64 = 9;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Node {
    Square(u32),
    /// Children are kept in non-increasing order.
    Circle(u32, Vec<Node>),
}

impl Node {
    pub fn circle(d0: u32, mut children: Vec<Node>) -> Node {
        children.sort_unstable_by(|a, b| b.cmp(a));
        Node::Circle(d0, children)
    }

    /// Total P2-degree of the subtree.
    pub fn size(&self) -> u32 {
        match self {
            Node::Square(d1) => *d1,
            Node::Circle(d0, ch) => 3 * d0 + ch.iter().map(Node::size).sum::<u32>(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        match self {
            Node::Square(_) => 1,
            Node::Circle(_, ch) => 1 + ch.iter().map(Node::vertex_count).sum::<usize>(),
        }
    }

    /// Order of the automorphism group fixing the root.
    pub fn aut_order(&self) -> u64 {
        match self {
            Node::Square(_) => 1,
            Node::Circle(_, ch) => multiset_aut(ch) * ch.iter().map(Node::aut_order).product::<u64>(),
        }
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Square(d) => write!(f, "S{d}"),
            Node::Circle(d, ch) if ch.is_empty() => write!(f, "C{d}"),
            Node::Circle(d, ch) => {
                write!(f, "C{d}[")?;
                for (i, c) in ch.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, "]")
            }
        }
    }
}

struct Enumerator {
    by_size: HashMap<u32, Vec<Node>>,
}

impl Enumerator {
    fn nodes(&mut self, size: u32) -> Vec<Node> {
        if let Some(v) = self.by_size.get(&size) {
            return v.clone();
        }
        let mut out = vec![Node::Square(size)];
        out.extend(self.circles(size));
        self.by_size.insert(size, out.clone());
        out
    }

    fn circles(&mut self, size: u32) -> Vec<Node> {
        let mut out = Vec::new();
        for d0 in 1..=size / 3 {
            let rest = size - 3 * d0;
            let mut cands: Vec<Node> = (1..=rest).flat_map(|s| self.nodes(s)).collect();
            cands.sort_unstable_by(|a, b| b.cmp(a));
            let mut cur = Vec::new();
            forests(&cands, 0, rest, &mut cur, &mut |ch| out.push(Node::Circle(d0, ch.to_vec())));
        }
        out
    }
}

/// Non-increasing sequences drawn from `cands[start..]` with sizes summing to `rest`.
fn forests(cands: &[Node], start: usize, rest: u32, cur: &mut Vec<Node>, emit: &mut dyn FnMut(&[Node])) {
    if rest == 0 {
        emit(cur);
        return;
    }
    for i in start..cands.len() {
        let s = cands[i].size();
        if s > rest {
            continue;
        }
        cur.push(cands[i].clone());
        forests(cands, i, rest - s, cur, emit);
        cur.pop();
    }
}

/// All trees of total degree `d` with a circle root, each exactly once.
pub fn enumerate_trees(d: u32) -> Vec<Node> {
    let mut e = Enumerator {
        by_size: HashMap::new(),
    };
    let mut v = e.circles(d);
    v.sort();
    v
}

/// Contribution of one tree given `W_1, ..., W_n` (index `j` holds `W_{j+1}`).
pub fn contribution(tree: &Node, w: &[RatFun]) -> RatFun {
    let mut acc = RatFun::from(HalfLaurent::constant(GaussRat::ratio(1, tree.aut_order() as i64)));
    accumulate(tree, w, &mut acc);
    acc
}

fn accumulate(node: &Node, w: &[RatFun], acc: &mut RatFun) {
    match node {
        Node::Square(d1) => *acc = &*acc * &w[*d1 as usize - 1],
        Node::Circle(d0, ch) => {
            let marks: Vec<u32> = ch.iter().map(|c| 3 * c.size()).collect();
            let f = f_connected_poly(*d0, &MarkingList::new(marks).unwrap(), CUBIC_SELF_INTERSECTION);
            let mut local = -f;
            for c in ch {
                let m = 3 * c.size() as i64;
                local = &local * &sin_factor(m).scale(&GaussRat::ratio(1, m));
            }
            *acc = &*acc * &RatFun::from(local);
            for c in ch {
                accumulate(c, w, acc);
            }
        }
    }
}

/// `RHS(d) = sum_T Cont_T`, needing invariants up to degree `d - 3`.
pub fn rhs_tree_sum(d: u32, gv: &GvTable) -> Result<HalfLaurent, SolverError> {
    let w = w_table(d.saturating_sub(3), gv)?;
    let total: RatFun = enumerate_trees(d).iter().map(|t| contribution(t, &w)).sum();
    total.into_laurent().map_err(|r| SolverError::NonPolynomialRhs {
        d,
        detail: r.to_string(),
    })
}

/// One line per tree: shape, automorphism order, contribution.
pub fn dump_trees(d: u32, gv: &GvTable) -> Result<String, SolverError> {
    let w = w_table(d.saturating_sub(3), gv)?;
    let mut out = String::new();
    for t in enumerate_trees(d) {
        out.push_str(&format!("{t}\t|Aut|={}\t{}\n", t.aut_order(), contribution(&t, &w)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::bundled_gv;
    use crate::exactalg::{delta_sq, quantum_integer};
    use std::collections::BTreeSet;

    #[test]
    fn small_counts() {
        let counts: Vec<usize> = (1..=6).map(|d| enumerate_trees(d).len()).collect();
        assert_eq!(counts, vec![0, 0, 1, 1, 2, 5]);
    }

    #[test]
    fn degree_four_and_six() {
        let gv = bundled_gv();
        let w = w_table(3, &gv).unwrap();
        let t4 = enumerate_trees(4);
        let c = contribution(&t4[0], &w);
        assert_eq!(c.as_laurent().unwrap(), &quantum_integer(3).pow(2).scale_int(-3));

        let nested = Node::circle(1, vec![Node::circle(1, vec![])]);
        assert!(enumerate_trees(6).contains(&nested));
        let c = contribution(&nested, &w);
        assert_eq!(c.as_laurent().unwrap(), &delta_sq().substitute_power(9));
    }

    #[test]
    fn automorphisms() {
        let t = Node::circle(1, vec![Node::Square(1), Node::Square(1), Node::Square(1)]);
        assert_eq!(t.aut_order(), 6);
        let t = Node::circle(1, vec![Node::circle(1, vec![Node::Square(1)]), Node::circle(1, vec![Node::Square(1)])]);
        assert_eq!(t.aut_order(), 2);
        assert_eq!(t.to_string(), "C1[C1[S1],C1[S1]]");
    }

    /// Independent count: labelled parent arrays, circle/square colourings and
    /// degree assignments, deduplicated by a nested-string canonical form.
    fn brute_force_count(d: u32) -> usize {
        fn canon(v: usize, kids: &[Vec<usize>], circle: &[bool], deg: &[u32]) -> String {
            let mut parts: Vec<String> = kids[v].iter().map(|&c| canon(c, kids, circle, deg)).collect();
            parts.sort();
            format!("{}{}({})", if circle[v] { 'c' } else { 's' }, deg[v], parts.join(""))
        }
        fn parents(n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == n {
                out.push(cur.clone());
                return;
            }
            for p in 0..cur.len() {
                cur.push(p);
                parents(n, cur, out);
                cur.pop();
            }
        }
        fn degrees(i: usize, circle: &[bool], left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if i == circle.len() {
                if left == 0 {
                    out.push(cur.clone());
                }
                return;
            }
            let w = if circle[i] { 3 } else { 1 };
            for x in 1..=left / w {
                cur.push(x);
                degrees(i + 1, circle, left - w * x, cur, out);
                cur.pop();
            }
        }
        let mut seen = BTreeSet::new();
        for n in 1..=(d as usize).min(8) {
            let mut all = Vec::new();
            // Vertex 0 is the root; entry i-1 is the parent of vertex i.
            parents(n, &mut vec![usize::MAX], &mut all);
            for par in all {
                let mut kids = vec![Vec::new(); n];
                for (i, &p) in par.iter().enumerate().skip(1) {
                    kids[p].push(i);
                }
                for mask in 0u32..(1 << n) {
                    let circle: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
                    if !circle[0] || (0..n).any(|i| !circle[i] && !kids[i].is_empty()) {
                        continue;
                    }
                    let mut ds = Vec::new();
                    degrees(0, &circle, d, &mut Vec::new(), &mut ds);
                    for deg in ds {
                        seen.insert(canon(0, &kids, &circle, &deg));
                    }
                }
            }
        }
        seen.len()
    }

    #[test]
    fn counts_match_brute_force() {
        for d in 3..=10 {
            assert_eq!(enumerate_trees(d).len(), brute_force_count(d), "d = {d}");
        }
    }

    #[test]
    fn enumeration_has_no_duplicates() {
        for d in 3..=10 {
            let v = enumerate_trees(d);
            let set: BTreeSet<_> = v.iter().cloned().collect();
            assert_eq!(set.len(), v.len());
            assert!(v.iter().all(|t| t.size() == d && matches!(t, Node::Circle(..))));
        }
    }
}
