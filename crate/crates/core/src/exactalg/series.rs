use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::AlgError;

/// Which variables a [`TwoVarSeries`] is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Vars {
    /// One variable `y`; the second exponent is always 0.
    Y,
    /// Two variables `q^a t^b`, truncated by total degree `a + b`.
    QT,
}

/// Truncated power series with rational coefficients.
///
/// Exponents are `(a, b)`; for [`Vars::Y`] only `a` is used. Individual
/// exponents may be negative, but every stored term has total degree in
/// `0..=order` so truncation commutes with multiplication.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoVarSeries {
    vars: Vars,
    order: i32,
    coeffs: BTreeMap<(i32, i32), BigRational>,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl TwoVarSeries {
    pub fn zero(vars: Vars, order: i32) -> Self {
        TwoVarSeries {
            vars,
            order,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(vars: Vars, order: i32) -> Self {
        Self::monomial(vars, order, (0, 0), BigRational::one())
    }

    pub fn monomial(vars: Vars, order: i32, exp: (i32, i32), c: BigRational) -> Self {
        let mut s = Self::zero(vars, order);
        s.add_term(exp, c);
        s
    }

    /// Series in `y` from ascending integer coefficients.
    pub fn from_y_coeffs(order: i32, coeffs: &[BigInt]) -> Self {
        let mut s = Self::zero(Vars::Y, order);
        for (j, c) in coeffs.iter().enumerate() {
            s.add_term((j as i32, 0), BigRational::from_integer(c.clone()));
        }
        s
    }

    pub fn from_y_ints(order: i32, coeffs: &[i64]) -> Self {
        let big: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
        Self::from_y_coeffs(order, &big)
    }

    /// Series from `(q, t, coefficient)` triples.
    pub fn from_qt_terms(order: i32, terms: &[(i32, i32, BigInt)]) -> Self {
        let mut s = Self::zero(Vars::QT, order);
        for (a, b, c) in terms {
            s.add_term((*a, *b), BigRational::from_integer(c.clone()));
        }
        s
    }

    pub fn vars(&self) -> Vars {
        self.vars
    }

    pub fn order(&self) -> i32 {
        self.order
    }

    pub fn degree_of(&self, e: (i32, i32)) -> i32 {
        match self.vars {
            Vars::Y => e.0,
            Vars::QT => e.0 + e.1,
        }
    }

    /// Add `c * x^e`, dropping terms above the truncation order.
    pub fn add_term(&mut self, e: (i32, i32), c: BigRational) {
        let deg = self.degree_of(e);
        assert!(deg >= 0, "series terms must have nonnegative total degree");
        if self.vars == Vars::Y {
            assert_eq!(e.1, 0, "y-series carry a single exponent");
        }
        if deg > self.order || c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(e).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    pub fn coeff(&self, e: (i32, i32)) -> BigRational {
        self.coeffs.get(&e).cloned().unwrap_or_else(BigRational::zero)
    }

    /// `[y^j]` of a single-variable series.
    pub fn y_coeff(&self, j: i32) -> BigRational {
        self.coeff((j, 0))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i32, i32), &BigRational)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Same series, re-truncated to a (smaller or equal) order.
    pub fn truncate(&self, order: i32) -> Self {
        let order = order.min(self.order);
        let mut s = Self::zero(self.vars, order);
        for (e, c) in &self.coeffs {
            s.add_term(*e, c.clone());
        }
        s
    }

    fn check_compat(&self, o: &Self) -> i32 {
        assert_eq!(self.vars, o.vars, "mixing y-series and (q,t)-series");
        self.order.min(o.order)
    }

    pub fn add(&self, o: &Self) -> Self {
        let order = self.check_compat(o);
        let mut s = self.truncate(order);
        for (e, c) in &o.coeffs {
            s.add_term(*e, c.clone());
        }
        s
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&rat(-1))
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        let mut s = Self::zero(self.vars, self.order);
        for (e, c) in &self.coeffs {
            s.add_term(*e, c * r);
        }
        s
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(&rat(n))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let order = self.check_compat(o);
        let mut s = Self::zero(self.vars, order);
        for (ea, ca) in &self.coeffs {
            let da = self.degree_of(*ea);
            for (eb, cb) in &o.coeffs {
                if da + o.degree_of(*eb) > order {
                    continue;
                }
                s.add_term((ea.0 + eb.0, ea.1 + eb.1), ca * cb);
            }
        }
        s
    }

    /// Multiply by the monomial `x^e`; `e` may lower individual exponents
    /// as long as total degrees stay nonnegative.
    pub fn shift(&self, e: (i32, i32)) -> Self {
        let mut s = Self::zero(self.vars, self.order);
        for (k, c) in &self.coeffs {
            s.add_term((k.0 + e.0, k.1 + e.1), c.clone());
        }
        s
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.vars, self.order);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplicative inverse; needs a nonzero constant term and no other
    /// terms of total degree 0.
    pub fn inverse(&self) -> Result<Self, AlgError> {
        let c0 = self.coeff((0, 0));
        if c0.is_zero() {
            return Err(AlgError::NotInvertible);
        }
        if self
            .coeffs
            .keys()
            .any(|e| *e != (0, 0) && self.degree_of(*e) == 0)
        {
            return Err(AlgError::NotInvertible);
        }
        // self = c0 (1 - x) with x of positive degree, so 1/self = sum x^n / c0.
        let inv0 = c0.recip();
        let mut x = self.scale(&(-inv0.clone()));
        x.add_term((0, 0), BigRational::one());
        let mut acc = Self::one(self.vars, self.order);
        let mut p = Self::one(self.vars, self.order);
        for _ in 0..self.order {
            p = p.mul(&x);
            if p.is_zero() {
                break;
            }
            acc = acc.add(&p);
        }
        Ok(acc.scale(&inv0))
    }

    /// Replace `x^e` by `x^{k e}` (Adams operation on the variables).
    pub fn substitute_power(&self, k: i32) -> Self {
        assert!(k >= 1);
        // known modulo degree k (order + 1)
        let mut s = Self::zero(self.vars, self.order * k + k - 1);
        for (e, c) in &self.coeffs {
            s.add_term((e.0 * k, e.1 * k), c.clone());
        }
        s
    }

    /// Specialize `q = t = u`: `q^a t^b -> u^{a+b}`. The result is a series
    /// in one variable `u`, which is `y^{1/2}` in the usual reading.
    pub fn specialize_diagonal(&self) -> Self {
        assert_eq!(self.vars, Vars::QT);
        let mut s = Self::zero(Vars::Y, self.order);
        for (e, c) in &self.coeffs {
            s.add_term((e.0 + e.1, 0), c.clone());
        }
        s
    }

    /// Lowest total degree where two series differ below `bound`, together
    /// with the differing coefficients. Compares every exponent of that
    /// degree in a fixed order.
    pub fn first_mismatch(
        &self,
        o: &Self,
        bound: i32,
    ) -> Option<((i32, i32), BigRational, BigRational)> {
        assert_eq!(self.vars, o.vars);
        let mut keys: Vec<(i32, i32)> = self
            .coeffs
            .keys()
            .chain(o.coeffs.keys())
            .copied()
            .filter(|e| self.degree_of(*e) < bound)
            .collect();
        keys.sort_by_key(|e| (self.degree_of(*e), *e));
        keys.dedup();
        keys.into_iter().find_map(|e| {
            let (a, b) = (self.coeff(e), o.coeff(e));
            (a != b).then_some((e, a, b))
        })
    }

    /// Ascending coefficients `[y^0], ..., [y^order]`.
    pub fn y_coeffs(&self) -> Vec<BigRational> {
        assert_eq!(self.vars, Vars::Y);
        (0..=self.order).map(|j| self.y_coeff(j)).collect()
    }
}

/// Expand `prod (1 - x^{m_i})^{p_i}` to the given order.
///
/// Each factor is `(exponent, power)`; factors whose monomial lies above the
/// order contribute only 1 and are skipped.
pub fn product_expand(
    vars: Vars,
    factors: &[((i32, i32), i64)],
    order: i32,
) -> Result<TwoVarSeries, AlgError> {
    let mut acc = TwoVarSeries::one(vars, order);
    for &(m, p) in factors {
        let deg = acc.degree_of(m);
        if deg <= 0 {
            return Err(AlgError::DegreeZeroFactor);
        }
        if deg > order || p == 0 {
            continue;
        }
        let base = if p > 0 {
            let mut b = TwoVarSeries::one(vars, order);
            b.add_term(m, rat(-1));
            b
        } else {
            // 1/(1 - x^m) = sum_j x^{jm}
            let mut b = TwoVarSeries::zero(vars, order);
            let mut j = 0;
            while j * deg <= order {
                b.add_term((m.0 * j, m.1 * j), BigRational::one());
                j += 1;
            }
            b
        };
        for _ in 0..p.unsigned_abs() {
            acc = acc.mul(&base);
        }
    }
    Ok(acc)
}

/// `prod_{k>=1} 1/(1-y^k)^a (1-y^{k+1})^b` to the given order.
pub fn euler_product(a: i64, b: i64, order: i32) -> TwoVarSeries {
    let mut factors = Vec::new();
    for k in 1..=order.max(1) {
        factors.push(((k, 0), -a));
        factors.push(((k + 1, 0), -b));
    }
    product_expand(Vars::Y, &factors, order).expect("factors have positive degree")
}

impl fmt::Display for TwoVarSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match self.vars {
                Vars::Y => write!(f, "{c}*y^{}", e.0)?,
                Vars::QT => write!(f, "{c}*q^{}*t^{}", e.0, e.1)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O({})", self.order + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descendent_product_low_terms() {
        let h = euler_product(2, 1, 3);
        let got: Vec<BigRational> = h.y_coeffs();
        let want: Vec<BigRational> = [1, 2, 6, 13].iter().map(|&n| rat(n)).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn empty_product_and_geometric() {
        assert_eq!(
            product_expand(Vars::Y, &[], 5).unwrap(),
            TwoVarSeries::one(Vars::Y, 5)
        );
        let g = product_expand(Vars::Y, &[((1, 0), -1)], 4).unwrap();
        assert_eq!(g, TwoVarSeries::from_y_ints(4, &[1, 1, 1, 1, 1]));
    }

    #[test]
    fn degree_zero_factor_rejected() {
        assert!(matches!(
            product_expand(Vars::QT, &[((1, -1), 1)], 4),
            Err(AlgError::DegreeZeroFactor)
        ));
    }

    #[test]
    fn inverse_of_one_minus_qt() {
        let mut s = TwoVarSeries::one(Vars::QT, 6);
        s.add_term((1, 1), rat(-1));
        let inv = s.inverse().unwrap();
        let want = product_expand(Vars::QT, &[((1, 1), -1)], 6).unwrap();
        assert_eq!(inv, want);
        assert_eq!(inv.mul(&s), TwoVarSeries::one(Vars::QT, 6));
    }

    #[test]
    fn mismatch_reports_lowest_degree() {
        let a = TwoVarSeries::from_y_ints(6, &[1, 2, 3, 4]);
        let b = TwoVarSeries::from_y_ints(6, &[1, 2, 5, 4]);
        let (e, x, y) = a.first_mismatch(&b, 6).unwrap();
        assert_eq!(e, (2, 0));
        assert_eq!((x, y), (rat(3), rat(5)));
        assert!(a.first_mismatch(&b, 2).is_none());
    }
}
