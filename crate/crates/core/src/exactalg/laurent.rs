use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::gauss::GaussRat;
use super::AlgError;

/// Laurent polynomial in `y^{1/2}` with Gaussian-rational coefficients.
///
/// Exponents are stored in half-units: index `n` means `y^{n/2}`. The
/// representation is dense from `lo` upward and always trimmed, so derived
/// equality is mathematical equality. Zero has an empty coefficient vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct HalfLaurent {
    lo: i64,
    c: Vec<GaussRat>,
}

impl HalfLaurent {
    pub fn zero() -> Self {
        HalfLaurent::default()
    }

    pub fn one() -> Self {
        Self::constant(GaussRat::one())
    }

    pub fn constant(c: GaussRat) -> Self {
        Self::monomial(0, c)
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(GaussRat::from_int(n))
    }

    /// `c * y^{half/2}`.
    pub fn monomial(half: i64, c: GaussRat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        HalfLaurent { lo: half, c: vec![c] }
    }

    /// `y^n` for an integer power `n`.
    pub fn y_pow(n: i64) -> Self {
        Self::monomial(2 * n, GaussRat::one())
    }

    /// Build from `(half_exponent, coefficient)` pairs; repeated exponents add up.
    pub fn from_terms<I: IntoIterator<Item = (i64, GaussRat)>>(terms: I) -> Self {
        let terms: Vec<(i64, GaussRat)> = terms.into_iter().collect();
        if terms.is_empty() {
            return Self::zero();
        }
        let lo = terms.iter().map(|t| t.0).min().unwrap();
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut c = vec![GaussRat::zero(); (hi - lo + 1) as usize];
        for (e, v) in &terms {
            c[(e - lo) as usize] += v;
        }
        Self::from_dense(lo, c)
    }

    /// Integer-exponent polynomial `sum coeffs[j] y^{base+j}`.
    pub fn from_y_coeffs(base: i64, coeffs: &[BigInt]) -> Self {
        Self::from_terms(
            coeffs
                .iter()
                .enumerate()
                .map(|(j, v)| (2 * (base + j as i64), GaussRat::from_bigint(v.clone()))),
        )
    }

    pub(crate) fn from_dense(lo: i64, mut c: Vec<GaussRat>) -> Self {
        while c.last().is_some_and(|v| v.is_zero()) {
            c.pop();
        }
        let lead = c.iter().take_while(|v| v.is_zero()).count();
        if lead == c.len() {
            return Self::zero();
        }
        c.drain(..lead);
        HalfLaurent {
            lo: lo + lead as i64,
            c,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.lo == 0 && self.c.len() == 1 && self.c[0].is_one()
    }

    /// Lowest half-exponent, `None` for zero.
    pub fn min_half(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.lo)
    }

    /// Highest half-exponent, `None` for zero.
    pub fn max_half(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.lo + self.c.len() as i64 - 1)
    }

    /// Coefficient of `y^{half/2}`.
    pub fn coeff(&self, half: i64) -> GaussRat {
        let idx = half - self.lo;
        if idx < 0 || idx >= self.c.len() as i64 {
            GaussRat::zero()
        } else {
            self.c[idx as usize].clone()
        }
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &GaussRat)> + '_ {
        self.c
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(move |(j, v)| (self.lo + j as i64, v))
    }

    pub fn num_terms(&self) -> usize {
        self.terms().count()
    }

    pub fn scale(&self, s: &GaussRat) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        HalfLaurent {
            lo: self.lo,
            c: self.c.iter().map(|v| v * s).collect(),
        }
    }

    pub fn scale_rat(&self, r: &BigRational) -> Self {
        self.scale(&GaussRat::real(r.clone()))
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(&GaussRat::from_int(n))
    }

    /// Multiply by `y^{half/2}`.
    pub fn shift_half(&self, half: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        HalfLaurent {
            lo: self.lo + half,
            c: self.c.clone(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Replace every `y^{n/2}` by `y^{kn/2}`. Negative `k` also inverts `y`.
    pub fn substitute_power(&self, k: i64) -> Self {
        assert!(k != 0, "substitute_power needs a nonzero factor");
        Self::from_terms(self.terms().map(|(e, v)| (e * k, v.clone())))
    }

    /// The image under `y -> y^{-1}`.
    pub fn reflect(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.c.clone();
        c.reverse();
        HalfLaurent {
            lo: -self.max_half().unwrap(),
            c,
        }
    }

    pub fn is_palindromic(&self) -> bool {
        *self == self.reflect()
    }

    /// True when every coefficient has zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.c.iter().all(GaussRat::is_real)
    }

    /// True when only integer powers of `y` occur.
    pub fn has_integer_exponents(&self) -> bool {
        self.terms().all(|(e, _)| e % 2 == 0)
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.c.iter().all(GaussRat::is_integer)
    }

    /// Member of `Z[y, y^{-1}]`.
    pub fn is_integral_laurent(&self) -> bool {
        self.has_integer_exponents() && self.has_integer_coeffs()
    }

    /// Value at `y = 1`.
    pub fn eval_at_one(&self) -> GaussRat {
        let mut s = GaussRat::zero();
        for v in &self.c {
            s += v;
        }
        s
    }

    /// Real parts as rationals, or `None` if some coefficient is not real.
    pub fn real_terms(&self) -> Option<Vec<(i64, BigRational)>> {
        if !self.is_real() {
            return None;
        }
        Some(self.terms().map(|(e, v)| (e, v.re.clone())).collect())
    }

    /// Ascending integer coefficients of `y^{-base} * self` as a polynomial in
    /// `y`, where `base` is the lowest `y`-exponent. Fails unless the value
    /// lies in `Z[y, y^{-1}]`.
    pub fn to_y_int_coeffs(&self) -> Option<(i64, Vec<BigInt>)> {
        if !self.is_integral_laurent() {
            return None;
        }
        if self.is_zero() {
            return Some((0, Vec::new()));
        }
        let lo = self.lo / 2;
        let hi = self.max_half().unwrap() / 2;
        let v = (lo..=hi)
            .map(|j| self.coeff(2 * j).re.to_integer())
            .collect();
        Some((lo, v))
    }

    /// Exact quotient `self / b`; errors if the division leaves a remainder.
    pub fn exact_div(&self, b: &HalfLaurent) -> Result<HalfLaurent, AlgError> {
        if b.is_zero() {
            return Err(AlgError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let (q, r) = poly_divrem(&self.c, &b.c);
        if !r.is_empty() {
            return Err(AlgError::NotDivisible {
                dividend: self.to_string(),
                divisor: b.to_string(),
            });
        }
        Ok(Self::from_dense(self.lo - b.lo, q))
    }

    pub(crate) fn dense(&self) -> (i64, &[GaussRat]) {
        (self.lo, &self.c)
    }
}

/// Trim trailing zeros of an ascending coefficient vector.
pub(crate) fn poly_trim(mut p: Vec<GaussRat>) -> Vec<GaussRat> {
    while p.last().is_some_and(|v| v.is_zero()) {
        p.pop();
    }
    p
}

/// Division with remainder of ascending-coefficient polynomials over `Q(i)`.
pub(crate) fn poly_divrem(a: &[GaussRat], b: &[GaussRat]) -> (Vec<GaussRat>, Vec<GaussRat>) {
    let b = poly_trim(b.to_vec());
    assert!(!b.is_empty(), "polynomial division by zero");
    let mut r = poly_trim(a.to_vec());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lead_inv = b.last().unwrap().inv();
    let mut q = vec![GaussRat::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let f = r.last().unwrap() * &lead_inv;
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                let t = &f * bj;
                r[shift + j] -= &t;
            }
        }
        q[shift] = f;
        r = poly_trim(r);
    }
    (poly_trim(q), r)
}

/// Monic gcd of ascending-coefficient polynomials over `Q(i)`.
pub(crate) fn poly_gcd(a: &[GaussRat], b: &[GaussRat]) -> Vec<GaussRat> {
    let mut x = poly_trim(a.to_vec());
    let mut y = poly_trim(b.to_vec());
    while !y.is_empty() {
        let (_, r) = poly_divrem(&x, &y);
        x = y;
        y = r;
        if let Some(l) = y.last() {
            let li = l.inv();
            y = y.iter().map(|v| v * &li).collect();
        }
    }
    if let Some(l) = x.last() {
        let li = l.inv();
        x = x.iter().map(|v| v * &li).collect();
    }
    x
}

impl<'a> Add<&'a HalfLaurent> for &'a HalfLaurent {
    type Output = HalfLaurent;
    fn add(self, o: &HalfLaurent) -> HalfLaurent {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let lo = self.lo.min(o.lo);
        let hi = self.max_half().unwrap().max(o.max_half().unwrap());
        let mut c = vec![GaussRat::zero(); (hi - lo + 1) as usize];
        for (j, v) in self.c.iter().enumerate() {
            c[(self.lo - lo) as usize + j] += v;
        }
        for (j, v) in o.c.iter().enumerate() {
            c[(o.lo - lo) as usize + j] += v;
        }
        HalfLaurent::from_dense(lo, c)
    }
}

impl<'a> Sub<&'a HalfLaurent> for &'a HalfLaurent {
    type Output = HalfLaurent;
    fn sub(self, o: &HalfLaurent) -> HalfLaurent {
        self + &(-o)
    }
}

impl<'a> Mul<&'a HalfLaurent> for &'a HalfLaurent {
    type Output = HalfLaurent;
    fn mul(self, o: &HalfLaurent) -> HalfLaurent {
        if self.is_zero() || o.is_zero() {
            return HalfLaurent::zero();
        }
        let mut c = vec![GaussRat::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let t = a * b;
                c[i + j] += &t;
            }
        }
        HalfLaurent::from_dense(self.lo + o.lo, c)
    }
}

impl Neg for &HalfLaurent {
    type Output = HalfLaurent;
    fn neg(self) -> HalfLaurent {
        HalfLaurent {
            lo: self.lo,
            c: self.c.iter().map(|v| -v).collect(),
        }
    }
}

impl Neg for HalfLaurent {
    type Output = HalfLaurent;
    fn neg(self) -> HalfLaurent {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<HalfLaurent> for HalfLaurent {
            type Output = HalfLaurent;
            fn $m(self, o: HalfLaurent) -> HalfLaurent {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a HalfLaurent> for HalfLaurent {
            type Output = HalfLaurent;
            fn $m(self, o: &HalfLaurent) -> HalfLaurent {
                (&self).$m(o)
            }
        }
        impl<'a> $tr<HalfLaurent> for &'a HalfLaurent {
            type Output = HalfLaurent;
            fn $m(self, o: HalfLaurent) -> HalfLaurent {
                self.$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl std::iter::Sum for HalfLaurent {
    fn sum<I: Iterator<Item = HalfLaurent>>(iter: I) -> HalfLaurent {
        iter.fold(HalfLaurent::zero(), |a, b| &a + &b)
    }
}

fn fmt_exp(half: i64) -> String {
    if half % 2 == 0 {
        let e = half / 2;
        if e == 1 {
            "y".to_string()
        } else {
            format!("y^{e}")
        }
    } else {
        format!("y^({half}/2)")
    }
}

impl fmt::Display for HalfLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, v) in self.terms() {
            let (neg, mag) = if v.is_real() && v.re < BigRational::zero() {
                (true, -v.clone())
            } else {
                (false, v.clone())
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            if e == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", fmt_exp(e))?;
            } else {
                write!(f, "{mag}*{}", fmt_exp(e))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn y_half(n: i64) -> HalfLaurent {
        HalfLaurent::monomial(n, GaussRat::one())
    }

    #[test]
    fn difference_of_squares() {
        let a = &y_half(1) - &y_half(-1);
        let b = &y_half(1) + &y_half(-1);
        assert_eq!(&a * &b, &HalfLaurent::y_pow(1) - &HalfLaurent::y_pow(-1));
    }

    #[test]
    fn additive_identity_and_binomial() {
        let a = &HalfLaurent::one() + &HalfLaurent::y_pow(1);
        assert_eq!(&a + &HalfLaurent::zero(), a);
        let sq = &a * &a;
        let want = HalfLaurent::from_y_coeffs(0, &[1.into(), 2.into(), 1.into()]);
        assert_eq!(sq, want);
    }

    #[test]
    fn exact_div_examples() {
        let num = &HalfLaurent::y_pow(1) - &HalfLaurent::y_pow(-1);
        let den = &y_half(1) - &y_half(-1);
        assert_eq!(num.exact_div(&den).unwrap(), &y_half(1) + &y_half(-1));

        let a = HalfLaurent::from_y_coeffs(0, &[1.into(), 1.into(), 1.into()]);
        let b = HalfLaurent::from_y_coeffs(0, &[1.into(), 1.into()]);
        assert!(matches!(a.exact_div(&b), Err(AlgError::NotDivisible { .. })));
    }

    #[test]
    fn substitution_examples() {
        let s = &y_half(1) - &y_half(-1);
        assert_eq!(s.substitute_power(3), &y_half(3) - &y_half(-3));
        assert_eq!(s.substitute_power(1), s);
        let a = &HalfLaurent::one() + &HalfLaurent::y_pow(1);
        assert_eq!(a.substitute_power(2), &HalfLaurent::one() + &HalfLaurent::y_pow(2));
    }

    #[test]
    fn palindrome_detection() {
        let centered = HalfLaurent::from_y_coeffs(-1, &[1.into(), 3.into(), 1.into()]);
        assert!(centered.is_palindromic());
        let lopsided = HalfLaurent::from_y_coeffs(0, &[1.into(), 2.into()]);
        assert!(!lopsided.is_palindromic());
    }

    #[test]
    fn display_is_readable() {
        let s = &y_half(3) - &y_half(-3);
        assert_eq!(s.to_string(), "-y^(-3/2) + y^(3/2)");
        let t = HalfLaurent::from_y_coeffs(0, &[(-2).into(), 0.into(), 5.into()]);
        assert_eq!(t.to_string(), "-2 + 5*y^2");
    }

    #[test]
    fn gcd_of_shared_factor() {
        let f = HalfLaurent::from_y_coeffs(0, &[1.into(), 1.into()]);
        let g = HalfLaurent::from_y_coeffs(0, &[(-1).into(), 1.into()]);
        let h = HalfLaurent::from_y_coeffs(0, &[2.into(), 0.into(), 1.into()]);
        let a = &f * &g;
        let b = &f * &h;
        let gc = poly_gcd(a.dense().1, b.dense().1);
        // gcd is 1 + y expressed in y^{1/2}: coefficients at 0 and 2.
        assert_eq!(HalfLaurent::from_dense(0, gc), f);
    }
}
