use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::One;

use super::gauss::GaussRat;
use super::laurent::{poly_divrem, poly_gcd, HalfLaurent};
use super::AlgError;

/// Reduced quotient of two [`HalfLaurent`] values.
///
/// Canonical form: the denominator is a polynomial in `y^{1/2}` with nonzero
/// constant term equal to 1, coprime to the numerator; every monomial factor
/// lives in the numerator. Equal functions therefore have equal fields.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFun {
    num: HalfLaurent,
    den: HalfLaurent,
}

impl RatFun {
    pub fn new(num: HalfLaurent, den: HalfLaurent) -> Result<Self, AlgError> {
        if den.is_zero() {
            return Err(AlgError::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    pub fn zero() -> Self {
        RatFun {
            num: HalfLaurent::zero(),
            den: HalfLaurent::one(),
        }
    }

    pub fn one() -> Self {
        Self::from(HalfLaurent::one())
    }

    pub fn num(&self) -> &HalfLaurent {
        &self.num
    }

    pub fn den(&self) -> &HalfLaurent {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The Laurent polynomial this equals, if the denominator is trivial.
    pub fn as_laurent(&self) -> Option<&HalfLaurent> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn into_laurent(self) -> Result<HalfLaurent, RatFun> {
        if self.den.is_one() {
            Ok(self.num)
        } else {
            Err(self)
        }
    }

    pub fn scale(&self, s: &GaussRat) -> Self {
        Self::reduce(self.num.scale(s), self.den.clone())
    }

    pub fn substitute_power(&self, k: i64) -> Self {
        Self::reduce(self.num.substitute_power(k), self.den.substitute_power(k))
    }

    pub fn recip(&self) -> Result<Self, AlgError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, n: u32) -> Self {
        // Coprime factors stay coprime under powers, so skip the gcd.
        let num = self.num.pow(n);
        let den = self.den.pow(n);
        RatFun { num, den }
    }

    fn reduce(num: HalfLaurent, den: HalfLaurent) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let (nlo, nc) = num.dense();
        let (dlo, dc) = den.dense();
        let g = poly_gcd(nc, dc);
        let (mut nq, nr) = poly_divrem(nc, &g);
        let (mut dq, dr) = poly_divrem(dc, &g);
        debug_assert!(nr.is_empty() && dr.is_empty());
        let c0 = dq[0].clone();
        if !c0.is_one() {
            let inv = c0.inv();
            nq.iter_mut().for_each(|v| *v = &*v * &inv);
            dq.iter_mut().for_each(|v| *v = &*v * &inv);
        }
        RatFun {
            num: HalfLaurent::from_dense(nlo - dlo, nq),
            den: HalfLaurent::from_dense(0, dq),
        }
    }
}

impl From<HalfLaurent> for RatFun {
    fn from(h: HalfLaurent) -> Self {
        RatFun {
            num: h,
            den: HalfLaurent::one(),
        }
    }
}

impl Default for RatFun {
    fn default() -> Self {
        Self::zero()
    }
}

impl<'a> Add<&'a RatFun> for &'a RatFun {
    type Output = RatFun;
    fn add(self, o: &RatFun) -> RatFun {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return RatFun::reduce(&self.num + &o.num, self.den.clone());
        }
        RatFun::reduce(
            &(&self.num * &o.den) + &(&o.num * &self.den),
            &self.den * &o.den,
        )
    }
}

impl<'a> Sub<&'a RatFun> for &'a RatFun {
    type Output = RatFun;
    fn sub(self, o: &RatFun) -> RatFun {
        self + &(-o)
    }
}

impl<'a> Mul<&'a RatFun> for &'a RatFun {
    type Output = RatFun;
    fn mul(self, o: &RatFun) -> RatFun {
        if self.is_zero() || o.is_zero() {
            return RatFun::zero();
        }
        RatFun::reduce(&self.num * &o.num, &self.den * &o.den)
    }
}

impl<'a> Div<&'a RatFun> for &'a RatFun {
    type Output = RatFun;
    fn div(self, o: &RatFun) -> RatFun {
        assert!(!o.is_zero(), "RatFun division by zero");
        RatFun::reduce(&self.num * &o.den, &self.den * &o.num)
    }
}

impl Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<RatFun> for RatFun {
            type Output = RatFun;
            fn $m(self, o: RatFun) -> RatFun {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a RatFun> for RatFun {
            type Output = RatFun;
            fn $m(self, o: &RatFun) -> RatFun {
                (&self).$m(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl std::iter::Sum for RatFun {
    fn sum<I: Iterator<Item = RatFun>>(iter: I) -> RatFun {
        iter.fold(RatFun::zero(), |a, b| &a + &b)
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(m: i64) -> HalfLaurent {
        &HalfLaurent::monomial(m, GaussRat::one()) - &HalfLaurent::monomial(-m, GaussRat::one())
    }

    #[test]
    fn cancels_common_factor() {
        let r = RatFun::new(s(3), s(1)).unwrap();
        let q = r.as_laurent().expect("[3] is a polynomial");
        assert_eq!(q, &HalfLaurent::from_y_coeffs(-1, &[1.into(), 1.into(), 1.into()]));
    }

    #[test]
    fn canonical_representatives_agree() {
        let a = RatFun::new(HalfLaurent::one(), s(1)).unwrap();
        let b = RatFun::new(s(1), &s(1) * &s(1)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.den().coeff(0), GaussRat::one());
    }

    #[test]
    fn sum_of_partial_fractions() {
        let a = RatFun::new(HalfLaurent::one(), s(1)).unwrap();
        let minus = -&a;
        assert!((&a + &minus).is_zero());
        let two = &a + &a;
        assert_eq!(two, RatFun::new(HalfLaurent::from_int(2), s(1)).unwrap());
    }
}
