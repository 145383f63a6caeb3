//! Exact arithmetic: Gaussian rationals, Laurent polynomials in `y^{1/2}`,
//! reduced rational functions and truncated power series.
//!
//! Nothing here rounds. The series variable `y` stands for `e^{i hbar}`, so
//! every sine factor becomes a Laurent polynomial with a factor of `i`.

mod gauss;
mod laurent;
mod ratfun;
mod series;

pub use gauss::GaussRat;
pub use laurent::HalfLaurent;
pub use ratfun::RatFun;
pub use series::{euler_product, product_expand, TwoVarSeries, Vars};

use num_traits::One;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgError {
    #[error("exact division failed: ({dividend}) is not divisible by ({divisor})")]
    NotDivisible { dividend: String, divisor: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("series has no inverse at this truncation")]
    NotInvertible,
    #[error("product factor has a monomial of degree zero")]
    DegreeZeroFactor,
}

/// `y^{m/2} - y^{-m/2}`.
pub fn half_diff(m: i64) -> HalfLaurent {
    &HalfLaurent::monomial(m, GaussRat::one()) - &HalfLaurent::monomial(-m, GaussRat::one())
}

/// `2 sin(m hbar / 2)` after `y = e^{i hbar}`, i.e. the value `s` with
/// `s * i = y^{m/2} - y^{-m/2}`.
pub fn sin_factor(m: i64) -> HalfLaurent {
    assert!(m != 0, "sin_factor(0) vanishes identically");
    half_diff(m).scale(&-GaussRat::i())
}

/// `[m] = (y^{m/2} - y^{-m/2}) / (y^{1/2} - y^{-1/2})`.
pub fn quantum_integer(m: i64) -> HalfLaurent {
    assert!(m >= 1, "quantum_integer needs m >= 1");
    HalfLaurent::from_terms((0..m).map(|j| (m - 1 - 2 * j, GaussRat::one())))
}

/// `(y^{1/2} - y^{-1/2})^2 = y - 2 + y^{-1}`.
pub fn delta_sq() -> HalfLaurent {
    half_diff(1).pow(2)
}

pub fn is_palindromic(a: &HalfLaurent) -> bool {
    a.is_palindromic()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sin_factor_square() {
        let s1 = sin_factor(1);
        let want = HalfLaurent::from_y_coeffs(-1, &[(-1).into(), 2.into(), (-1).into()]);
        assert_eq!(&s1 * &s1, want);
        assert_eq!(&sin_factor(1) * &GaussRat::i().into_laurent(), half_diff(1));
    }

    #[test]
    fn sin_factor_ratio_and_oddness() {
        let q = sin_factor(3).exact_div(&sin_factor(1)).unwrap();
        assert_eq!(q, HalfLaurent::from_y_coeffs(-1, &[1.into(), 1.into(), 1.into()]));
        for m in 1..6 {
            assert_eq!(sin_factor(-m), -sin_factor(m));
        }
    }

    #[test]
    fn quantum_integer_examples() {
        assert_eq!(
            quantum_integer(3),
            HalfLaurent::from_y_coeffs(-1, &[1.into(), 1.into(), 1.into()])
        );
        assert!(quantum_integer(1).is_one());
        assert_eq!(quantum_integer(12).eval_at_one(), GaussRat::from_int(12));
        for m in 1..=50 {
            let q = quantum_integer(m);
            assert!(is_palindromic(&q));
            assert_eq!(q.num_terms() as i64, m);
            assert_eq!(half_diff(m).exact_div(&half_diff(1)).unwrap(), q);
        }
    }

    trait IntoLaurent {
        fn into_laurent(self) -> HalfLaurent;
    }
    impl IntoLaurent for GaussRat {
        fn into_laurent(self) -> HalfLaurent {
            HalfLaurent::constant(self)
        }
    }
}
