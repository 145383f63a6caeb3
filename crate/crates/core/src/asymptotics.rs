//! Leading Betti numbers: the closed series for the top invariants, the
//! degree-bound corrections `X_d`, `Y_d`, and truncated comparisons of
//! `Omega^_d` against the leading-term formulas.

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use serde::Serialize;
use thiserror::Error;

use crate::exactalg::{euler_product, half_diff, quantum_integer, GaussRat, HalfLaurent, TwoVarSeries, Vars};
use crate::solver::{f_curly, genus, normalized_omega, GvTable, OmegaHat, OmegaPoly, SolverError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AsymptoticsError {
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("{which}_{d} has y-degree {degree} outside [-{bound}, {bound}]")]
    DegreeBoundViolated {
        which: &'static str,
        d: u32,
        degree: i64,
        bound: i64,
    },
    #[error("{which}_{d} is not a palindromic integer Laurent polynomial in y")]
    Malformed { which: &'static str, d: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub exponent: i32,
    pub got: String,
    pub want: String,
}

/// Outcome of comparing two series modulo `y^order`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TruncatedCheckReport {
    pub name: String,
    pub d: u32,
    /// Exponents `0..order` were compared.
    pub order: i32,
    pub pass: bool,
    pub mismatch: Option<Mismatch>,
}

impl TruncatedCheckReport {
    pub fn compare(name: &str, d: u32, got: &TwoVarSeries, want: &TwoVarSeries, order: i32) -> Self {
        assert!(
            got.order() >= order - 1 && want.order() >= order - 1,
            "series too short for a comparison modulo y^{order}"
        );
        let mismatch = got.first_mismatch(want, order).map(|(e, a, b)| Mismatch {
            exponent: e.0 + e.1,
            got: a.to_string(),
            want: b.to_string(),
        });
        TruncatedCheckReport {
            name: name.to_string(),
            d,
            order,
            pass: mismatch.is_none(),
            mismatch,
        }
    }
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn poly(coeffs: &[i64], order: i32) -> TwoVarSeries {
    TwoVarSeries::from_y_ints(order, coeffs)
}

fn mono(e: i32, c: i64, order: i32) -> TwoVarSeries {
    TwoVarSeries::monomial(Vars::Y, order, (e, 0), int(c))
}

fn recip(s: &TwoVarSeries) -> TwoVarSeries {
    s.inverse().expect("unit constant term")
}

/// `sum_{i >= 1} y^i / (1 - y^i)^2 = sum_{i, j >= 1} j y^{i j}`.
fn lambert(order: i32) -> TwoVarSeries {
    let mut s = TwoVarSeries::zero(Vars::Y, order);
    for i in 1..=order {
        let mut j = 1;
        while i * j <= order {
            s.add_term((i * j, 0), int(j as i64));
            j += 1;
        }
    }
    s
}

/// `prod_{k >= 1} 1 / (1 - y^k)^3`.
fn cube_euler(order: i32) -> TwoVarSeries {
    euler_product(3, 0, order)
}

/// `Z_d = (1-y)^2 / prod (1-y^k)^3 * (C(d+2, 2) - 3 sum y^i/(1-y^i)^2)`.
pub fn z_series(d: u32, order: i32) -> TwoVarSeries {
    let c = binomial(d as i64 + 2, 2);
    let inner = poly(&[c], order).sub(&lambert(order).scale_int(3));
    poly(&[1, -2, 1], order).mul(&cube_euler(order)).mul(&inner)
}

/// `Z'_d = (1-y^3) / prod (1-y^k)^3 * (C(d+1, 2) - 3 sum y^i/(1-y^i)^2 - 3 y^3/(1-y^3))`.
pub fn zprime_series(d: u32, order: i32) -> TwoVarSeries {
    let c = binomial(d as i64 + 1, 2);
    let one_minus_y3 = poly(&[1, 0, 0, -1], order);
    let tail = mono(3, 3, order).mul(&recip(&one_minus_y3));
    let inner = poly(&[c], order).sub(&lambert(order).scale_int(3)).sub(&tail);
    one_minus_y3.mul(&cube_euler(order)).mul(&inner)
}

/// `prod_{k >= 1} 1 / ((1-y^k)(1-y^{k+1})^2)`.
pub fn leading_product(order: i32) -> TwoVarSeries {
    euler_product(1, 2, order)
}

/// `(Z_d - Z_{d-3}) / (3d) = prod 1/((1-y^k)(1-y^{k+1})^2)`, `d >= 4`.
pub fn lemma_difference_check(d: u32, order: i32) -> TruncatedCheckReport {
    assert!(d >= 4);
    let lhs = z_series(d, order)
        .sub(&z_series(d - 3, order))
        .scale(&BigRational::new(1.into(), (3 * d as i64).into()));
    TruncatedCheckReport::compare("z-difference", d, &lhs, &leading_product(order), order + 1)
}

/// `(-y^{d-1} Z'_d + y^{d-4} Z'_{d-3} - y^{d-4}(1+y+y^2)^2 Z_{d-4}) / (3d)
///  = -y^{d-1}(1+y+y^2) / prod (1-y^k)^2 (1-y^{k+1})`, `d >= 5`.
pub fn lemma_prime_check(d: u32, order: i32) -> TruncatedCheckReport {
    assert!(d >= 5);
    let e = d as i32;
    let lhs = zprime_series(d, order)
        .shift((e - 1, 0))
        .scale_int(-1)
        .add(&zprime_series(d - 3, order).shift((e - 4, 0)))
        .sub(&poly(&[1, 2, 3, 2, 1], order).mul(&z_series(d - 4, order)).shift((e - 4, 0)))
        .scale(&BigRational::new(1.into(), (3 * d as i64).into()));
    let rhs = euler_product(2, 1, order)
        .mul(&poly(&[1, 1, 1], order))
        .shift((e - 1, 0))
        .scale_int(-1);
    TruncatedCheckReport::compare("z-prime-combination", d, &lhs, &rhs, order + 1)
}

fn laurent_to_series(p: &HalfLaurent, order: i32) -> Option<TwoVarSeries> {
    let (lo, coeffs) = p.to_y_int_coeffs()?;
    if lo < 0 {
        return None;
    }
    let mut s = TwoVarSeries::zero(Vars::Y, order);
    for (j, c) in coeffs.into_iter().enumerate() {
        s.add_term((lo as i32 + j as i32, 0), BigRational::from_integer(c));
    }
    Some(s)
}

/// `(-1)^{d-1} y^{g(d)} F_d`, an integer polynomial in `y`.
fn shifted_curly(d: u32, gv: &GvTable, order: i32) -> Result<TwoVarSeries, SolverError> {
    let sign = if d % 2 == 1 { 1 } else { -1 };
    let p = f_curly(d, gv)?.shift_half(2 * genus(d) as i64).scale_int(sign);
    Ok(laurent_to_series(&p, order).expect("y^{g(d)} F_d is a polynomial"))
}

/// The two memberships for the top invariants:
/// `(-1)^{d-1} y^{g(d)} F_d - Z_d` in `y^{d-1} Z[[y]]`, and for `d >= 3`
/// the same plus `3 y^{d-1} Z'_d` in `y^{2d-4} Z[[y]]`.
pub fn gv_leading_check(d: u32, gv: &GvTable, order: i32) -> Result<Vec<TruncatedCheckReport>, SolverError> {
    let lhs = shifted_curly(d, gv, order)?;
    let z = z_series(d, order);
    let e = d as i32;
    let mut out = vec![TruncatedCheckReport::compare(
        "gv-leading",
        d,
        &lhs,
        &z,
        (e - 1).min(order + 1),
    )];
    if d >= 3 {
        let want = z.sub(&zprime_series(d, order).shift((e - 1, 0)).scale_int(3));
        out.push(TruncatedCheckReport::compare(
            "gv-subleading",
            d,
            &lhs,
            &want,
            (2 * e - 4).min(order + 1),
        ));
    }
    Ok(out)
}

fn curly_or_zero(d: i64, gv: &GvTable) -> Result<HalfLaurent, SolverError> {
    if d <= 0 {
        Ok(HalfLaurent::zero())
    } else {
        f_curly(d as u32, gv)
    }
}

/// `X_d = 3d (-1)^{d+1} Omega_d / [3d] - F_d - (y^{3(d-3)/2} - y^{-3(d-3)/2})^2 F_{d-3}`.
pub fn x_d(omega: &OmegaPoly, gv: &GvTable) -> Result<HalfLaurent, AsymptoticsError> {
    let d = omega.d as i64;
    let a = normalized_omega(omega)?;
    let corr = &half_diff(3 * (d - 3)).pow(2) * &curly_or_zero(d - 3, gv)?;
    Ok(&(&a - &f_curly(omega.d, gv)?) - &corr)
}

/// `Y_d = X_d + n_{0,1} [3]^2 (y^{3(d-4)/2} - y^{-3(d-4)/2})^2 F_{d-4}`.
pub fn y_d(omega: &OmegaPoly, gv: &GvTable) -> Result<HalfLaurent, AsymptoticsError> {
    let d = omega.d as i64;
    let n01 = GaussRat::from_bigint(gv.get(1, 0));
    let corr = (&(&quantum_integer(3).pow(2) * &half_diff(3 * (d - 4)).pow(2)) * &curly_or_zero(d - 4, gv)?).scale(&n01);
    Ok(&x_d(omega, gv)? + &corr)
}

fn check_bound(which: &'static str, d: u32, p: &HalfLaurent, bound: i64) -> Result<(), AsymptoticsError> {
    if !p.is_integral_laurent() || !p.is_palindromic() {
        return Err(AsymptoticsError::Malformed { which, d });
    }
    let degree = p.max_half().map_or(0, |h| h / 2);
    if degree > bound {
        return Err(AsymptoticsError::DegreeBoundViolated {
            which,
            d,
            degree,
            bound,
        });
    }
    Ok(())
}

/// `|deg X_d| <= g(d) - d + 4` for `d >= 5`.
pub fn x_bound_check(omega: &OmegaPoly, gv: &GvTable) -> Result<HalfLaurent, AsymptoticsError> {
    let d = omega.d;
    let x = x_d(omega, gv)?;
    if d >= 5 {
        check_bound("X", d, &x, genus(d) as i64 - d as i64 + 4)?;
    }
    Ok(x)
}

/// `|deg Y_d| <= g(d) - 2d + 10` for `d >= 6`.
pub fn y_bound_check(omega: &OmegaPoly, gv: &GvTable) -> Result<HalfLaurent, AsymptoticsError> {
    let d = omega.d;
    let y = y_d(omega, gv)?;
    if d >= 6 {
        check_bound("Y", d, &y, genus(d) as i64 - 2 * d as i64 + 10)?;
    }
    Ok(y)
}

/// `(1 + y + y^2) / (1 - y)`.
fn triangle_over_line(order: i32) -> TwoVarSeries {
    poly(&[1, 1, 1], order).mul(&recip(&poly(&[1, -1], order)))
}

/// `f(y) = (1+y+y^2)(-2+2y+4y^2+2y^3+y^4+2y^5) / ((1-y)(1-y^2))`.
pub fn f_series(order: i32) -> TwoVarSeries {
    poly(&[1, 1, 1], order)
        .mul(&poly(&[-2, 2, 4, 2, 1, 2], order))
        .mul(&recip(&poly(&[1, -1, -1, 1], order)))
}

/// `prod 1/((1-y^k)(1-y^{k+1})^2) (1 - 3 y^{d-1} (1+y+y^2)/(1-y))`.
pub fn leading_formula(d: u32, order: i32) -> TwoVarSeries {
    let corr = triangle_over_line(order).shift((d as i32 - 1, 0)).scale_int(3);
    leading_product(order).mul(&poly(&[1], order).sub(&corr))
}

/// The leading formula plus `3 y^{2d-4} f(y)` inside the bracket.
pub fn second_order_formula(d: u32, order: i32) -> TwoVarSeries {
    let extra = leading_product(order).mul(&f_series(order).shift((2 * d as i32 - 4, 0)).scale_int(3));
    leading_formula(d, order).add(&extra)
}

/// `prod 1/((1-y^k)(1-y^{k+1})^2) (1 - 3 y^{d-1} - 6 y^d)`.
pub fn hilbert_range_formula(d: u32, order: i32) -> TwoVarSeries {
    let e = d as i32;
    let bracket = poly(&[1], order).sub(&mono(e - 1, 3, order)).sub(&mono(e, 6, order));
    leading_product(order).mul(&bracket)
}

fn hat_series(hat: &OmegaHat, order: i32) -> TwoVarSeries {
    TwoVarSeries::from_y_coeffs(order, &hat.coeffs)
}

/// Proven range (mod `y^{2d-10}`) and the observed extension (mod `y^{2d-4}`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LeadingReport {
    pub proven: TruncatedCheckReport,
    pub extended: TruncatedCheckReport,
}

/// Compare `Omega^_d` with the leading formula, `d >= 6`.
pub fn leading_check(hat: &OmegaHat) -> LeadingReport {
    let d = hat.d;
    assert!(d >= 6);
    let order = 2 * d as i32 - 4;
    let got = hat_series(hat, order);
    let want = leading_formula(d, order);
    LeadingReport {
        proven: TruncatedCheckReport::compare("leading", d, &got, &want, 2 * d as i32 - 10),
        extended: TruncatedCheckReport::compare("leading-extended", d, &got, &want, order),
    }
}

/// Compare `Omega^_d` with the second-order formula mod `y^{3d-9}`, `d >= 4`.
pub fn second_order_check(hat: &OmegaHat) -> TruncatedCheckReport {
    let d = hat.d;
    assert!(d >= 4);
    let order = 3 * d as i32 - 9;
    TruncatedCheckReport::compare("second-order", d, &hat_series(hat, order), &second_order_formula(d, order), order)
}

/// Compare `Omega^_d` with the Hilbert-scheme range formula mod `y^{d+1}`, `d >= 5`.
pub fn hilbert_range_check(hat: &OmegaHat) -> TruncatedCheckReport {
    let d = hat.d;
    assert!(d >= 5);
    let order = d as i32 + 1;
    TruncatedCheckReport::compare("hilbert-range", d, &hat_series(hat, order), &hilbert_range_formula(d, order), order)
}

/// The two formulas agree through `y^{2d-5}` since `f` enters at `y^{2d-4}`.
pub fn formulas_agree_check(d: u32) -> TruncatedCheckReport {
    let order = 2 * d as i32 - 4;
    TruncatedCheckReport::compare(
        "formulas-agree",
        d,
        &leading_formula(d, order),
        &second_order_formula(d, order),
        order,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{bundled_gv, bundled_omega_hat};
    use crate::exactalg::delta_sq;
    use crate::solver::omega_from_hat;

    #[test]
    fn z_constant_terms() {
        for d in 1..8 {
            assert_eq!(z_series(d, 5).y_coeff(0), int(binomial(d as i64 + 2, 2)));
            assert_eq!(zprime_series(d, 5).y_coeff(0), int(binomial(d as i64 + 1, 2)));
        }
    }

    #[test]
    fn lambert_matches_divisor_sums() {
        let s = lambert(30);
        for n in 1..=30i64 {
            let sigma: i64 = (1..=n).filter(|k| n % k == 0).sum();
            assert_eq!(s.y_coeff(n as i32), int(sigma));
        }
    }

    #[test]
    fn z_identities() {
        for d in 4..=12 {
            assert!(lemma_difference_check(d, 40).pass, "d = {d}");
        }
        for d in 5..=12 {
            assert!(lemma_prime_check(d, 40).pass, "d = {d}");
        }
    }

    #[test]
    fn top_invariants_known_rows() {
        let gv = bundled_gv();
        for d in 1..=6 {
            for r in gv_leading_check(d, &gv, 40).unwrap() {
                assert!(r.pass, "{r:?}");
            }
        }
    }

    #[test]
    fn x_small_degrees() {
        let gv = bundled_gv();
        let hats = bundled_omega_hat();
        for d in [1u32, 2, 4] {
            let om = omega_from_hat(&hats[d as usize - 1]);
            assert!(x_d(&om, &gv).unwrap().is_zero(), "d = {d}");
        }
        let om3 = omega_from_hat(&hats[2]);
        assert_eq!(x_d(&om3, &gv).unwrap(), -delta_sq());
        let om6 = omega_from_hat(&hats[5]);
        let y6 = y_bound_check(&om6, &gv).unwrap();
        assert!(y6.max_half().unwrap() <= 2 * 8);
        x_bound_check(&om6, &gv).unwrap();
    }

    #[test]
    fn leading_formulas_on_table() {
        let hats = bundled_omega_hat();
        for h in &hats[5..] {
            let r = leading_check(h);
            assert!(r.proven.pass && r.extended.pass, "{r:?}");
        }
        for h in &hats[3..] {
            assert!(second_order_check(h).pass, "d = {}", h.d);
        }
        for h in &hats[4..] {
            assert!(hilbert_range_check(h).pass, "d = {}", h.d);
        }
        for d in 4..=12 {
            assert!(formulas_agree_check(d).pass);
        }
    }

    #[test]
    fn perturbed_row_is_located() {
        let mut h = bundled_omega_hat()[9].clone();
        h.coeffs[5] += 1;
        let r = leading_check(&h);
        assert!(!r.proven.pass);
        assert_eq!(r.proven.mismatch.unwrap().exponent, 5);
    }

    #[test]
    fn f_low_terms() {
        // (1+y+y^2)(-2+2y+...) = -2 + 0y + 4y^2 + ...; dividing by (1-y)(1-y^2) keeps -2 first.
        let f = f_series(6);
        assert_eq!(f.y_coeff(0), int(-2));
        assert_eq!(f.y_coeff(1), int(-2));
    }
}
