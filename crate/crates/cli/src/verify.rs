//! The `verify` command: every named check over golden data.

use num_bigint::BigInt;
use p2betti_core::asymptotics::{
    second_order_check, formulas_agree_check, gv_leading_check, leading_check, lemma_difference_check,
    lemma_prime_check, x_bound_check, y_bound_check, hilbert_range_check,
};
use p2betti_core::data::RefinedTable;
use p2betti_core::exactalg::delta_sq;
use p2betti_core::refinedhn::{
    f1_ref_specialization_check, recursion_range3, recursion_sum, unrefined_recursion_check, PoincareTable,
    ExplicitConvention, SignedPlethystic,
};
use p2betti_core::solver::{
    check_omega, integrality_bracket, invert_to_gv, omega_from_hat, omega_hat, rhs, solve_all, RhsMethod,
};
use p2betti_core::{GvTable, HalfLaurent, OmegaHat};

use crate::report::CheckRecord;

pub const ALL_CHECKS: &[&str] = &[
    "structure",
    "3d-divisibility",
    "gv-consistency",
    "bracket",
    "roundtrip",
    "routes",
    "gv-leading",
    "lemmas",
    "xy-bounds",
    "leading",
    "second-order",
    "hilbert-range",
    "formulas",
    "recursion",
    "refined",
];

pub struct VerifyInput<'a> {
    pub golden: &'a [OmegaHat],
    pub gv: &'a GvTable,
    pub refined: &'a RefinedTable,
    pub method: RhsMethod,
    pub trunc: i32,
}

fn enabled(checks: &[String], name: &str) -> bool {
    checks.iter().any(|c| c == name)
}

/// GV rows for every golden degree: the given table, extended by inverting
/// the golden rows. Overlaps are compared.
fn extended_gv(inp: &VerifyInput, out: &mut Vec<CheckRecord>, want: bool) -> (GvTable, Option<GvTable>) {
    let omegas: Vec<_> = inp.golden.iter().map(omega_from_hat).collect();
    match invert_to_gv(&omegas, inp.method) {
        Ok(inv) => {
            let mut full = inp.gv.clone();
            for (d, g, n) in inv.entries() {
                if inp.gv.has_degree(d) {
                    continue;
                }
                full.insert(d, g, n.clone()).expect("inverted rows respect the genus bound");
            }
            if want {
                for d in 1..=inp.gv.max_degree().min(inv.max_degree()) {
                    out.push(CheckRecord::coeffs("gv-consistency", d, &inv.row(d), &inp.gv.row(d)));
                }
            }
            (full, Some(inv))
        }
        Err(e) => {
            if want {
                out.push(CheckRecord::plain("gv-consistency", 0, false, format!("inversion failed: {e}")));
            }
            (inp.gv.clone(), None)
        }
    }
}

fn has_rows_through(gv: &GvTable, d: u32) -> bool {
    (1..=d).all(|e| gv.has_degree(e))
}

pub fn run(inp: &VerifyInput, checks: &[String]) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    let dmax = inp.golden.iter().map(|h| h.d).max().unwrap_or(0);
    let (gv, inverted) = extended_gv(inp, &mut out, enabled(checks, "gv-consistency"));

    for h in inp.golden {
        let d = h.d;
        let omega = omega_from_hat(h);
        if enabled(checks, "structure") {
            let rec = match check_omega(&omega) {
                Ok(()) => {
                    let p1: BigInt = h.poincare().iter().sum();
                    let hat1: BigInt = h.coeffs.iter().sum();
                    let ok = p1 == hat1 * BigInt::from(3 * d);
                    CheckRecord::plain("structure", d, ok, (!ok).then(|| "P_d(1) != 3d Omega^_d(1)".to_string()))
                }
                Err(e) => CheckRecord::plain("structure", d, false, e.to_string()),
            };
            out.push(rec);
        }
        if enabled(checks, "3d-divisibility") && d % 3 == 0 {
            let cyc = HalfLaurent::from_y_coeffs(0, &[BigInt::from(1), BigInt::from(1), BigInt::from(1)]);
            let ok = h.as_laurent().exact_div(&cyc).is_ok();
            out.push(CheckRecord::plain("3d-divisibility", d, ok, None));
        }
        if enabled(checks, "bracket") && has_rows_through(&gv, d) {
            out.push(CheckRecord::plain("bracket", d, integrality_bracket(&omega, &gv), None));
        }
        if enabled(checks, "xy-bounds") && has_rows_through(&gv, d) {
            xy_records(d, &omega, &gv, &mut out);
        }
        if enabled(checks, "leading") && d >= 6 {
            let r = leading_check(h);
            out.push(CheckRecord::series("leading", &r.proven));
            out.push(CheckRecord::series("leading-extended", &r.extended));
        }
        if enabled(checks, "second-order") && d >= 4 {
            out.push(CheckRecord::series("second-order", &second_order_check(h)));
        }
        if enabled(checks, "hilbert-range") && d >= 5 {
            out.push(CheckRecord::series("hilbert-range", &hilbert_range_check(h)));
        }
        if enabled(checks, "formulas") && d >= 4 {
            out.push(CheckRecord::series("formulas", &formulas_agree_check(d)));
        }
        if enabled(checks, "lemmas") {
            if d >= 4 {
                out.push(CheckRecord::series("lemma-difference", &lemma_difference_check(d, inp.trunc)));
            }
            if d >= 5 {
                out.push(CheckRecord::series("lemma-prime", &lemma_prime_check(d, inp.trunc)));
            }
        }
        if enabled(checks, "gv-leading") && gv.has_degree(d) {
            match gv_leading_check(d, &gv, inp.trunc) {
                Ok(rs) => out.extend(rs.iter().map(|r| CheckRecord::series(&r.name, r))),
                Err(e) => out.push(CheckRecord::plain("gv-leading", d, false, e.to_string())),
            }
        }
    }

    if enabled(checks, "roundtrip") {
        match &inverted {
            Some(inv) => match solve_all(dmax, inv, inp.method) {
                Ok(fwd) => {
                    for (o, h) in fwd.iter().zip(inp.golden) {
                        match omega_hat(o) {
                            Ok(back) => out.push(CheckRecord::coeffs("roundtrip", h.d, &back.coeffs, &h.coeffs)),
                            Err(e) => out.push(CheckRecord::plain("roundtrip", h.d, false, e.to_string())),
                        }
                    }
                }
                Err(e) => out.push(CheckRecord::plain("roundtrip", 0, false, e.to_string())),
            },
            None => out.push(CheckRecord::plain("roundtrip", 0, false, "golden rows do not invert".to_string())),
        }
    }

    if enabled(checks, "routes") {
        for d in 3..=dmax {
            if !has_rows_through(&gv, d) {
                continue;
            }
            let a = rhs(d, &gv, RhsMethod::Trees);
            let b = rhs(d, &gv, RhsMethod::Functional);
            let rec = match (a, b) {
                (Ok(a), Ok(b)) => CheckRecord::plain("routes", d, a == b, None),
                (Err(e), _) | (_, Err(e)) => CheckRecord::plain("routes", d, false, e.to_string()),
            };
            out.push(rec);
        }
    }

    if enabled(checks, "recursion") && dmax >= 3 {
        recursion_records(inp.golden, dmax, &mut out);
    }

    if enabled(checks, "refined") {
        refined_records(inp, &mut out);
    }
    out
}

fn xy_records(d: u32, omega: &p2betti_core::OmegaPoly, gv: &GvTable, out: &mut Vec<CheckRecord>) {
    match x_bound_check(omega, gv) {
        Ok(x) => {
            let special = match d {
                1 | 2 | 4 => Some(x.is_zero()),
                3 => Some(x == delta_sq().scale_int(-1)),
                _ => None,
            };
            out.push(CheckRecord::plain("x-bound", d, special.unwrap_or(true), None));
        }
        Err(e) => out.push(CheckRecord::plain("x-bound", d, false, e.to_string())),
    }
    if d >= 6 {
        let rec = match y_bound_check(omega, gv) {
            Ok(_) => CheckRecord::plain("y-bound", d, true, None),
            Err(e) => CheckRecord::plain("y-bound", d, false, e.to_string()),
        };
        out.push(rec);
    }
}

fn recursion_records(golden: &[OmegaHat], dmax: u32, out: &mut Vec<CheckRecord>) {
    let table = PoincareTable::from_omega_hats(golden, 3 * dmax as i32);
    let explicit = ExplicitConvention;
    let push = |out: &mut Vec<CheckRecord>, name: &str, d: u32, r: Result<_, p2betti_core::refinedhn::HnError>| {
        match r {
            Ok(rep) => out.push(CheckRecord::series(name, &rep)),
            Err(e) => out.push(CheckRecord::plain(name, d, false, e.to_string())),
        }
    };
    for d in 3..=dmax {
        push(out, "hn-recursion-k1", d, unrefined_recursion_check(d, 1, &table, &explicit));
        if d >= 4 {
            push(out, "hn-recursion-k2", d, unrefined_recursion_check(d, 2, &table, &explicit));
            let same = match (recursion_range3(d, &table), recursion_sum(d, 2, &table, &explicit)) {
                (Ok(a), Ok(b)) => a == b,
                _ => false,
            };
            out.push(CheckRecord::plain("hn-range3-form", d, same, None));
        }
        if d >= 5 {
            push(
                out,
                "hn-recursion-k3-plethystic",
                d,
                unrefined_recursion_check(d, 3, &table, &SignedPlethystic),
            );
        }
    }
}

fn refined_records(inp: &VerifyInput, out: &mut Vec<CheckRecord>) {
    let order = 24;
    let refined = PoincareTable::from_refined(inp.refined, order);
    let plain = PoincareTable::from_omega_hats(inp.golden, order / 2);
    match refined.check_specializes_to(&plain) {
        Ok(()) => out.push(CheckRecord::plain("refined-specialization", 0, true, None)),
        Err(e) => {
            out.push(CheckRecord::plain("refined-specialization", 0, false, e.to_string()));
            return;
        }
    }
    match f1_ref_specialization_check(&refined, &plain, order - 1) {
        Ok(r) => out.push(CheckRecord::series("refined-f1", &r)),
        Err(e) => out.push(CheckRecord::plain("refined-f1", 1, false, e.to_string())),
    }
}
