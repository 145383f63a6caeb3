use p2betti_core::data::{bundled_gv, bundled_omega_hat};
use p2betti_core::solver::{invert_to_gv, omega_from_hat, omega_hat, solve_all, RhsMethod};

#[test]
fn forward_matches_table_through_six() {
    let gv = bundled_gv();
    let hats = bundled_omega_hat();
    for method in [RhsMethod::Trees, RhsMethod::Functional] {
        let om = solve_all(6, &gv, method).unwrap();
        for (o, h) in om.iter().zip(&hats) {
            assert_eq!(&omega_hat(o).unwrap(), h, "d = {}", o.d);
        }
    }
}

#[test]
fn round_trip_through_ten() {
    let hats = bundled_omega_hat();
    let omegas: Vec<_> = hats.iter().map(omega_from_hat).collect();
    let gv = invert_to_gv(&omegas, RhsMethod::Functional).unwrap();
    assert_eq!(gv.truncated(6), bundled_gv());
    let fwd = solve_all(10, &gv, RhsMethod::Functional).unwrap();
    for (o, h) in fwd.iter().zip(&hats) {
        assert_eq!(&omega_hat(o).unwrap(), h, "d = {}", o.d);
    }
    let n0: Vec<String> = (7..=10).map(|d| gv.get(d, 0).to_string()).collect();
    assert_eq!(n0, ["188454", "-2228160", "27748899", "-360012150"]);
}
