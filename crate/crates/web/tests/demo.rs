use deligne_web::{dw, equator_holonomy, gauge_shift};

#[test]
fn monopole_equator_is_half_for_odd_charge() {
    let v = equator_holonomy(3, 16, 8).unwrap();
    assert_eq!(v["expected"], "1/2");
    let angle: f64 = v["angle"].as_str().unwrap().parse().unwrap();
    assert!((angle - 0.5).abs() < 1e-6, "{v}");
    assert!(equator_holonomy(1, 16, 7).is_err());
}

#[test]
fn torus_invariant_counts_commuting_triples() {
    assert_eq!(dw("torus", 3, 0).unwrap()["value"], "9");
    assert_eq!(dw("sphere", 4, 1).unwrap()["value"], "1/4");
    assert!(dw("lens3", 3, 1).is_ok());
    assert!(dw("klein bottle", 2, 0).is_err());
}

#[test]
fn bump_shift_matches_degree() {
    let v = gauge_shift(1, 32).unwrap();
    let (shift, want) = (v["shift"].as_f64().unwrap(), v["expected"].as_f64().unwrap());
    assert!((shift - want).abs() < 1e-3, "{v}");
    assert!(gauge_shift(1, 4).is_err());
}
