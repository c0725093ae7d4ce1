use super::*;
use crate::deligne::builtin::{flat_3form, random_cochain, random_trig_form};
use crate::deligne::{coboundary, DeligneCochain};
use crate::simplicial::meshes::{product_torus_cover, torus_subordination, TorusGrid};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn opts() -> HolonomyOptions {
    HolonomyOptions::default()
}

fn base_torus() -> (SimplicialComplex, Subordination) {
    let t = TorusGrid::new(2, 3).unwrap();
    let sub = torus_subordination(&t.complex).unwrap();
    (t.complex, sub)
}

fn points(dim: usize, n: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| (0..dim).map(|_| rng.gen::<f64>()).collect()).collect()
}

#[test]
fn fiber_integral_of_a_constant_form() {
    let kappa = FormField::monomial(3, &[0, 1, 2], 0.7);
    let down = fiber_integral(&kappa, 32).unwrap();
    assert_eq!((down.dim(), down.degree()), (2, 2));
    assert!((down.coefficients(&[0.3, 0.1])[0] - 0.7).abs() < 1e-14);
    // No dt factor: the fiber integral vanishes.
    let flat = FormField::monomial(3, &[1, 2], 1.0);
    assert!(fiber_integral(&flat, 32).unwrap().coefficients(&[0.2, 0.2])[0].abs() < 1e-15);
    // dt ∧ dx ∧ dz on S¹ × T³ gives dx ∧ dz.
    let k4 = FormField::monomial(4, &[0, 1, 3], 1.0);
    let d4 = fiber_integral(&k4, 32).unwrap();
    assert_eq!(d4.coefficients(&[0.1, 0.2, 0.3]), vec![0.0, 1.0, 0.0]);
    let one = FormField::monomial(2, &[0, 1], 1.0);
    let d1 = fiber_integral(&one, 32).unwrap();
    assert!((d1.coefficients(&[0.4])[0] + 1.0).abs() < 1e-14);
}

#[test]
fn flat_three_form_transgresses_to_its_constant() {
    let (sigma, sub) = base_torus();
    for (num, den) in [(0, 1), (1, 4), (1, 3), (1, 2)] {
        let b = num as f64 / den as f64;
        let chi = transgress_over_circle(&flat_3form(b), &product_torus_cover(2), opts()).unwrap();
        let hol = chi.holonomy(&sigma, &sub).unwrap();
        assert!(hol.distance(&CircleValue::float(b)) < 1e-12, "b = {b}: {hol}");
        assert!(chi.curvature().coefficients(&[0.2, 0.7]).iter().all(|c| c.abs() < 1e-14));
    }
}

#[test]
fn trivial_input_gives_trivial_character() {
    let (sigma, sub) = base_torus();
    let chi = transgress_over_circle(&DeligneCochain::trivial(3, 27, 3), &product_torus_cover(2), opts()).unwrap();
    assert_eq!(chi.holonomy(&sigma, &sub).unwrap().angle(), 0.0);
}

#[test]
fn representatives_of_one_class_agree() {
    let (sigma, sub) = base_torus();
    let cover = product_torus_cover(2);
    let xi = flat_3form(0.3);
    for seed in 0..4 {
        let shifted = xi.add(&coboundary(&random_cochain(2, 27, 3, 0.2, seed))).unwrap();
        let chi = transgress_over_circle(&shifted, &cover, opts()).unwrap();
        let hol = chi.holonomy(&sigma, &sub).unwrap();
        assert!(hol.distance(&CircleValue::float(0.3)) < 1e-6, "seed {seed}: {hol}");
    }
}

#[test]
fn structural_errors() {
    let flat = flat_3form(0.1);
    let plain = crate::simplicial::meshes::torus_cover(3);
    assert!(matches!(transgress_over_circle(&flat, &plain, opts()), Err(Error::Structure(_))));
    let gerbe = crate::deligne::builtin::flat_gerbe(0.1);
    assert!(matches!(transgress_over_circle(&gerbe, &product_torus_cover(1), opts()), Err(Error::Structure(_))));
    let chi = DifferentialCharacter::from_curvature(2, FormField::zero(2, 3)).unwrap();
    let (sigma, sub) = base_torus();
    assert!(matches!(chi.holonomy(&sigma, &sub), Err(Error::Precondition(_))));
}

#[test]
fn curvature_diagram_commutes() {
    for seed in 0..3 {
        let c = random_trig_form(4, 3, 0.3, seed);
        let r = curvature_diagram_residual(&c, &points(3, 100, seed)).unwrap();
        assert!(r < 1e-6, "seed {seed}: {r:e}");
    }
}

#[test]
fn transgressed_curvature_is_the_fiber_integral() {
    let c = random_trig_form(4, 3, 0.3, 17);
    let xi = DeligneCochain::from_global_form(c.clone(), 81);
    let chi = transgress_over_circle(&xi, &product_torus_cover(3), opts()).unwrap();
    let expected = fiber_integral(&c.exterior_derivative(), 64).unwrap();
    for y in points(3, 100, 5) {
        for (a, b) in chi.curvature().coefficients(&y).iter().zip(expected.coefficients(&y)) {
            assert!((a - b).abs() < 1e-6);
        }
    }
}

#[test]
fn transgressed_character_property() {
    let c = random_trig_form(4, 3, 0.2, 23);
    let xi = DeligneCochain::from_global_form(c, 81).add(&coboundary(&random_cochain(2, 81, 4, 0.1, 4))).unwrap();
    let chi = transgress_over_circle(&xi, &product_torus_cover(3), opts()).unwrap();
    let grid = TorusGrid::new(3, 3).unwrap();
    let w = grid.region(|idx| idx == [0, 0, 0] || idx == [1, 0, 0]).unwrap();
    let sub = torus_subordination(&w).unwrap();
    let check = chi.character_check(&w, &sub, 5).unwrap();
    assert!(check.residual < 1e-5, "{check:?}");
    assert!(check.flux.abs() > 1e-3);
}

#[test]
fn slant_periods_agree() {
    let grid = TorusGrid::new(3, 3).unwrap();
    for m in [-2.0, 1.0, 3.0] {
        let kappa = FormField::monomial(4, &[0, 1, 2, 3], m);
        let (a, b) = slant_periods(&kappa, &grid.complex, 3).unwrap();
        // Moving dt past the three base directions costs a sign on both sides.
        assert!((a - b).abs() < 1e-9 && (a + m).abs() < 1e-9, "{a} {b}");
    }
}
