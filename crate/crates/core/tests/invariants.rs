use std::sync::Arc;

use num_rational::Rational64;
use proptest::prelude::*;

use deligne_toolkit::chern_simons::{cs_path_integral, random_su2, InvariantPolynomial};
use deligne_toolkit::deligne::builtin::{monopole_two_chart, random_cochain};
use deligne_toolkit::deligne::coboundary;
use deligne_toolkit::holonomy::{holonomy, HolonomyOptions};
use deligne_toolkit::multiplicative::{check_triple, dw_invariant, BranchedTriangulation, FiniteGroup, GroupCochain};
use deligne_toolkit::simplicial::meshes::{hemisphere_subordination, UvSphere};
use deligne_toolkit::CircleValue;

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn manifolds() -> Vec<(&'static str, BranchedTriangulation)> {
    vec![
        ("S3", BranchedTriangulation::sphere3()),
        ("T3", BranchedTriangulation::lattice_torus(3, 1).unwrap()),
        ("L(3,1)", BranchedTriangulation::lens(3).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn equator_holonomy_is_half_the_charge(n in -4i64..=4, n_phi in 8usize..24, half in 2usize..6) {
        let sphere = UvSphere::new(n_phi, 2 * half).unwrap();
        let sub = hemisphere_subordination(&sphere.complex);
        let h = holonomy(&monopole_two_chart(n), &sphere.equator().unwrap(), &sub, &HolonomyOptions::default()).unwrap();
        prop_assert!(h.value.distance(&CircleValue::exact(n, 2)) < 1e-6, "n={} got {}", n, h.value.report_string());
    }

    #[test]
    fn coboundary_shift_keeps_the_holonomy(n in 0i64..=3, seed in any::<u64>()) {
        let sphere = UvSphere::new(12, 6).unwrap();
        let sub = hemisphere_subordination(&sphere.complex);
        let xi = monopole_two_chart(n);
        let shifted = xi.add(&coboundary(&random_cochain(0, 2, xi.dim(), 0.3, seed))).unwrap();
        let opts = HolonomyOptions::default();
        let equator = sphere.equator().unwrap();
        let a = holonomy(&xi, &equator, &sub, &opts).unwrap().value;
        let b = holonomy(&shifted, &equator, &sub, &opts).unwrap().value;
        prop_assert!(a.distance(&b) < 1e-6);
    }

    #[test]
    fn coboundaries_are_cocycles(n in 1usize..=5, seed in any::<u64>()) {
        let g = Arc::new(FiniteGroup::cyclic(n));
        let beta = GroupCochain::random(g, 2, 6, seed);
        let report = check_triple(&beta.coboundary());
        prop_assert!(report.passed && report.violations.is_empty());
    }

    #[test]
    fn dw_ignores_coboundary_shifts(n in 2usize..=4, k in 0i64..4, seed in any::<u64>()) {
        let omega = GroupCochain::cyclic(n, k);
        let shifted = omega.add(&GroupCochain::random(omega.group().clone(), 2, 6, seed).coboundary()).unwrap();
        for (name, m) in manifolds() {
            let a = dw_invariant(&m, &omega).unwrap();
            let b = dw_invariant(&m, &shifted).unwrap();
            prop_assert!((a.to_complex() - b.to_complex()).norm() < 1e-12, "{}: {:?} vs {:?}", name, a, b);
        }
    }

    #[test]
    fn untwisted_dw_counts_homomorphisms(n in 1usize..=6) {
        let omega = GroupCochain::cyclic(n, 0);
        let expect = |hom: usize| Rational64::new(hom as i64, n as i64);
        prop_assert_eq!(dw_invariant(&BranchedTriangulation::sphere3(), &omega).unwrap().as_rational(), Some(expect(1)));
        prop_assert_eq!(dw_invariant(&BranchedTriangulation::lattice_torus(3, 1).unwrap(), &omega).unwrap().as_rational(), Some(expect(n * n * n)));
        for p in 3..=4 {
            prop_assert_eq!(dw_invariant(&BranchedTriangulation::lens(p).unwrap(), &omega).unwrap().as_rational(), Some(expect(gcd(n, p))));
        }
    }

    #[test]
    fn path_integral_is_linear_in_the_level(level in -3i64..=3, seed in any::<u64>()) {
        let a = random_su2(3, seed, 0.4);
        let unit = cs_path_integral(&a, &InvariantPolynomial::new(1), 12).unwrap();
        let scaled = cs_path_integral(&a, &InvariantPolynomial::new(level), 12).unwrap();
        prop_assert!((scaled - level as f64 * unit).abs() < 1e-9 * (1.0 + unit.abs()));
    }
}

#[test]
fn level_one_cyclic_cocycles_pass_the_triple_check() {
    for n in 1..=8 {
        let report = check_triple(&GroupCochain::cyclic(n, 1));
        assert!(report.passed, "Z{n}: {:?}", report.violations);
    }
}
