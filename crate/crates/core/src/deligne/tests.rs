use super::builtin::*;
use super::*;
use crate::simplicial::meshes::{tetrahedral_cover, torus_cover, two_chart_sphere_cover};
use proptest::prelude::*;

fn sphere_samples(cover: &Cover) -> OverlapSamples {
    cover.overlap_samples(&Geometry::sphere(), 40000, 500, 4, 11)
}

#[test]
fn trivial_data_has_zero_residuals() {
    let cover = two_chart_sphere_cover();
    let xi = DeligneCochain::trivial(1, 2, 3);
    let r = deligne_differential(&xi, &Geometry::sphere(), &sphere_samples(&cover), 50).unwrap();
    assert_eq!(r.max(), 0.0);
}

#[test]
fn monopoles_are_cocycles() {
    for (xi, cover) in [(monopole_two_chart(3), two_chart_sphere_cover()), (monopole_tetrahedral(2), tetrahedral_cover())] {
        let rep = is_cocycle(&xi, &Geometry::sphere(), &sphere_samples(&cover), 50, 1e-8).unwrap();
        assert!(rep.passed, "{:?}", rep.residuals);
    }
}

#[test]
fn unmatched_phase_breaks_cocycle() {
    let good = monopole_two_chart(1);
    let bad_g = CechCochain::from_fn(1, 0, 3, Fill::Strict, |t| (t == [0, 1]).then(|| azimuth(-1.0).add(&FormField::angle(3, |x| 0.1 * x[2]))));
    let bad = DeligneCochain::new(2, vec![bad_g, good.component(1).clone()]).unwrap();
    let cover = two_chart_sphere_cover();
    let rep = is_cocycle(&bad, &Geometry::sphere(), &sphere_samples(&cover), 50, 1e-8).unwrap();
    assert!(!rep.passed);
    assert!(rep.residuals.rungs[1].max > 1e-3);
}

#[test]
fn missing_overlap_is_named() {
    let g = CechCochain::from_fn(1, 0, 3, Fill::Strict, |_| None);
    let a = CechCochain::from_fn(0, 1, 3, Fill::Zero, |_| None);
    let xi = DeligneCochain::new(2, vec![g, a]).unwrap();
    let cover = two_chart_sphere_cover();
    let err = deligne_differential(&xi, &Geometry::sphere(), &sphere_samples(&cover), 5).unwrap_err();
    assert!(matches!(err, Error::MissingOverlap(t) if t == vec![0, 1]));
}

fn torus3_samples() -> OverlapSamples {
    torus_cover(3).overlap_samples(&Geometry::torus(3), 6000, 8, 4, 5)
}

#[test]
fn degree_three_coboundary_data_and_perturbation() {
    let geo = Geometry::torus(3);
    let samples = torus3_samples();
    let eta = random_cochain(2, 27, 3, 0.3, 42);
    let xi = coboundary(&eta);
    let rep = is_cocycle(&xi, &geo, &samples, 10, 1e-9).unwrap();
    assert!(rep.passed, "{:?}", rep.residuals);

    // Perturb B_{01} by a constant 2-form of size 0.05.
    let eps = 0.05;
    let b = xi.component(2).clone();
    let bumped = CechCochain::from_fn(1, 2, 3, Fill::Zero, move |t| {
        let f = b.value(t).ok()?;
        Some(if t == [0, 1] { f.add(&FormField::monomial(3, &[0, 1], eps)) } else { f })
    });
    let mut comps: Vec<CechCochain> = (0..=3).map(|r| xi.component(r).clone()).collect();
    comps[2] = bumped;
    let bad = DeligneCochain::new(27, comps).unwrap();
    let rep = deligne_differential(&bad, &geo, &samples, 10).unwrap();
    assert!(rep.rungs[2].max >= eps - 1e-12, "{:?}", rep);
}

#[test]
fn curvature_of_flat_and_coboundary_data() {
    let geo = Geometry::torus(2);
    let cover = torus_cover(2);
    let samples = cover.overlap_samples(&geo, 4000, 10, 3, 1);
    let c = curvature(&flat_gerbe(0.3), &cover, &geo, &samples, 10).unwrap();
    assert!(c.is_global(1e-12));
    assert!(c.form.coefficients(&[0.2, 0.7]).iter().all(|v| v.abs() < 1e-14));
    let d = curvature(&coboundary(&random_cochain(1, 9, 2, 0.3, 9)), &cover, &geo, &samples, 10).unwrap();
    assert!(d.is_global(1e-9));
    assert!(d.form.coefficients(&[0.2, 0.7]).iter().all(|v| v.abs() < 1e-9));
}

#[test]
fn monopole_class_pairs_to_charge() {
    let cover = tetrahedral_cover();
    let samples = sphere_samples(&cover);
    let nerve = tetrahedral_nerve_cycle();
    for n in -2..=3 {
        let c = characteristic_class(&monopole_tetrahedral(n), &samples, None).unwrap();
        assert_eq!(c.pair(&nerve), n);
        for seed in 1..4 {
            let c2 = characteristic_class(&monopole_tetrahedral(n), &samples, Some(seed)).unwrap();
            assert_eq!(c2.pair(&nerve), n);
        }
    }
    let sum = monopole_tetrahedral(2).add(&monopole_tetrahedral(-3)).unwrap();
    assert_eq!(characteristic_class(&sum, &samples, None).unwrap().pair(&nerve), -1);
}

#[test]
fn coboundary_class_vanishes() {
    let cover = tetrahedral_cover();
    let samples = sphere_samples(&cover);
    let xi = coboundary(&random_cochain(0, 4, 3, 0.15, 77));
    let c = characteristic_class(&xi, &samples, Some(5)).unwrap();
    assert_eq!(c.pair(&tetrahedral_nerve_cycle()), 0);
}

#[test]
fn group_laws_on_exact_backend() {
    use num_rational::Rational64;
    let t = BTreeMap::from([(vec![0, 1], Rational64::new(2, 7))]);
    let xi = DeligneCochain::exact(1, 2, 1, t);
    let z = xi.add(&xi.neg()).unwrap();
    assert!(z.exact_table().unwrap().values().all(|v| *v == Rational64::from_integer(0)));
}

#[test]
fn pullback_checks_charts() {
    let xi = monopole_two_chart(1);
    let map: MapFn = Arc::new(|x: &[f64]| x.to_vec());
    assert!(xi.pullback(3, map.clone(), vec![0, 5]).is_err());
    let same = xi.pullback(3, map, vec![1, 0]).unwrap();
    // Swapping the charts flips g.
    let g = same.g().value(&[0, 1]).unwrap();
    let x = [0.3, 0.4, 0.1];
    assert!((g.evaluate(&x, &[]) - azimuth(1.0).evaluate(&x, &[])).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]
    #[test]
    fn coboundaries_are_cocycles(seed in any::<u64>(), p in 1usize..=3) {
        let geo = Geometry::sphere();
        let cover = tetrahedral_cover();
        let samples = cover.overlap_samples(&geo, 3000, 4, 4, seed);
        let xi = coboundary(&random_cochain(p - 1, 4, 3, 0.5, seed));
        let rep = deligne_differential(&xi, &geo, &samples, 4).unwrap();
        prop_assert!(rep.max() <= 1e-9, "{:?}", rep);
    }
}
