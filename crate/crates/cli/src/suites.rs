//! Named property suites. Each returns one [`Check`] per property, with the
//! worst deviation over the sampled cases.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_rational::Rational64;
use serde_json::json;

use deligne_toolkit::chern_simons::{
    bump_degree, cfield_act, cfield_equivalence_check, chern_weil_4form, constant_su2, coordinate_cycles, cs_explicit, cs_path_integral,
    gauge_shift_check, gauge_transform, integrate_top_form, monopole_pair, random_abelian, random_su2, CField, CsOptions, GaugeElement, GridDomain,
    InvariantPolynomial, LatticeConnection, PURE_GAUGE_RATIO,
};
use deligne_toolkit::circle::format_float;
use deligne_toolkit::deligne::builtin::{flat_3form, flat_gerbe, monopole_two_chart, random_cochain, random_trig_form};
use deligne_toolkit::deligne::{coboundary, DeligneCochain};
use deligne_toolkit::holonomy::{character_property_check, holonomy, HolonomyOptions};
use deligne_toolkit::multiplicative::{check_triple, dw_invariant, multiplicativity_check, BranchedTriangulation, FiniteGroup, GroupCochain};
use deligne_toolkit::simplicial::meshes::{hemisphere_subordination, product_torus_cover, torus_subordination, TorusGrid, UvSphere};
use deligne_toolkit::simplicial::{barycentric_subdivide, SimplicialComplex, Subordination};
use deligne_toolkit::transgression::{
    curvature_diagram_residual, fiber_integral, psi_finite_group, transgress_over_circle, DifferentialCharacter, LoopColoring,
};
use deligne_toolkit::{CircleValue, FormField};

use crate::error::CliError;
use crate::report::Check;

pub const SUITES: [&str; 4] = ["invariance", "transgression", "multiplicativity", "cs-gauge"];

/// Holonomy agreement for numerically evaluated cycles.
pub const HOLONOMY_TOL: f64 = 1e-6;
/// Character property `hol(∂W) = ∫_W curv`.
pub const CHARACTER_TOL: f64 = 1e-5;
/// Flat transgression reproduces its constant to rounding.
pub const FLAT_TOL: f64 = 1e-12;
pub const DIAGRAM_TOL: f64 = 1e-6;
pub const FLUX_TOL: f64 = 1e-4;
pub const SHIFT_TOL: f64 = 1e-3;
pub const PATH_TOL: f64 = 1e-4;
pub const CFIELD_TOL: f64 = 1e-4;

/// Sizes used by the suites.
#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Random coboundary shifts per built-in cocycle.
    pub coboundaries: usize,
    /// Curvature diagram sample points.
    pub diagram_points: usize,
    /// Nodes per axis for Chern–Simons integrals.
    pub cs_grid: usize,
    /// Nodes per axis for the gauge shift on a non-trivial background.
    pub shift_grid: usize,
    /// Nodes per axis for the Chern–Weil integral over `S² × S²`.
    pub flux_grid: usize,
    pub cfield_grid: usize,
}

impl SuiteConfig {
    pub fn new(seed: u64) -> Self {
        SuiteConfig { seed, coboundaries: 20, diagram_points: 100, cs_grid: 32, shift_grid: 48, flux_grid: 64, cfield_grid: 20 }
    }

    fn sub_seed(&self, i: u64) -> u64 {
        self.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(i)
    }
}

pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<Vec<Check>, CliError> {
    let checks = match name {
        "invariance" => {
            let mut c = representative_invariance(cfg)?;
            c.extend(character_property(cfg)?);
            c
        }
        "transgression" => transgression(cfg)?,
        "multiplicativity" => {
            let mut c = finite_exactness(cfg)?;
            c.extend(multiplicativity(cfg)?);
            c
        }
        "cs-gauge" => {
            let mut c = chern_weil_integrality(cfg)?;
            c.extend(gauge_shift(cfg)?);
            c.extend(path_vs_explicit(cfg)?);
            c.extend(cfield_equivalence(cfg)?);
            c
        }
        other => return Err(CliError::UnknownSuite(other.to_string())),
    };
    Ok(checks.into_iter().map(|c| c.prefixed(name)).collect())
}

struct Case {
    name: &'static str,
    xi: DeligneCochain,
    cycle: SimplicialComplex,
    sub: Subordination,
    amplitude: f64,
}

fn builtin_cases() -> Result<Vec<Case>, CliError> {
    let sphere = UvSphere::new(16, 8)?;
    let t2 = TorusGrid::new(2, 3)?;
    let t3 = TorusGrid::new(3, 3)?;
    Ok(vec![
        Case {
            name: "monopole",
            xi: monopole_two_chart(1),
            cycle: sphere.equator()?,
            sub: hemisphere_subordination(&sphere.complex),
            amplitude: 0.3,
        },
        Case { name: "flat_gerbe", xi: flat_gerbe(0.3), sub: torus_subordination(&t2.complex)?, cycle: t2.complex, amplitude: 0.3 },
        Case { name: "flat_3form", xi: flat_3form(0.3), sub: torus_subordination(&t3.complex)?, cycle: t3.complex, amplitude: 0.2 },
    ])
}

/// Holonomy is unchanged by coboundary shifts of the cocycle and by
/// barycentric subdivision of the cycle.
pub fn representative_invariance(cfg: &SuiteConfig) -> Result<Vec<Check>, CliError> {
    let opts = HolonomyOptions::default();
    let mut checks = Vec::new();
    for case in builtin_cases()? {
        let base = holonomy(&case.xi, &case.cycle, &case.sub, &opts)?.value;
        let (sd, sd_sub) = barycentric_subdivide(&case.cycle, &case.sub)?;
        let (mut rep, mut sub) = (0.0f64, 0.0f64);
        for i in 0..cfg.coboundaries {
            let eta = random_cochain(case.xi.degree() - 1, case.xi.charts(), case.xi.dim(), case.amplitude, cfg.sub_seed(i as u64));
            let shifted = case.xi.add(&coboundary(&eta))?;
            rep = rep.max(holonomy(&shifted, &case.cycle, &case.sub, &opts)?.value.distance(&base));
            sub = sub.max(holonomy(&shifted, &sd, &sd_sub, &opts)?.value.distance(&base));
        }
        let unshifted = holonomy(&case.xi, &sd, &sd_sub, &opts)?.value.distance(&base);
        let detail = json!({"holonomy": base.report_string(), "shifts": cfg.coboundaries});
        checks.push(Check::within(format!("{}/coboundary", case.name), rep, HOLONOMY_TOL).detail(&detail));
        checks.push(Check::within(format!("{}/subdivision", case.name), sub.max(unshifted), HOLONOMY_TOL).detail(&detail));
    }
    Ok(checks)
}

/// `hol(∂W)` against `∫_W curv` on ten chains: four sphere bands (degree 1),
/// three solid regions of `T³` (degree 2) and three of `T⁴` (degree 3).
pub fn character_property(cfg: &SuiteConfig) -> Result<Vec<Check>, CliError> {
    let opts = HolonomyOptions::default();
    let mut checks = Vec::new();
    let sphere = UvSphere::new(16, 8)?;
    let sub = hemisphere_subordination(&sphere.complex);
    for (i, (n, a, b)) in [(1, 0, 4), (2, 0, 2), (3, 1, 6), (1, 3, 8)].into_iter().enumerate() {
        let xi = monopole_two_chart(n).add(&coboundary(&random_cochain(0, 2, 3, 0.3, cfg.sub_seed(100 + i as u64))))?;
        let chk = character_property_check(&xi, &sphere.band(a, b)?, &sub, &opts)?;
        checks.push(
            Check::within(format!("character/degree1/band{a}-{b}"), chk.residual, CHARACTER_TOL)
                .value(chk.holonomy.report_string())
                .detail(json!({"flux": chk.flux})),
        );
    }
    type Region = fn(&[usize]) -> bool;
    let solids: [(usize, &str, Region); 6] = [
        (3, "slab", |c| c[0] == 0 && c[1] == 0),
        (3, "cube", |c| c.iter().all(|&x| x == 0)),
        (3, "block", |c| c[0] <= 1 && c[1] == 1),
        (4, "cube", |c| c.iter().all(|&x| x == 0)),
        (4, "pair", |c| c[0] <= 1 && c[1..].iter().all(|&x| x == 0)),
        (4, "column", |c| c[0] == 0 && c[1] == 0 && c[2] == 0),
    ];
    let t3 = TorusGrid::new(3, 3)?;
    let t4 = TorusGrid::new(4, 3)?;
    let s3 = torus_subordination(&t3.complex)?;
    let s4 = torus_subordination(&t4.complex)?;
    for (i, (dim, name, keep)) in solids.into_iter().enumerate() {
        let (grid, sub) = if dim == 3 { (&t3, &s3) } else { (&t4, &s4) };
        let charts = 3usize.pow(dim as u32);
        let p = dim - 1;
        let seed = cfg.sub_seed(200 + i as u64);
        let xi = DeligneCochain::from_global_form(random_trig_form(dim, p, 0.3, seed), charts).add(&coboundary(&random_cochain(
            p - 1,
            charts,
            dim,
            0.2,
            seed ^ 1,
        )))?;
        let chk = character_property_check(&xi, &grid.region(keep)?, sub, &opts)?;
        checks.push(
            Check::within(format!("character/degree{p}/{name}"), chk.residual, CHARACTER_TOL)
                .value(chk.holonomy.report_string())
                .detail(json!({"flux": chk.flux})),
        );
    }
    Ok(checks)
}

/// Largest coefficient gap between two forms of the same shape.
fn form_gap(a: &FormField, b: &FormField, points: &[Vec<f64>]) -> f64 {
    points
        .iter()
        .flat_map(|y| a.coefficients(y).into_iter().zip(b.coefficients(y)).map(|(u, v)| (u - v).abs()).collect::<Vec<_>>())
        .fold(0.0, f64::max)
}

fn form_scale(a: &FormField, points: &[Vec<f64>]) -> f64 {
    points.iter().flat_map(|y| a.coefficients(y)).fold(0.0, |m, v| m.max(v.abs()))
}

/// Flat sweep, curvature diagram and representative independence of the
/// transgression `S¹ × T² → T²`.
pub fn transgression(cfg: &SuiteConfig) -> Result<Vec<Check>, CliError> {
    let opts = HolonomyOptions::default();
    let cover = product_torus_cover(2);
    let base = TorusGrid::new(2, 3)?;
    let sub = torus_subordination(&base.complex)?;
    let points = GridDomain::torus(2).sample(cfg.diagram_points, cfg.sub_seed(300));
    let mut checks = Vec::new();
    for (num, den) in [(0, 1), (1, 4), (1, 3), (1, 2)] {
        let b = num as f64 / den as f64;
        let chi = transgress_over_circle(&flat_3form(b), &cover, opts)?;
        let hol = chi.holonomy(&base.complex, &sub)?;
        let curv = chi.curvature();
        let flatness = points.iter().flat_map(|y| curv.coefficients(y)).fold(0.0f64, |m, v| m.max(v.abs()));
        let expected = CircleValue::exact(num, den);
        checks.push(
            Check::within(format!("flat/b={num}/{den}"), hol.distance(&expected).max(flatness), FLAT_TOL)
                .value(hol.report_string())
                .expected(expected.report_string()),
        );
    }

    // The diagram needs a base of dimension 3: over T² both curvatures vanish
    // identically. A global 3-form on S¹ × T³: d∫C by finite differences against ∫dC.
    let cover3 = product_torus_cover(3);
    let points3 = GridDomain::torus(3).sample(cfg.diagram_points, cfg.sub_seed(303));
    // The circle-independent term keeps ∫_{S¹} dC away from zero for every seed.
    let steady = FormField::scalar(4, |x| 0.2 * (std::f64::consts::TAU * x[1]).sin()).wedge(&FormField::monomial(4, &[0, 2, 3], 1.0));
    let c = random_trig_form(4, 3, 0.3, cfg.sub_seed(301)).add(&steady);
    let forms = curvature_diagram_residual(&c, &points3)?;
    let scale = form_scale(&fiber_integral(&c.exterior_derivative(), 64)?, &points3);
    checks.push(Check::within("diagram/global-form", forms, DIAGRAM_TOL).detail(json!({"points": points3.len(), "curvature_scale": scale})));
    // The same form as a cocycle with a coboundary shift: the character's curvature.
    let xi =
        DeligneCochain::from_global_form(c.clone(), cover3.len()).add(&coboundary(&random_cochain(2, cover3.len(), 4, 0.2, cfg.sub_seed(302))))?;
    let chi = transgress_over_circle(&xi, &cover3, opts)?;
    let down = fiber_integral(&c, 64)?;
    let d_down = FormField::new(3, 2, move |y| down.coefficients(y)).exterior_derivative();
    let gap = form_gap(chi.curvature(), &d_down, &points3);
    let scale = form_scale(chi.curvature(), &points3);
    checks.push(Check::within("diagram/character", gap, DIAGRAM_TOL).detail(json!({"points": points3.len(), "curvature_scale": scale})));

    let flat = flat_3form(0.3);
    let target = CircleValue::float(0.3);
    let mut worst = 0.0f64;
    for i in 0..cfg.coboundaries.min(5) {
        let shifted = flat.add(&coboundary(&random_cochain(2, cover.len(), 3, 0.2, cfg.sub_seed(310 + i as u64))))?;
        let chi = transgress_over_circle(&shifted, &cover, opts)?;
        worst = worst.max(chi.holonomy(&base.complex, &sub)?.distance(&target));
    }
    checks.push(Check::within("representatives", worst, HOLONOMY_TOL).expected(target.report_string()));
    Ok(checks)
}

/// Every normalized 2-cochain on `g` with values in `(1/den)ℤ/ℤ`.
fn all_two_cochains(g: &Arc<FiniteGroup>, den: i64) -> Result<Vec<GroupCochain>, CliError> {
    let e = g.identity();
    let tuples: Vec<Vec<usize>> = g.tuples(2).collect();
    let free: Vec<usize> = (0..tuples.len()).filter(|&i| !tuples[i].contains(&e)).collect();
    let total = (den as u64).pow(free.len() as u32);
    let mut out = Vec::with_capacity(total as usize);
    for mut code in 0..total {
        let mut values = vec![Rational64::from_integer(0); tuples.len()];
        for &i in &free {
            values[i] = Rational64::new((code % den as u64) as i64, den);
            code /= den as u64;
        }
        out.push(GroupCochain::tabulated(g.clone(), 2, values)?);
    }
    Ok(out)
}

/// Cocycle identity, Dijkgraaf–Witten counts and exhaustive coboundary
/// invariance of the state sum.
pub fn finite_exactness(_cfg: &SuiteConfig) -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();
    let mut failing = Vec::new();
    let mut checked = 0;
    for n in 1..=6usize {
        for k in 0..n as i64 {
            checked += 1;
            if !check_triple(&GroupCochain::cyclic(n, k)).passed {
                failing.push(format!("({n},{k})"));
            }
        }
    }
    checks.push(Check::new("triple/cyclic", failing.is_empty()).detail(json!({"cocycles": checked, "failing": failing})));

    let torus = BranchedTriangulation::lattice_torus(3, 1)?;
    let sphere = BranchedTriangulation::sphere3();
    for n in 1..=6usize {
        let trivial = GroupCochain::trivial(Arc::new(FiniteGroup::cyclic(n)), 3);
        let t = dw_invariant(&torus, &trivial)?;
        let want = Rational64::from_integer((n * n) as i64);
        checks.push(Check::new(format!("dw/torus3/Z{n}"), t.as_rational() == Some(want)).value(t.to_string()).expected(want.to_string()));
        let s = dw_invariant(&sphere, &trivial)?;
        let want = Rational64::new(1, n as i64);
        checks.push(Check::new(format!("dw/sphere3/Z{n}"), s.as_rational() == Some(want)).value(s.to_string()).expected(want.to_string()));
    }

    let manifolds = [("sphere3", sphere), ("torus3", torus), ("lens3", BranchedTriangulation::lens(3)?), ("lens4", BranchedTriangulation::lens(4)?)];
    let models: Vec<(String, GroupCochain, i64)> = vec![
        ("Z1".into(), GroupCochain::trivial(Arc::new(FiniteGroup::cyclic(1)), 3), 2),
        ("Z2".into(), GroupCochain::cyclic(2, 1), 2),
        ("Z3".into(), GroupCochain::cyclic(3, 1), 3),
        ("Z4".into(), GroupCochain::cyclic(4, 1), 2),
        ("Klein".into(), GroupCochain::trivial(Arc::new(FiniteGroup::klein()), 3), 2),
    ];
    for (name, omega, den) in models {
        let shifts = all_two_cochains(omega.group(), den)?;
        let mut mismatches = BTreeSet::new();
        for (mname, m) in &manifolds {
            let base = dw_invariant(m, &omega)?;
            for beta in &shifts {
                if dw_invariant(m, &omega.add(&beta.coboundary())?)? != base {
                    mismatches.insert(mname.to_string());
                }
            }
        }
        checks.push(
            Check::new(format!("dw/coboundary/{name}"), mismatches.is_empty())
                .detail(json!({"shifts": shifts.len(), "manifolds": manifolds.len(), "mismatched": mismatches})),
        );
    }
    Ok(checks)
}

/// The transgressed characters of `ℤ/n` are multiplicative on every pair of
/// torus loop colorings, and a perturbed character is caught.
pub fn multiplicativity(_cfg: &SuiteConfig) -> Result<Vec<Check>, CliError> {
    let torus = BranchedTriangulation::torus2();
    let mut checks = Vec::new();
    for n in 2..=4usize {
        let chi = psi_finite_group(&GroupCochain::cyclic(n, 1), &torus)?;
        let colorings = LoopColoring::all_torus(chi.group());
        let pairs: Vec<(LoopColoring, LoopColoring)> = colorings.iter().flat_map(|a| colorings.iter().map(move |b| (a.clone(), b.clone()))).collect();
        let report = multiplicativity_check(&chi, &pairs);
        checks.push(
            Check::new(format!("psi/Z{n}"), report.passed && report.skipped == 0)
                .detail(json!({"pairs": pairs.len(), "checked": report.checked, "skipped": report.skipped})),
        );
        if n == 3 {
            let bad = chi.perturbed(1, Rational64::new(1, 3));
            let report = multiplicativity_check(&bad, &pairs);
            let worst = report.entries.iter().filter_map(|e| e.defect).find(|d| *d != CircleValue::identity());
            checks.push(Check::new("psi/perturbed-detected", !report.passed).value(worst.map(|d| d.report_string()).unwrap_or_else(|| "0".into())));
        }
    }
    Ok(checks)
}

/// `∫_{S²×S²} Φ((i/2π)F) = n·m` for monopole pairs.
pub fn chern_weil_integrality(cfg: &SuiteConfig) -> Result<Vec<Check>, CliError> {
    let phi = InvariantPolynomial::new(1);
    let mut checks = Vec::new();
    for n in 0..=2 {
        for m in 0..=2 {
            let a = monopole_pair(n, m);
            let v = integrate_top_form(&chern_weil_4form(&a, &phi), a.domain(), cfg.flux_grid)?;
            checks.push(
                Check::within(format!("chern-weil/n={n},m={m}"), (v - (n * m) as f64).abs(), FLUX_TOL)
                    .value(format_float(v))
                    .expected((n * m).to_string()),
            );
        }
    }
    Ok(checks)
}

/// `CS(A^g) − CS(A) = ρ·deg(g)` for bump maps, with the degree from the
/// Jacobian oracle, on the zero and on a random background.
pub fn gauge_shift(cfg: &SuiteConfig) -> Result<Vec<Check>, CliError> {
    let phi = InvariantPolynomial::new(1);
    let backgrounds =
        [("zero", LatticeConnection::zero(GridDomain::torus(3)), cfg.cs_grid), ("random", random_su2(3, cfg.sub_seed(400), 0.4), cfg.shift_grid)];
    let mut checks = Vec::new();
    for w in [-1i64, 0, 1, 2] {
        let g = bump_degree(w, 0.4);
        let deg = g.jacobian_degree(cfg.cs_grid)?;
        for (name, a, grid) in &backgrounds {
            let r = gauge_shift_check(a, &g, &phi, &CsOptions { grid: *grid, ..Default::default() })?;
            let want = PURE_GAUGE_RATIO as f64 * deg;
            checks.push(
                Check::within(format!("shift/{name}/w={w}"), (r.shift - want).abs(), SHIFT_TOL)
                    .value(format_float(r.shift))
                    .expected(format_float(want))
                    .detail(json!({"degree_oracle": deg, "law_residual": r.law_residual})),
            );
            checks.push(Check::within(format!("exp-invariance/{name}/w={w}"), r.distance, SHIFT_TOL));
        }
    }
    Ok(checks)
}

/// The integrated path form against the explicit functional.
pub fn path_vs_explicit(cfg: &SuiteConfig) -> Result<Vec<Check>, CliError> {
    let phi = InvariantPolynomial::new(1);
    let opts = CsOptions { grid: cfg.cs_grid, ..Default::default() };
    let mut checks = Vec::new();
    let su2 = [
        ("zero", LatticeConnection::zero(GridDomain::torus(3))),
        ("constant", constant_su2(&[[0.3, 0.1, 0.0], [0.0, 0.7, 0.2], [0.5, 0.0, 0.4]])),
        ("random", random_su2(3, cfg.sub_seed(500), 0.6)),
        ("bump", gauge_transform(&LatticeConnection::zero(GridDomain::torus(3)), &bump_degree(1, 0.4))?),
    ];
    for (name, a) in &su2 {
        let (p, e) = (cs_path_integral(a, &phi, cfg.cs_grid)?, cs_explicit(a, 1, &opts)?);
        checks.push(Check::within(format!("path/{name}"), (p - e).abs(), PATH_TOL).value(format_float(e)));
    }
    let a = random_abelian(3, cfg.sub_seed(501), 0.5);
    let (p, e) = (cs_path_integral(&a, &phi, cfg.cs_grid)?, cs_explicit(&a, 1, &opts)?);
    checks.push(Check::within("path/abelian", (p - e).abs(), PATH_TOL).value(format_float(e)));
    Ok(checks)
}

/// Gauge-equivalent C-fields on `T⁴` have equal holonomy on the coordinate
/// 3-cycles.
pub fn cfield_equivalence(cfg: &SuiteConfig) -> Result<Vec<Check>, CliError> {
    let phi = InvariantPolynomial::new(1);
    let opts = CsOptions { grid: cfg.cfield_grid, ..Default::default() };
    let c = FormField::new(4, 3, |x| {
        let t = std::f64::consts::TAU;
        vec![0.1 * (t * x[3]).sin(), 0.2, 0.0, 0.05 * (t * x[0]).cos()]
    });
    let field = CField::new(random_su2(4, cfg.sub_seed(600), 0.5), c)?;
    let integral = |coeff: f64, axes: &[usize]| DifferentialCharacter::from_curvature(2, FormField::monomial(4, axes, coeff));
    let elements = [
        ("shift", GaugeElement { alpha: random_su2(4, cfg.sub_seed(601), 0.2), character: None }),
        ("shift+flux", GaugeElement { alpha: random_su2(4, cfg.sub_seed(602), 0.3), character: Some(integral(2.0, &[1, 2, 3])?) }),
        ("flux", GaugeElement { alpha: LatticeConnection::zero(GridDomain::torus(4)), character: Some(integral(-1.0, &[0, 1, 2])?) }),
    ];
    let cycles = coordinate_cycles(4);
    let mut checks = Vec::new();
    for (name, g) in &elements {
        let acted = cfield_act(g, &field, &phi)?;
        let r = cfield_equivalence_check(&field, &acted, &cycles, &phi, &opts, CFIELD_TOL)?;
        checks.push(Check::within(format!("cfield/{name}"), r.max_defect, CFIELD_TOL).detail(json!({"cycles": r.entries})));
    }
    Ok(checks)
}
