//! Runners for the single-computation tasks.

use serde_json::json;

use deligne_toolkit::chern_simons::json::{AnyConnection, ConnectionDoc, GaugeDoc};
use deligne_toolkit::chern_simons::GridDomain;
use deligne_toolkit::chern_simons::{
    cfield_act, cfield_equivalence_check, chern_weil_4form, coordinate_cycles, cs_explicit, cs_path_integral, gauge_shift_check, integrate_top_form,
    CField, CsConvention, CsOptions, GaugeElement, InvariantPolynomial, LatticeConnection, LITERAL_PURE_GAUGE_RATIO, PURE_GAUGE_RATIO,
};
use deligne_toolkit::circle::format_float;
use deligne_toolkit::deligne::json::{BuiltinCochain, CochainDoc};
use deligne_toolkit::deligne::{is_cocycle, DeligneCochain};
use deligne_toolkit::holonomy::{holonomy, HolonomyOptions};
use deligne_toolkit::multiplicative::json::{parse_rational, FiniteModelDoc, TriangulationDoc};
use deligne_toolkit::multiplicative::{check_triple, dw_brute_force, dw_invariant};
use deligne_toolkit::simplicial::meshes::{
    hemisphere_subordination, product_torus_cover, torus_subordination, two_chart_sphere_cover, TorusGrid, UvSphere,
};
use deligne_toolkit::simplicial::{barycentric_subdivide, greedy_subordination, Cover, Geometry, SimplicialComplex, Subordination};
use deligne_toolkit::transgression::{fiber_integral, transgress_over_circle, DifferentialCharacter, CIRCLE_NODES};
use deligne_toolkit::{CircleValue, FormField};

use crate::error::CliError;
use crate::report::Check;
use crate::scenario::{CycleDoc, GaugeElementDoc};

fn builtin_geometry(b: &BuiltinCochain) -> Geometry {
    match b {
        BuiltinCochain::Monopole { .. } => Geometry::sphere(),
        BuiltinCochain::FlatGerbe { .. } => Geometry::torus(2),
        BuiltinCochain::Flat3Form { .. } => Geometry::torus(3),
    }
}

/// The cochain with the cover it lives on, taken from the built-in unless given.
fn resolve_cochain(doc: &CochainDoc, cover: &Option<Cover>) -> Result<(DeligneCochain, Cover), CliError> {
    let xi = doc.clone().into_cochain()?;
    let cover = match (cover, &doc.builtin) {
        (Some(c), _) => c.clone(),
        (None, Some(b)) => b.cover()?,
        (None, None) => return Err(CliError::Invalid("an explicit cochain needs a `cover`".into())),
    };
    if cover.len() != xi.charts() {
        return Err(CliError::Invalid(format!("cover has {} charts, the cochain {}", cover.len(), xi.charts())));
    }
    Ok((xi, cover))
}

pub fn check_cocycle(
    doc: &CochainDoc,
    cover: &Option<Cover>,
    geometry: &Option<Geometry>,
    pool: usize,
    per_overlap: usize,
    seed: u64,
    tol: f64,
) -> Result<Vec<Check>, CliError> {
    let (xi, cover) = resolve_cochain(doc, cover)?;
    let geometry = match (geometry, &doc.builtin) {
        (Some(g), _) => g.clone(),
        (None, Some(b)) => builtin_geometry(b),
        (None, None) => return Err(CliError::Invalid("an explicit cochain needs a `geometry`".into())),
    };
    let samples = cover.overlap_samples(&geometry, pool, per_overlap, xi.degree() + 2, seed);
    let rep = is_cocycle(&xi, &geometry, &samples, per_overlap, tol)?;
    let rungs: Vec<_> = rep.residuals.rungs.iter().map(|r| json!({"rung": r.rung, "max": r.max, "worst_tuple": r.worst_tuple})).collect();
    Ok(vec![Check::within("cocycle", rep.residuals.max(), tol).detail(json!({ "rungs": rungs }))])
}

fn cycle_and_subordination(cycle: &CycleDoc, cover: &Cover) -> Result<(SimplicialComplex, Subordination), CliError> {
    let sphere_sub = |s: &UvSphere| -> Result<Subordination, CliError> {
        if *cover == two_chart_sphere_cover() {
            Ok(hemisphere_subordination(&s.complex))
        } else {
            Ok(greedy_subordination(&s.complex, cover, 4)?)
        }
    };
    Ok(match cycle {
        CycleDoc::Equator { n_phi, n_theta } => {
            let s = UvSphere::new(*n_phi, *n_theta)?;
            (s.equator()?, sphere_sub(&s)?)
        }
        CycleDoc::Ring { r, n_phi, n_theta } => {
            let s = UvSphere::new(*n_phi, *n_theta)?;
            (s.ring(*r)?, sphere_sub(&s)?)
        }
        CycleDoc::Torus { dim, n } => {
            let t = TorusGrid::new(*dim, *n)?;
            let sub = greedy_subordination(&t.complex, cover, 4)?;
            (t.complex, sub)
        }
        CycleDoc::Mesh { mesh } => {
            let m = mesh.clone().into_mesh()?;
            if m.cover != *cover {
                return Err(CliError::Invalid("the mesh cover differs from the cochain cover".into()));
            }
            (m.complex, m.subordination)
        }
    })
}

fn expected_angle(s: &str) -> Result<CircleValue, CliError> {
    if s.contains('/') || s.trim().parse::<i64>().is_ok() {
        Ok(CircleValue::from_rational(parse_rational(s)?))
    } else {
        let v: f64 = s.trim().parse().map_err(|_| CliError::Invalid(format!("bad expected angle {s:?}")))?;
        Ok(CircleValue::float(v))
    }
}

#[allow(clippy::too_many_arguments)]
pub fn holonomy_task(
    doc: &CochainDoc,
    cover: &Option<Cover>,
    cycle: &CycleDoc,
    expected: &Option<String>,
    subdivisions: usize,
    amplitudes: bool,
    tol: f64,
) -> Result<Vec<Check>, CliError> {
    let (xi, cover) = resolve_cochain(doc, cover)?;
    let (mut k, mut sub) = cycle_and_subordination(cycle, &cover)?;
    for _ in 0..subdivisions {
        (k, sub) = barycentric_subdivide(&k, &sub)?;
    }
    let opts = HolonomyOptions::default();
    let h = holonomy(&xi, &k, &sub, &opts)?;
    let mut checks = Vec::new();
    let mut quad = Check::within("quadrature", h.quadrature_error, tol).value(h.value.report_string());
    if amplitudes {
        let table: Vec<_> =
            h.amplitudes.iter().map(|(key, c, a)| json!({"simplex": key, "coefficient": c, "amplitude": a.report_string()})).collect();
        quad = quad.detail(json!({ "amplitudes": table }));
    }
    checks.push(quad);
    if let Some(e) = expected {
        let want = expected_angle(e)?;
        checks.push(Check::within("expected", h.value.distance(&want), tol).value(h.value.report_string()).expected(want.report_string()));
    }
    Ok(checks)
}

pub fn transgress_task(doc: &CochainDoc, base: usize, expected: &Option<String>, points: usize, seed: u64, tol: f64) -> Result<Vec<Check>, CliError> {
    let xi = doc.clone().into_cochain()?;
    let cover = product_torus_cover(base);
    if xi.dim() != base + 1 || xi.charts() != cover.len() {
        return Err(CliError::Invalid(format!(
            "transgression over S¹ × T^{base} needs a cochain on {} charts in dimension {}",
            cover.len(),
            base + 1
        )));
    }
    let chi = transgress_over_circle(&xi, &cover, HolonomyOptions::default())?;
    let grid = TorusGrid::new(base, 3)?;
    let sub = torus_subordination(&grid.complex)?;
    let hol = chi.holonomy(&grid.complex, &sub)?;
    let mut checks = Vec::new();
    match expected {
        Some(e) => {
            let want = expected_angle(e)?;
            checks.push(Check::within("holonomy", hol.distance(&want), tol).value(hol.report_string()).expected(want.report_string()));
        }
        None => checks.push(Check::new("holonomy", true).value(hol.report_string())),
    }
    // The top form of chart 0 stands in for the global curvature primitive;
    // the cocycle condition makes its differential chart independent.
    let top = xi.component(3).value(&[0])?;
    let down = fiber_integral(&top, CIRCLE_NODES)?;
    let d_down = FormField::new(base, 2, move |y| down.coefficients(y)).exterior_derivative();
    let pts = GridDomain::torus(base).sample(points, seed);
    let gap = pts
        .iter()
        .flat_map(|y| chi.curvature().coefficients(y).into_iter().zip(d_down.coefficients(y)).map(|(a, b)| (a - b).abs()).collect::<Vec<_>>())
        .fold(0.0, f64::max);
    // Over T² both sides vanish identically; the scale shows whether the comparison had content.
    let scale = pts.iter().flat_map(|y| chi.curvature().coefficients(y)).fold(0.0f64, |m, v| m.max(v.abs()));
    checks.push(Check::within("curvature-diagram", gap, tol).detail(json!({ "points": pts.len(), "curvature_scale": scale })));
    Ok(checks)
}

pub fn dw_task(tri: &TriangulationDoc, model: &FiniteModelDoc, expected: &Option<String>, brute_force: bool) -> Result<Vec<Check>, CliError> {
    let m = tri.build()?;
    let omega = model.build()?;
    let rep = check_triple(&omega);
    let mut checks = vec![Check::new("cocycle", rep.passed).detail(json!({ "violations": rep.violations }))];
    if !rep.passed {
        return Ok(checks);
    }
    let z = dw_invariant(&m, &omega)?;
    let (re, im) = (z.to_complex().re, z.to_complex().im);
    let mut value = Check::new("invariant", true).value(z.to_string()).detail(json!({"re": re, "im": im}));
    if let Some(e) = expected {
        let want = parse_rational(e)?;
        value = Check { passed: z.as_rational() == Some(want), ..value.expected(want.to_string()) };
    }
    checks.push(value);
    if brute_force {
        let b = dw_brute_force(&m, &omega)?;
        checks.push(Check::new("brute-force", b == z).value(b.to_string()).expected(z.to_string()));
    }
    Ok(checks)
}

pub fn triple_task(model: &FiniteModelDoc) -> Result<Vec<Check>, CliError> {
    let omega = model.build()?;
    let rep = check_triple(&omega);
    Ok(vec![Check::new("cocycle-identity", rep.passed).detail(json!({"checked": rep.checked, "violations": rep.violations}))])
}

fn cs_checks<const N: usize>(
    a: &LatticeConnection<N>,
    level: i64,
    opts: &CsOptions,
    expected: Option<f64>,
    tol: f64,
) -> Result<Vec<Check>, CliError> {
    let phi = InvariantPolynomial::new(level);
    let mut checks = Vec::new();
    if a.dim() == 4 {
        let v = integrate_top_form(&chern_weil_4form(a, &phi), a.domain(), opts.grid)?;
        checks.push(Check::within("chern-weil-integrality", (v - v.round()).abs(), tol).value(format_float(v)));
        if let Some(e) = expected {
            checks.push(Check::within("expected", (v - e).abs(), tol).value(format_float(v)).expected(e.to_string()));
        }
        return Ok(checks);
    }
    let v = cs_explicit(a, level, opts)?;
    checks.push(Check::new("cs", true).value(format_float(v)));
    if opts.convention == CsConvention::ChernWeil {
        let p = cs_path_integral(a, &phi, opts.grid)?;
        checks.push(Check::within("path-vs-explicit", (p - v).abs(), tol).value(format_float(p)).expected(format_float(v)));
    }
    if let Some(e) = expected {
        checks.push(Check::within("expected", (v - e).abs(), tol).value(format_float(v)).expected(e.to_string()));
    }
    Ok(checks)
}

pub fn cs_task(
    connection: &ConnectionDoc,
    gauge: &Option<GaugeDoc>,
    level: i64,
    convention: CsConvention,
    grid: usize,
    expected: Option<f64>,
    tol: f64,
) -> Result<Vec<Check>, CliError> {
    let opts = CsOptions { convention, grid };
    let a = connection.build()?;
    let mut checks = match &a {
        AnyConnection::Abelian(a) => cs_checks(a, level, &opts, expected, tol)?,
        AnyConnection::Su2(a) => cs_checks(a, level, &opts, expected, tol)?,
    };
    let Some(gauge) = gauge else { return Ok(checks) };
    let AnyConnection::Su2(a) = &a else {
        return Err(CliError::Invalid("gauge transformations act on su(2) connections".into()));
    };
    let g = gauge.build()?;
    let phi = InvariantPolynomial::new(level);
    let r = gauge_shift_check(a, &g, &phi, &opts)?;
    let deg = g.jacobian_degree(grid)?;
    let ratio = match convention {
        CsConvention::ChernWeil => PURE_GAUGE_RATIO,
        CsConvention::Literal => LITERAL_PURE_GAUGE_RATIO,
    };
    let want = (ratio * level) as f64 * deg;
    checks.push(
        Check::within("gauge-shift", (r.shift - want).abs(), tol)
            .value(format_float(r.shift))
            .expected(format_float(want))
            .detail(json!({"degree_oracle": deg, "ratio": ratio, "before": r.before, "after": r.after})),
    );
    checks.push(Check::within("gauge-law", r.law_residual, tol).detail(json!({"pullback_term": r.pullback_term, "exact_term": r.exact_term})));
    checks.push(Check::within("exp-invariance", r.distance, tol).value(r.nearest_integer.to_string()));
    Ok(checks)
}

fn su2_on_t4(doc: &ConnectionDoc, what: &str) -> Result<LatticeConnection<2>, CliError> {
    match doc.build()? {
        AnyConnection::Su2(a) if a.dim() == 4 && a.domain().is_torus() => Ok(a),
        _ => Err(CliError::Invalid(format!("{what} must be an su(2) connection on the 4-torus"))),
    }
}

fn constant_3form(coeffs: &[f64], what: &str) -> Result<FormField, CliError> {
    if coeffs.len() != 4 {
        return Err(CliError::Invalid(format!("{what}: a 3-form on T⁴ has 4 coefficients, got {}", coeffs.len())));
    }
    Ok(FormField::constant(4, 3, coeffs.to_vec()))
}

pub fn cfield_task(
    connection: &ConnectionDoc,
    form: &Option<Vec<f64>>,
    elements: &[GaugeElementDoc],
    level: i64,
    grid: usize,
    tol: f64,
) -> Result<Vec<Check>, CliError> {
    let a = su2_on_t4(connection, "connection")?;
    let c = match form {
        Some(coeffs) => constant_3form(coeffs, "form")?,
        None => FormField::zero(4, 3),
    };
    let field = CField::new(a, c)?;
    let phi = InvariantPolynomial::new(level);
    let opts = CsOptions { grid, ..Default::default() };
    let cycles = coordinate_cycles(4);
    let mut checks = Vec::new();
    for (i, e) in elements.iter().enumerate() {
        let alpha = su2_on_t4(&e.alpha, "alpha")?;
        let character = match &e.curvature {
            Some(h) => Some(DifferentialCharacter::from_curvature(2, constant_3form(h, "curvature")?)?),
            None => None,
        };
        let acted = cfield_act(&GaugeElement { alpha, character }, &field, &phi)?;
        let r = cfield_equivalence_check(&field, &acted, &cycles, &phi, &opts, tol)?;
        checks.push(Check::within(format!("element{i}"), r.max_defect, tol).detail(json!({ "cycles": r.entries })));
    }
    Ok(checks)
}
