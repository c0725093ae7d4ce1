//! Browser bindings for three toolkit computations. Each returns a JSON string.
//!
//! The plain functions return `serde_json::Value` so they can be tested natively;
//! the `#[wasm_bindgen]` wrappers serialize them for the page.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use deligne_toolkit::chern_simons::{
    bump_degree, gauge_shift_check, CsOptions, GridDomain, InvariantPolynomial, LatticeConnection, PURE_GAUGE_RATIO,
};
use deligne_toolkit::deligne::builtin::monopole_two_chart;
use deligne_toolkit::holonomy::{holonomy, HolonomyOptions};
use deligne_toolkit::multiplicative::{dw_invariant, BranchedTriangulation, GroupCochain};
use deligne_toolkit::simplicial::meshes::{hemisphere_subordination, UvSphere};

const BUMP_RADIUS: f64 = 0.4;
/// Largest grid the page accepts for the gauge shift.
pub const MAX_GRID: usize = 48;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// Holonomy of the charge-`n` monopole around the equator of an
/// `n_phi × n_theta` sphere mesh.
pub fn equator_holonomy(n: i64, n_phi: usize, n_theta: usize) -> Result<Value, String> {
    if !n_theta.is_multiple_of(2) {
        return Err("n_theta must be even so the equator is a ring of the mesh".into());
    }
    let sphere = UvSphere::new(n_phi, n_theta).map_err(err)?;
    let loop_ = sphere.equator().map_err(err)?;
    let sub = hemisphere_subordination(&sphere.complex);
    let h = holonomy(&monopole_two_chart(n), &loop_, &sub, &HolonomyOptions::default()).map_err(err)?;
    Ok(json!({
        "angle": h.value.report_string(),
        "expected": if n.rem_euclid(2) == 0 { "0" } else { "1/2" },
        "quadrature_error": h.quadrature_error,
        "triangles": sphere.complex.count(2),
    }))
}

/// The Dijkgraaf–Witten invariant of a closed 3-manifold for `ℤ/n` with the
/// cocycle of level `k`.
pub fn dw(manifold: &str, n: usize, k: i64) -> Result<Value, String> {
    if !(1..=8).contains(&n) {
        return Err("group order must be between 1 and 8".into());
    }
    let m = match manifold {
        "sphere" => BranchedTriangulation::sphere3(),
        "torus" => BranchedTriangulation::lattice_torus(3, 1).map_err(err)?,
        other => match other.strip_prefix("lens") {
            Some(p) => BranchedTriangulation::lens(p.parse().map_err(|_| format!("bad lens space {other:?}"))?).map_err(err)?,
            None => return Err(format!("unknown manifold {other:?}")),
        },
    };
    let z = dw_invariant(&m, &GroupCochain::cyclic(n, k)).map_err(err)?;
    let c = z.to_complex();
    Ok(json!({ "value": z.to_string(), "re": c.re, "im": c.im }))
}

/// `CS(A^g) − CS(A)` for the zero connection on `T³` and the degree-`w` bump map.
pub fn gauge_shift(w: i64, grid: usize) -> Result<Value, String> {
    if !(8..=MAX_GRID).contains(&grid) {
        return Err(format!("grid must be between 8 and {MAX_GRID}"));
    }
    let g = bump_degree(w, BUMP_RADIUS);
    let a = LatticeConnection::zero(GridDomain::torus(3));
    let r = gauge_shift_check(&a, &g, &InvariantPolynomial::new(1), &CsOptions { grid, ..Default::default() }).map_err(err)?;
    let degree = g.jacobian_degree(grid).map_err(err)?;
    Ok(json!({
        "shift": r.shift,
        "expected": PURE_GAUGE_RATIO as f64 * degree,
        "degree": degree,
        "distance_to_integer": r.distance,
    }))
}

fn to_js(v: Result<Value, String>) -> Result<String, JsError> {
    v.map(|v| v.to_string()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = equatorHolonomy)]
pub fn equator_holonomy_js(n: i32, n_phi: u32, n_theta: u32) -> Result<String, JsError> {
    to_js(equator_holonomy(n.into(), n_phi as usize, n_theta as usize))
}

#[wasm_bindgen(js_name = dwInvariant)]
pub fn dw_js(manifold: &str, n: u32, k: i32) -> Result<String, JsError> {
    to_js(dw(manifold, n as usize, k.into()))
}

#[wasm_bindgen(js_name = gaugeShift)]
pub fn gauge_shift_js(w: i32, grid: u32) -> Result<String, JsError> {
    to_js(gauge_shift(w.into(), grid as usize))
}
