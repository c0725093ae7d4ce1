//! Integration over a circle factor.
//!
//! A degree-3 cocycle on `S¹ × N` (circle coordinate first) transgresses to a
//! degree-2 differential character on `N`: its holonomy on a surface `Σ` is the
//! holonomy of the cocycle on the prism triangulation of `Σ × S¹`, and its
//! curvature is the fiber integral of the curvature.
//!
//! Fiber integrals put the circle direction last,
//! `(∫κ)(X₁, …, X_r) = ∫ κ(X₁, …, X_r, ∂_t) dt`, which makes `d` commute with
//! `∫` and matches the base-first orientation of `Σ × S¹`.

mod finite;

pub use finite::{psi_finite_group, FiniteCharacter, LoopColoring};

use std::sync::Arc;

use serde::Serialize;

use crate::circle::CircleValue;
use crate::deligne::DeligneCochain;
use crate::error::{Error, Result};
use crate::form::{binomial, subset_index, subsets, FormField};
use crate::holonomy::{holonomy, integrate_chain, HolonomyOptions};
use crate::quadrature::periodic_trapezoid;
use crate::simplicial::{product_subordination, product_with_circle, Cover, SimplicialComplex, Subordination};

pub type HolonomyOracle = Arc<dyn Fn(&SimplicialComplex, &Subordination) -> Result<CircleValue> + Send + Sync>;

/// Default number of circle nodes for fiber integrals.
pub const CIRCLE_NODES: usize = 64;

/// A holonomy functional on `p`-cycles together with its curvature.
#[derive(Clone)]
pub struct DifferentialCharacter {
    degree: usize,
    curvature: FormField,
    oracle: Option<HolonomyOracle>,
}

impl std::fmt::Debug for DifferentialCharacter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DifferentialCharacter")
            .field("degree", &self.degree)
            .field("curvature", &self.curvature)
            .field("has_holonomy", &self.oracle.is_some())
            .finish()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CharacterCheck {
    pub holonomy: CircleValue,
    pub flux: f64,
    pub residual: f64,
}

impl DifferentialCharacter {
    pub fn new(degree: usize, curvature: FormField, oracle: HolonomyOracle) -> Result<Self> {
        if curvature.degree() != degree + 1 {
            return Err(Error::Structure(format!("a degree-{degree} character needs a {}-form curvature", degree + 1)));
        }
        Ok(DifferentialCharacter { degree, curvature, oracle: Some(oracle) })
    }

    /// A character known only through its curvature.
    pub fn from_curvature(degree: usize, curvature: FormField) -> Result<Self> {
        if curvature.degree() != degree + 1 {
            return Err(Error::Structure("curvature degree mismatch".into()));
        }
        Ok(DifferentialCharacter { degree, curvature, oracle: None })
    }

    /// The character of a cocycle: holonomy by the local formula, curvature
    /// `dωᵖ` glued by the first chart containing each point.
    pub fn of_cocycle(xi: &DeligneCochain, cover: &Cover, opts: HolonomyOptions) -> Self {
        let p = xi.degree();
        let local = xi.component(p).d();
        let cover2 = cover.clone();
        let dim = xi.dim();
        let n = binomial(dim, p + 1);
        let nn = binomial(dim, p + 2);
        let curvature = FormField::new(dim, p + 1, move |x| {
            let chart = cover2.charts_at(x).first().copied().unwrap_or(0);
            local.value(&[chart]).map(|f| f.coefficients(x)).unwrap_or_else(|_| vec![0.0; n])
        })
        .with_derivative(move |_| vec![0.0; nn]);
        let xi = xi.clone();
        let oracle: HolonomyOracle = Arc::new(move |k, s| Ok(holonomy(&xi, k, s, &opts)?.value));
        DifferentialCharacter { degree: p, curvature, oracle: Some(oracle) }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn curvature(&self) -> &FormField {
        &self.curvature
    }

    pub fn has_holonomy(&self) -> bool {
        self.oracle.is_some()
    }

    pub fn holonomy(&self, cycle: &SimplicialComplex, sub: &Subordination) -> Result<CircleValue> {
        let oracle = self.oracle.as_ref().ok_or_else(|| Error::Precondition("character carries curvature only".into()))?;
        oracle(cycle, sub)
    }

    /// `hol(∂W)` against `∫_W curvature`.
    pub fn character_check(&self, w: &SimplicialComplex, sub: &Subordination, order: usize) -> Result<CharacterCheck> {
        let boundary = w.with_chain(w.chain().boundary())?;
        let hol = self.holonomy(&boundary, sub)?;
        let flux = integrate_chain(w, w.chain(), &self.curvature, order);
        Ok(CharacterCheck { holonomy: hol, flux, residual: hol.distance(&CircleValue::float(flux)) })
    }
}

/// `∫_{S¹} κ` for a form on `S¹ × N` with the circle (period 1) as coordinate 0.
pub fn fiber_integral(kappa: &FormField, nodes: usize) -> Result<FormField> {
    let r = kappa.degree().checked_sub(1).ok_or_else(|| Error::Structure("cannot fiber-integrate a function".into()))?;
    let dim = kappa.dim();
    if dim == 0 {
        return Err(Error::Structure("no circle coordinate".into()));
    }
    let base = dim - 1;
    let (ts, w) = periodic_trapezoid(nodes.max(32));
    let kappa = kappa.clone();
    // Base subset J ↦ index of {0} ∪ (J + 1), with sign (-1)^|J| from moving ∂_t last.
    let map: Vec<usize> = subsets(base, r)
        .iter()
        .map(|j| {
            let mut full = vec![0];
            full.extend(j.iter().map(|i| i + 1));
            subset_index(dim, &full)
        })
        .collect();
    let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
    Ok(FormField::new(base, r, move |y| {
        let mut out = vec![0.0; map.len()];
        let mut x = Vec::with_capacity(dim);
        for &t in &ts {
            x.clear();
            x.push(t);
            x.extend_from_slice(y);
            let c = kappa.coefficients(&x);
            for (o, &idx) in out.iter_mut().zip(&map) {
                *o += sign * w * c[idx];
            }
        }
        out
    }))
}

/// Number of circle segments used for the prism triangulation `Σ × S¹`.
pub const PRISM_SEGMENTS: usize = 6;

/// Transgress a degree-3 cocycle on `S¹ × N`, given on a product cover, to a
/// degree-2 character on `N`. Base cycles are subordinated to the base factor
/// of the cover.
pub fn transgress_over_circle(xi3: &DeligneCochain, cover: &Cover, opts: HolonomyOptions) -> Result<DifferentialCharacter> {
    if xi3.degree() != 3 {
        return Err(Error::Structure(format!("transgression takes degree 3, got {}", xi3.degree())));
    }
    let (_, n_base) = cover.product.ok_or_else(|| Error::Structure("transgression needs a product cover of S¹ × N".into()))?;
    if cover.len() != xi3.charts() {
        return Err(Error::Structure(format!("cover has {} charts, cochain {}", cover.len(), xi3.charts())));
    }
    let upstairs = DifferentialCharacter::of_cocycle(xi3, cover, opts);
    let curvature = fiber_integral(upstairs.curvature(), CIRCLE_NODES)?;
    let xi3 = xi3.clone();
    let cover = cover.clone();
    let oracle: HolonomyOracle = Arc::new(move |k: &SimplicialComplex, s: &Subordination| {
        if let Some((_, c)) = s.iter().find(|(_, c)| *c >= n_base) {
            return Err(Error::Structure(format!("base chart {c} outside the base cover")));
        }
        let prod = product_with_circle(k, PRISM_SEGMENTS)?;
        let sub = product_subordination(&prod, s, &cover)?;
        Ok(holonomy(&xi3, &prod.complex, &sub, &opts)?.value)
    });
    DifferentialCharacter::new(2, curvature, oracle)
}

/// Pointwise comparison of `d(∫_{S¹} C)` (finite differences) with
/// `∫_{S¹} dC` for a global 3-form `C` on `S¹ × N`, at the given base points.
pub fn curvature_diagram_residual(c: &FormField, points: &[Vec<f64>]) -> Result<f64> {
    let lhs = fiber_integral(c, CIRCLE_NODES)?;
    let lhs = FormField::new(lhs.dim(), lhs.degree(), move |y| lhs.coefficients(y)).exterior_derivative();
    let rhs = fiber_integral(&c.exterior_derivative(), CIRCLE_NODES)?;
    let mut worst = 0.0f64;
    for y in points {
        for (a, b) in lhs.coefficients(y).iter().zip(rhs.coefficients(y)) {
            worst = worst.max((a - b).abs());
        }
    }
    Ok(worst)
}

/// Periods of a closed form on `S¹ × N` against a cycle `Σ ⊂ N`:
/// `(∫_Σ ∫_{S¹} κ, ∫_{Σ × S¹} κ)`. Both equal the slant of the integer class
/// of `κ` evaluated on `Σ`.
pub fn slant_periods(kappa: &FormField, sigma: &SimplicialComplex, order: usize) -> Result<(f64, f64)> {
    let down = fiber_integral(kappa, CIRCLE_NODES)?;
    let a = integrate_chain(sigma, sigma.chain(), &down, order);
    let prod = product_with_circle(sigma, PRISM_SEGMENTS)?;
    let b = integrate_chain(&prod.complex, prod.complex.chain(), kappa, order);
    Ok((a, b))
}

#[cfg(test)]
mod tests;
