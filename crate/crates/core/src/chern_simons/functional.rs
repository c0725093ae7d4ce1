//! Chern–Weil forms and the Chern–Simons functional.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::connection::LatticeConnection;
use super::domain::GridDomain;
use super::gauge::{gauge_transform, GaugeTransformation};
use super::matrix::{su2, su2_exp, trace_wedge_coefficients, wedge_coefficients, wedge_table, Mat};
use crate::error::{Error, Result};
use crate::form::{binomial, subsets, FormField};
use crate::quadrature::gauss_legendre;

/// `(i/2π)²`, the factor picked up by a quadratic polynomial evaluated on `(i/2π)F`.
pub const CURVATURE_NORMALIZATION: f64 = -1.0 / (4.0 * PI * PI);

/// Nodes of the Gauss rule used for path integrals in `t`; the integrands are
/// polynomials of degree at most 2.
const PATH_NODES: usize = 4;

pub const DEFAULT_GRID: usize = 32;

/// `CS(g⁻¹dg) / deg g` at level 1 under [`CsConvention::ChernWeil`].
pub const PURE_GAUGE_RATIO: i64 = 1;
/// The same ratio under [`CsConvention::Literal`].
pub const LITERAL_PURE_GAUGE_RATIO: i64 = -2;

/// The trace-square polynomial `Φ(X, Y) = (k/2)·tr(XY)` at level `k`.
///
/// On `(i/2π)F` this is the Chern character normalization, so a `U(1)`
/// bundle with first Chern form `c` gives `Φ = (k/2)c²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantPolynomial {
    pub level: i64,
}

impl InvariantPolynomial {
    pub fn new(level: i64) -> Self {
        InvariantPolynomial { level }
    }

    pub fn bilinear<const N: usize>(&self, x: &Mat<N>, y: &Mat<N>) -> Complex64 {
        (x * y).trace() * (self.level as f64 / 2.0)
    }

    /// `Φ(α ∧ β)` on coefficient vectors of matrix forms of degrees `p`, `q`.
    pub fn pair<const N: usize>(&self, dim: usize, p: usize, q: usize, alpha: &[Mat<N>], beta: &[Mat<N>]) -> Vec<f64> {
        self.pair_with(&wedge_table(dim, p, q), binomial(dim, p + q), alpha, beta)
    }

    /// [`Self::pair`] with the wedge table supplied, for hot loops.
    pub fn pair_with<const N: usize>(&self, table: &[(usize, usize, usize, f64)], len: usize, alpha: &[Mat<N>], beta: &[Mat<N>]) -> Vec<f64> {
        let mut v = trace_wedge_coefficients(table, len, alpha, beta);
        v.iter_mut().for_each(|c| *c *= self.level as f64 / 2.0);
        v
    }

    /// Largest `|Φ(gXg⁻¹, gYg⁻¹) − Φ(X, Y)|` over random `su(2)` samples.
    pub fn ad_invariance_defect(&self, samples: usize, seed: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut coeffs = || [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
        (0..samples)
            .map(|_| {
                let (x, y, g) = (su2(coeffs()), su2(coeffs()), su2_exp(coeffs()));
                let gi = g.adjoint();
                (self.bilinear(&(g * x * gi), &(g * y * gi)) - self.bilinear(&x, &y)).norm()
            })
            .fold(0.0, f64::max)
    }
}

/// `Φ((i/2π)F ∧ (i/2π)F)`, a closed real 4-form.
pub fn chern_weil_4form<const N: usize>(a: &LatticeConnection<N>, phi: &InvariantPolynomial) -> FormField {
    let dim = a.dim();
    let (a, phi) = (a.clone(), *phi);
    let (table, len) = (wedge_table(dim, 2, 2), binomial(dim, 4));
    FormField::new(dim, 4, move |x| {
        let f = a.curvature_at(x);
        let mut v = phi.pair_with(&table, len, &f, &f);
        v.iter_mut().for_each(|c| *c *= CURVATURE_NORMALIZATION);
        v
    })
}

fn gauss_unit() -> (Vec<f64>, Vec<f64>) {
    gauss_legendre(PATH_NODES)
}

/// The Chern–Simons 3-form of `A` relative to the trivial connection, as the
/// fibre integral over `t ∈ [0,1]` of `Φ((i/2π)F)` for `𝔸 = t·A` on `M × [0,1]`:
/// `cs = 2(i/2π)² ∫₀¹ Φ(A ∧ F_t) dt`, `F_t = t·dA + t²·A ∧ A`.
/// Its exterior derivative is [`chern_weil_4form`].
pub fn cs_form_path<const N: usize>(a: &LatticeConnection<N>, phi: &InvariantPolynomial) -> FormField {
    let dim = a.dim();
    let (a, phi) = (a.clone(), *phi);
    let (ts, ws) = gauss_unit();
    FormField::new(dim, 3, move |x| {
        let comps = a.components(x);
        let (d, sq) = a.curvature_parts(x);
        let mut out = vec![0.0; binomial(dim, 3)];
        for (t, w) in ts.iter().zip(&ws) {
            let f: Vec<Mat<N>> = d.iter().zip(&sq).map(|(p, q)| p * Complex64::from(*t) + q * Complex64::from(t * t)).collect();
            for (o, v) in out.iter_mut().zip(phi.pair(dim, 1, 2, &comps, &f)) {
                *o += 2.0 * CURVATURE_NORMALIZATION * w * v;
            }
        }
        out
    })
}

/// The relative Chern–Simons form along the straight path `A + sα`,
/// `α = A' − A`: `−2(i/2π)² ∫₀¹ Φ(α ∧ F_s) ds`. On a closed 3-cycle its
/// integral is `CS(A) − CS(A')`.
pub fn relative_cs<const N: usize>(a: &LatticeConnection<N>, a2: &LatticeConnection<N>, phi: &InvariantPolynomial) -> Result<FormField> {
    if a.domain() != a2.domain() {
        return Err(Error::Structure("connections live on different domains".into()));
    }
    let dim = a.dim();
    let (a, a2, phi) = (a.clone(), a2.clone(), *phi);
    let (ts, ws) = gauss_unit();
    let pairs = subsets(dim, 2);
    Ok(FormField::new(dim, 3, move |x| {
        let (u, v) = (a.components(x), a2.components(x));
        let alpha: Vec<Mat<N>> = u.iter().zip(&v).map(|(p, q)| q - p).collect();
        let (du, dv) = (a.partials(x), a2.partials(x));
        let mut out = vec![0.0; binomial(dim, 3)];
        for (s, w) in ts.iter().zip(&ws) {
            let sc = Complex64::from(*s);
            let path: Vec<Mat<N>> = u.iter().zip(&alpha).map(|(p, q)| p + q * sc).collect();
            let f: Vec<Mat<N>> = pairs
                .iter()
                .map(|p| {
                    let (m, n) = (p[0], p[1]);
                    let dm = du[m][n] - du[n][m];
                    let dd = (dv[m][n] - dv[n][m]) - dm;
                    dm + dd * sc + path[m] * path[n] - path[n] * path[m]
                })
                .collect();
            for (o, val) in out.iter_mut().zip(phi.pair(dim, 1, 2, &alpha, &f)) {
                *o -= 2.0 * CURVATURE_NORMALIZATION * w * val;
            }
        }
        out
    }))
}

/// Coefficient convention for the explicit functional
/// `s·(k/8π²)∫ tr(A ∧ dA + c·A ∧ A ∧ A)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CsConvention {
    /// `s = −1`, `c = 2/3`: the integral of [`cs_form_path`], so that `d` of the
    /// integrand is the Chern–Weil form of [`InvariantPolynomial`].
    #[default]
    ChernWeil,
    /// `s = +1`, `c = 1/3`, the coefficients as commonly misprinted.
    Literal,
}

impl CsConvention {
    pub fn sign(self) -> f64 {
        match self {
            CsConvention::ChernWeil => -1.0,
            CsConvention::Literal => 1.0,
        }
    }

    pub fn cubic(self) -> f64 {
        match self {
            CsConvention::ChernWeil => 2.0 / 3.0,
            CsConvention::Literal => 1.0 / 3.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CsOptions {
    pub convention: CsConvention,
    /// Trapezoid nodes per axis.
    pub grid: usize,
}

impl Default for CsOptions {
    fn default() -> Self {
        CsOptions { convention: CsConvention::ChernWeil, grid: DEFAULT_GRID }
    }
}

fn require_closed_3d(domain: &GridDomain) -> Result<()> {
    if domain.dim() != 3 {
        return Err(Error::Structure(format!("Chern–Simons needs a 3-dimensional domain, got {}", domain.dim())));
    }
    if !domain.is_torus() {
        return Err(Error::Precondition("open domain: boundary terms are not supported".into()));
    }
    Ok(())
}

/// `∫_M ω` for a top-degree form on a coordinate domain.
pub fn integrate_top_form(form: &FormField, domain: &GridDomain, grid: usize) -> Result<f64> {
    if form.dim() != domain.dim() || form.degree() != domain.dim() {
        return Err(Error::Structure(format!("cannot integrate a {}-form on a {}-dimensional domain", form.degree(), domain.dim())));
    }
    Ok(domain.integrate(grid, |x| form.coefficients(x)[0]))
}

/// The level-1 functional; [`cs_explicit`] multiplies it by the level.
pub fn cs_unit<const N: usize>(a: &LatticeConnection<N>, opts: &CsOptions) -> Result<f64> {
    require_closed_3d(a.domain())?;
    let c = opts.convention.cubic();
    let t12 = wedge_table(3, 1, 2);
    let t11 = wedge_table(3, 1, 1);
    let integral = a.domain().integrate(opts.grid, |x| {
        let comps = a.components(x);
        let (d, _) = a.curvature_parts(x);
        let aa = wedge_coefficients(&t11, 3, &comps, &comps);
        let quad = trace_wedge_coefficients(&t12, 1, &comps, &d)[0];
        let cubic = trace_wedge_coefficients(&t12, 1, &comps, &aa)[0];
        quad + c * cubic
    });
    Ok(opts.convention.sign() * integral / (8.0 * PI * PI))
}

/// `CS_k(A)` on the closed 3-torus.
pub fn cs_explicit<const N: usize>(a: &LatticeConnection<N>, level: i64, opts: &CsOptions) -> Result<f64> {
    Ok(level as f64 * cs_unit(a, opts)?)
}

/// Integral of [`cs_form_path`] over the closed 3-torus.
pub fn cs_path_integral<const N: usize>(a: &LatticeConnection<N>, phi: &InvariantPolynomial, grid: usize) -> Result<f64> {
    require_closed_3d(a.domain())?;
    integrate_top_form(&cs_form_path(a, phi), a.domain(), grid)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaugeShiftReport {
    pub before: f64,
    pub after: f64,
    pub shift: f64,
    /// `CS(g⁻¹dg)`: the integral of the pulled-back 3-form term.
    pub pullback_term: f64,
    /// Integral of the exact term `d(tr(dg·g⁻¹ ∧ A))`, zero by Stokes.
    pub exact_term: f64,
    /// `|shift − pullback_term − exact_term|`.
    pub law_residual: f64,
    pub nearest_integer: i64,
    pub distance: f64,
}

/// Evaluate both sides of `CS(A^g) = CS(A) + CS(g⁻¹dg) + ∫d(…)` on the 3-torus.
pub fn gauge_shift_check<const N: usize>(
    a: &LatticeConnection<N>,
    g: &GaugeTransformation<N>,
    phi: &InvariantPolynomial,
    opts: &CsOptions,
) -> Result<GaugeShiftReport> {
    require_closed_3d(a.domain())?;
    let ag = gauge_transform(a, g)?;
    let pure = gauge_transform(&LatticeConnection::zero(a.domain().clone()), g)?;
    let before = cs_explicit(a, phi.level, opts)?;
    let after = cs_explicit(&ag, phi.level, opts)?;
    let pullback_term = cs_explicit(&pure, phi.level, opts)?;
    // (k/8π²)·d tr(dg g⁻¹ ∧ A), with the sign of the convention
    let scale = -opts.convention.sign() * phi.level as f64 / (8.0 * PI * PI);
    let (a2, g2) = (a.clone(), g.clone());
    let t11 = wedge_table(3, 1, 1);
    let two_form = FormField::new(3, 2, move |x| {
        let u = g2.value(x);
        let right: Vec<Mat<N>> = g2.partials(x).iter().map(|d| d * u.adjoint()).collect();
        trace_wedge_coefficients(&t11, 3, &right, &a2.components(x)).into_iter().map(|v| scale * v).collect()
    });
    let exact_term = integrate_top_form(&two_form.exterior_derivative(), a.domain(), opts.grid)?;
    let shift = after - before;
    let nearest = shift.round();
    Ok(GaugeShiftReport {
        before,
        after,
        shift,
        pullback_term,
        exact_term,
        law_residual: (shift - pullback_term - exact_term).abs(),
        nearest_integer: nearest as i64,
        distance: (shift - nearest).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chern_simons::connection::{constant_su2, monopole_pair, random_abelian, random_su2};
    use crate::chern_simons::gauge::{abelian_winding, bump_degree};
    use crate::chern_simons::matrix::su2_exp;

    const UNIT: InvariantPolynomial = InvariantPolynomial { level: 1 };

    #[test]
    fn polynomial_is_ad_invariant() {
        assert!(InvariantPolynomial::new(3).ad_invariance_defect(100, 1) < 1e-10);
    }

    #[test]
    fn flat_connection_has_zero_forms() {
        let a = LatticeConnection::<2>::zero(GridDomain::torus(4));
        let x = [0.1, 0.2, 0.3, 0.4];
        assert_eq!(chern_weil_4form(&a, &UNIT).coefficients(&x), vec![0.0]);
        assert!(cs_form_path(&a, &UNIT).coefficients(&x).iter().all(|v| *v == 0.0));
        let a3 = LatticeConnection::<2>::zero(GridDomain::torus(3));
        assert_eq!(cs_explicit(&a3, 1, &CsOptions::default()).unwrap(), 0.0);
    }

    #[test]
    fn chern_weil_integral_on_sphere_pairs() {
        for (n, m) in [(1, 1), (2, 1), (0, 2)] {
            let a = monopole_pair(n, m);
            let v = integrate_top_form(&chern_weil_4form(&a, &UNIT), a.domain(), 16).unwrap();
            assert!((v - (n * m) as f64).abs() < 1e-6, "({n},{m}): {v}");
        }
    }

    // Closed form of the t-integral for commuting A: ∫₀¹ 2t dt = 1, so
    // cs = (i/2π)²·(k/2)·tr(A ∧ dA) = −(k/8π²)·tr(A ∧ dA).
    #[test]
    fn abelian_path_form_is_the_quadratic_term() {
        let a = random_abelian(3, 11, 0.8);
        let cs = cs_form_path(&a, &InvariantPolynomial::new(2));
        for x in a.domain().sample(20, 4) {
            let comps = a.components(&x);
            let (d, _) = a.curvature_parts(&x);
            let tr = trace_wedge_coefficients(&wedge_table(3, 1, 2), 1, &comps, &d)[0];
            let expected = -2.0 * tr / (8.0 * PI * PI);
            assert!((cs.coefficients(&x)[0] - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn path_form_is_a_primitive_of_the_chern_weil_form() {
        let a = random_su2(4, 21, 0.6);
        let phi = InvariantPolynomial::new(1);
        let d = cs_form_path(&a, &phi).exterior_derivative();
        let cw = chern_weil_4form(&a, &phi);
        for x in a.domain().sample(50, 8) {
            assert!((d.coefficients(&x)[0] - cw.coefficients(&x)[0]).abs() < 1e-6);
        }
    }

    #[test]
    fn path_and_explicit_agree() {
        let phi = InvariantPolynomial::new(1);
        let opts = CsOptions::default();
        let a = constant_su2(&[[0.3, 0.1, 0.0], [0.0, 0.7, 0.2], [0.5, 0.0, 0.4]]);
        let (p, e) = (cs_path_integral(&a, &phi, 8).unwrap(), cs_explicit(&a, 1, &opts).unwrap());
        assert!(e.abs() > 1e-3);
        assert!((p - e).abs() < 1e-12);
        let a = random_su2(3, 2, 0.6);
        let (p, e) = (cs_path_integral(&a, &phi, 32).unwrap(), cs_explicit(&a, 1, &opts).unwrap());
        assert!((p - e).abs() < 1e-10);
        // the literal cubic coefficient differs on non-commuting data
        let lit = cs_explicit(&a, 1, &CsOptions { convention: CsConvention::Literal, grid: 32 }).unwrap();
        assert!((p + lit).abs() > 1e-4);
    }

    #[test]
    fn commuting_constants_have_zero_functional() {
        let a = constant_su2(&[[0.0, 0.0, 0.3], [0.0, 0.0, -1.2], [0.0, 0.0, 0.8]]);
        assert!(cs_explicit(&a, 1, &CsOptions::default()).unwrap().abs() < 1e-8);
    }

    #[test]
    fn level_is_additive_exactly() {
        let a = random_su2(3, 6, 0.5);
        let opts = CsOptions { grid: 16, ..Default::default() };
        let one = cs_explicit(&a, 1, &opts).unwrap();
        for k in [2, 3, -5] {
            assert_eq!(cs_explicit(&a, k, &opts).unwrap(), k as f64 * one);
        }
    }

    #[test]
    fn open_domains_are_rejected() {
        let a = monopole_pair(1, 1).restrict(3, 1.0).unwrap();
        assert!(matches!(cs_explicit(&a, 1, &CsOptions::default()), Err(Error::Precondition(_))));
        let a = random_su2(4, 1, 0.1);
        assert!(matches!(cs_explicit(&a, 1, &CsOptions::default()), Err(Error::Structure(_))));
    }

    #[test]
    fn constant_gauge_transformation_preserves_cs() {
        let a = random_su2(3, 12, 0.5);
        let g = GaugeTransformation::constant(GridDomain::torus(3), su2_exp([0.3, -0.8, 1.1]));
        let r = gauge_shift_check(&a, &g, &UNIT, &CsOptions { grid: 20, ..Default::default() }).unwrap();
        assert!(r.shift.abs() < 1e-8, "{r:?}");
    }

    #[test]
    fn abelian_winding_shift_is_integral() {
        let a = constant_su2(&[[0.0, 0.0, 0.4], [0.0, 0.0, 1.0], [0.0, 0.0, -0.3]]);
        for w in [1, 2] {
            let r = gauge_shift_check(&a, &abelian_winding(3, w, 1), &UNIT, &CsOptions { grid: 16, ..Default::default() }).unwrap();
            assert!(r.distance < 1e-6, "{r:?}");
        }
    }

    #[test]
    fn bump_shift_follows_the_law() {
        let a = random_su2(3, 4, 0.4);
        let g = bump_degree(1, 0.4);
        let r = gauge_shift_check(&a, &g, &UNIT, &CsOptions { grid: 40, ..Default::default() }).unwrap();
        assert!(r.distance < 1e-3, "{r:?}");
        assert!(r.exact_term.abs() < 1e-6 && r.law_residual < 1e-3, "{r:?}");
    }

    #[test]
    fn functoriality_under_a_covering() {
        // x ↦ 2x on T³ has degree 8
        let a = random_su2(3, 30, 0.5);
        let b = a.pullback_linear(&[vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 2]]).unwrap();
        let opts = CsOptions { grid: 48, ..Default::default() };
        let (u, v) = (cs_explicit(&a, 1, &opts).unwrap(), cs_explicit(&b, 1, &opts).unwrap());
        assert!((v - 8.0 * u).abs() < 1e-8, "{u} {v}");
    }

    #[test]
    fn pure_gauge_ratio_against_the_degree_oracle() {
        for w in [-1, 0, 1, 2] {
            let g = bump_degree(w, 0.4);
            let deg = g.jacobian_degree(32).unwrap();
            assert!((deg - w as f64).abs() < 1e-3);
            let a = gauge_transform(&LatticeConnection::zero(GridDomain::torus(3)), &g).unwrap();
            let cw = cs_explicit(&a, 1, &CsOptions::default()).unwrap();
            let lit = cs_explicit(&a, 1, &CsOptions { convention: CsConvention::Literal, grid: 32 }).unwrap();
            assert!((cw - PURE_GAUGE_RATIO as f64 * deg).abs() < 1e-3, "w = {w}: {cw}");
            assert!((lit - LITERAL_PURE_GAUGE_RATIO as f64 * deg).abs() < 1e-3, "w = {w}: {lit}");
        }
    }

    #[test]
    fn literal_coefficient_breaks_invariance_off_pure_gauge() {
        let a = random_su2(3, 4, 0.4);
        let g = bump_degree(1, 0.4);
        let lit = CsOptions { convention: CsConvention::Literal, grid: 32 };
        let r = gauge_shift_check(&a, &g, &UNIT, &lit).unwrap();
        assert!(r.distance > 1e-2, "{r:?}");
    }
}
