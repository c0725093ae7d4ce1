//! Gauge transformations and the degree of maps into `SU(2)`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::connection::{matrix_partials, LatticeConnection};
use super::domain::GridDomain;
use super::matrix::{max_abs, su2, su2_coordinates, unitary_defect, Mat};
use crate::error::{Error, Result};
use crate::form::{central_difference, determinant};

pub const UNITARY_TOL: f64 = 1e-12;

type ValueFn<const N: usize> = Arc<dyn Fn(&[f64]) -> Mat<N> + Send + Sync>;
type GradientFn<const N: usize> = Arc<dyn Fn(&[f64]) -> Vec<Mat<N>> + Send + Sync>;

/// A map `g: M → U(N)` in the same trivialization as the connections it acts on.
#[derive(Clone)]
pub struct GaugeTransformation<const N: usize> {
    domain: GridDomain,
    g: ValueFn<N>,
    dg: Option<GradientFn<N>>,
    degree_hint: Option<i64>,
}

impl<const N: usize> fmt::Debug for GaugeTransformation<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GaugeTransformation").field("rank", &N).field("domain", &self.domain).field("degree_hint", &self.degree_hint).finish()
    }
}

impl<const N: usize> GaugeTransformation<N> {
    pub fn new(domain: GridDomain, g: impl Fn(&[f64]) -> Mat<N> + Send + Sync + 'static) -> Self {
        GaugeTransformation { domain, g: Arc::new(g), dg: None, degree_hint: None }
    }

    /// Attach analytic partial derivatives `∂_μ g`.
    pub fn with_derivative(mut self, dg: impl Fn(&[f64]) -> Vec<Mat<N>> + Send + Sync + 'static) -> Self {
        self.dg = Some(Arc::new(dg));
        self
    }

    pub fn with_degree_hint(mut self, w: i64) -> Self {
        self.degree_hint = Some(w);
        self
    }

    pub fn constant(domain: GridDomain, u: Mat<N>) -> Self {
        let d = domain.dim();
        GaugeTransformation::new(domain, move |_| u).with_derivative(move |_| vec![Mat::<N>::zeros(); d]).with_degree_hint(0)
    }

    pub fn identity(domain: GridDomain) -> Self {
        GaugeTransformation::constant(domain, Mat::<N>::identity())
    }

    pub fn domain(&self) -> &GridDomain {
        &self.domain
    }

    pub fn degree_hint(&self) -> Option<i64> {
        self.degree_hint
    }

    pub fn value(&self, x: &[f64]) -> Mat<N> {
        (self.g)(x)
    }

    pub fn partials(&self, x: &[f64]) -> Vec<Mat<N>> {
        match &self.dg {
            Some(d) => d(x),
            None => {
                let g = self.g.clone();
                matrix_partials(&move |y: &[f64]| vec![g(y)], x).into_iter().map(|v| v[0]).collect()
            }
        }
    }

    /// Unitarity and periodic seams on sample points.
    pub fn check(&self, samples: usize, seed: u64) -> Result<()> {
        for x in self.domain.sample(samples, seed) {
            let u = self.value(&x);
            let defect = unitary_defect(&u);
            if defect > UNITARY_TOL {
                return Err(Error::Precondition(format!("gauge transformation is not unitary at {x:?} (defect {defect:.3e})")));
            }
            for (axis, ax) in self.domain.axes().iter().enumerate().filter(|(_, a)| a.periodic) {
                let (mut lo, mut hi) = (x.clone(), x.clone());
                lo[axis] = ax.lo;
                hi[axis] = ax.hi;
                let jump = max_abs(&(self.value(&lo) - self.value(&hi)));
                if jump > 1e-10 {
                    return Err(Error::Precondition(format!("gauge transformation jumps by {jump:.3e} across the seam of axis {axis}")));
                }
            }
        }
        Ok(())
    }
}

/// `A^g = g⁻¹Ag + g⁻¹dg`.
pub fn gauge_transform<const N: usize>(a: &LatticeConnection<N>, g: &GaugeTransformation<N>) -> Result<LatticeConnection<N>> {
    if a.domain() != g.domain() {
        return Err(Error::Structure("connection and gauge transformation live on different domains".into()));
    }
    g.check(16, 0x9a)?;
    let (a, g) = (a.clone(), g.clone());
    Ok(LatticeConnection::new(a.domain().clone(), move |x| {
        let u = g.value(x);
        let inv = u.adjoint();
        let du = g.partials(x);
        a.components(x).iter().zip(&du).map(|(am, dm)| inv * am * u + inv * dm).collect()
    }))
}

fn flat_exp(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        (-1.0 / t).exp()
    }
}

/// Smooth step: `0` up to `0`, `1` from `1` on, flat at both ends.
fn smooth_step(s: f64) -> f64 {
    let (a, b) = (flat_exp(s), flat_exp(1.0 - s));
    a / (a + b)
}

fn smooth_step_derivative(s: f64) -> f64 {
    if s <= 0.0 || s >= 1.0 {
        return 0.0;
    }
    let (a, b) = (flat_exp(s), flat_exp(1.0 - s));
    a * b * (1.0 / (s * s) + 1.0 / ((1.0 - s) * (1.0 - s))) / ((a + b) * (a + b))
}

/// A degree-`w` map `T³ → SU(2)`, the identity outside a ball of the given
/// radius about the centre of the unit cube:
/// `g = cos f(r) + sin f(r)·i(n·σ)` with `f` rising smoothly from `−wπ` to `0`.
/// `f` is constant near the centre, so `g = ±1` there and the map is smooth.
pub fn bump_degree(w: i64, radius: f64) -> GaugeTransformation<2> {
    assert!(radius > 0.0 && radius < 0.5, "bump must fit in the unit cube");
    // the sign makes the oriented degree equal to `w`
    let wpi = -(w as f64) * PI;
    let profile = move |r: f64| wpi * (1.0 - smooth_step(r / radius));
    let slope = move |r: f64| -wpi * smooth_step_derivative(r / radius) / radius;
    let offset = |x: &[f64]| -> [f64; 3] {
        let mut d = [0.0; 3];
        for i in 0..3 {
            let v = x[i] - 0.5;
            d[i] = v - v.round();
        }
        d
    };
    let norm = |d: &[f64; 3]| (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
    let value = move |x: &[f64]| {
        let d = offset(x);
        let r = norm(&d);
        if r >= radius {
            return Mat::<2>::identity();
        }
        let f = profile(r);
        let n = if r > 0.0 { [d[0] / r, d[1] / r, d[2] / r] } else { [0.0; 3] };
        Mat::<2>::identity() * Complex64::from(f.cos()) + su2(n) * Complex64::from(f.sin())
    };
    let gradient = move |x: &[f64]| {
        let d = offset(x);
        let r = norm(&d);
        if r >= radius {
            return vec![Mat::<2>::zeros(); 3];
        }
        let f = profile(r);
        let fp = slope(r);
        let n = if r > 0.0 { [d[0] / r, d[1] / r, d[2] / r] } else { [0.0; 3] };
        // sin f vanishes to all orders at the centre
        let sin_over_r = if r > 0.0 { f.sin() / r } else { 0.0 };
        let radial = Mat::<2>::identity() * Complex64::from(-f.sin()) + su2(n) * Complex64::from(f.cos());
        (0..3)
            .map(|mu| {
                let mut e = [0.0; 3];
                for nu in 0..3 {
                    e[nu] = if mu == nu { 1.0 } else { 0.0 } - n[mu] * n[nu];
                }
                radial * Complex64::from(fp * n[mu]) + su2(e) * Complex64::from(sin_over_r)
            })
            .collect()
    };
    GaugeTransformation::new(GridDomain::torus(3), value).with_derivative(gradient).with_degree_hint(w)
}

/// `g = exp(2πi·w·x_axis·H)` with `H = diag(1, −1)`, on the unit torus.
pub fn abelian_winding(dim: usize, w: i64, axis: usize) -> GaugeTransformation<2> {
    assert!(axis < dim);
    let k = 2.0 * PI * w as f64;
    let diag = move |t: f64| {
        let e = Complex64::from_polar(1.0, t);
        Mat::<2>::new(e, Complex64::from(0.0), Complex64::from(0.0), e.conj())
    };
    GaugeTransformation::new(GridDomain::torus(dim), move |x| diag(k * x[axis]))
        .with_derivative(move |x| {
            let g = diag(k * x[axis]);
            let h = Mat::<2>::new(Complex64::new(0.0, k), Complex64::from(0.0), Complex64::from(0.0), Complex64::new(0.0, -k));
            (0..dim).map(|mu| if mu == axis { h * g } else { Mat::<2>::zeros() }).collect()
        })
        .with_degree_hint(0)
}

impl GaugeTransformation<2> {
    /// Degree of `g: T³ → SU(2) ≅ S³` as the normalized integral of the signed
    /// Jacobian `det[a, ∂₁a, ∂₂a, ∂₃a] / vol(S³)`, with `∂a` taken by finite
    /// differences of `g` itself.
    pub fn jacobian_degree(&self, grid: usize) -> Result<f64> {
        if !self.domain.is_torus() || self.domain.dim() != 3 {
            return Err(Error::Structure("the degree oracle needs a map on the 3-torus".into()));
        }
        let g = self.g.clone();
        let coords = move |x: &[f64]| su2_coordinates(&g(x)).to_vec();
        let total = self.domain.integrate(grid, |x| {
            let mut rows = vec![coords(x)];
            for axis in 0..3 {
                rows.push(central_difference(&coords, x, axis, false));
            }
            determinant(&mut rows)
        });
        Ok(total / (2.0 * PI * PI))
    }
}
