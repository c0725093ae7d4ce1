//! Connections on trivialized bundles over coordinate domains.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::domain::GridDomain;
use super::matrix::{anti_hermitian_defect, max_abs, su2, wedge_coefficients, wedge_table, Mat, MatrixForm};
use crate::error::{Error, Result};
use crate::form::{binomial, subsets, FD_STEP};

pub type ComponentsFn<const N: usize> = Arc<dyn Fn(&[f64]) -> Vec<Mat<N>> + Send + Sync>;
/// `partials(x)[μ][ν] = ∂_μ A_ν(x)`.
pub type PartialsFn<const N: usize> = Arc<dyn Fn(&[f64]) -> Vec<Vec<Mat<N>>> + Send + Sync>;

pub const ANTI_HERMITIAN_TOL: f64 = 1e-12;
pub const SEAM_TOL: f64 = 1e-10;

/// Fourth-order central differences of a matrix-valued function.
pub(crate) fn matrix_partials<const N: usize>(f: &dyn Fn(&[f64]) -> Vec<Mat<N>>, x: &[f64]) -> Vec<Vec<Mat<N>>> {
    let h = FD_STEP;
    let mut p = x.to_vec();
    (0..x.len())
        .map(|axis| {
            let mut at = |s: f64| {
                p[axis] = x[axis] + s;
                let v = f(&p);
                p[axis] = x[axis];
                v
            };
            let (a, b, c, d) = (at(2.0 * h), at(h), at(-h), at(-2.0 * h));
            (0..a.len()).map(|i| (-a[i] + b[i] * Complex64::from(8.0) - c[i] * Complex64::from(8.0) + d[i]) / Complex64::from(12.0 * h)).collect()
        })
        .collect()
}

/// A `u(N)`-valued 1-form `A = Σ A_μ dx^μ` in a fixed trivialization.
#[derive(Clone)]
pub struct LatticeConnection<const N: usize> {
    domain: GridDomain,
    a: ComponentsFn<N>,
    da: Option<PartialsFn<N>>,
}

impl<const N: usize> fmt::Debug for LatticeConnection<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LatticeConnection").field("rank", &N).field("domain", &self.domain).field("analytic_derivative", &self.da.is_some()).finish()
    }
}

impl<const N: usize> LatticeConnection<N> {
    pub fn new(domain: GridDomain, a: impl Fn(&[f64]) -> Vec<Mat<N>> + Send + Sync + 'static) -> Self {
        LatticeConnection { domain, a: Arc::new(a), da: None }
    }

    pub fn with_derivative(mut self, da: impl Fn(&[f64]) -> Vec<Vec<Mat<N>>> + Send + Sync + 'static) -> Self {
        self.da = Some(Arc::new(da));
        self
    }

    pub fn zero(domain: GridDomain) -> Self {
        let d = domain.dim();
        LatticeConnection::new(domain, move |_| vec![Mat::<N>::zeros(); d]).with_derivative(move |_| vec![vec![Mat::<N>::zeros(); d]; d])
    }

    pub fn constant(domain: GridDomain, components: Vec<Mat<N>>) -> Self {
        let d = domain.dim();
        assert_eq!(components.len(), d, "one matrix per direction");
        LatticeConnection::new(domain, move |_| components.clone()).with_derivative(move |_| vec![vec![Mat::<N>::zeros(); d]; d])
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn domain(&self) -> &GridDomain {
        &self.domain
    }

    pub fn has_analytic_derivative(&self) -> bool {
        self.da.is_some()
    }

    pub fn components(&self, x: &[f64]) -> Vec<Mat<N>> {
        (self.a)(x)
    }

    pub fn partials(&self, x: &[f64]) -> Vec<Vec<Mat<N>>> {
        match &self.da {
            Some(d) => d(x),
            None => matrix_partials(&*self.a, x),
        }
    }

    /// `A` as a matrix-valued 1-form.
    pub fn as_form(&self) -> MatrixForm<N> {
        let a = self.a.clone();
        MatrixForm::new(self.dim(), 1, move |x| a(x))
    }

    /// Coefficients of `dA` and `A ∧ A` on `dx^μ ∧ dx^ν`, `μ < ν`.
    pub fn curvature_parts(&self, x: &[f64]) -> (Vec<Mat<N>>, Vec<Mat<N>>) {
        let a = self.components(x);
        let da = self.partials(x);
        let n = self.dim();
        let (mut d, mut sq) = (Vec::with_capacity(binomial(n, 2)), Vec::with_capacity(binomial(n, 2)));
        // `μ < ν` in lexicographic order, matching `subsets(n, 2)`
        for mu in 0..n {
            for nu in mu + 1..n {
                d.push(da[mu][nu] - da[nu][mu]);
                sq.push(a[mu] * a[nu] - a[nu] * a[mu]);
            }
        }
        (d, sq)
    }

    /// `F = dA + A ∧ A` at a point.
    pub fn curvature_at(&self, x: &[f64]) -> Vec<Mat<N>> {
        let (d, sq) = self.curvature_parts(x);
        d.iter().zip(&sq).map(|(p, q)| p + q).collect()
    }

    /// `F = dA + A ∧ A` as a matrix-valued 2-form.
    pub fn curvature(&self) -> MatrixForm<N> {
        let this = self.clone();
        MatrixForm::new(self.dim(), 2, move |x| this.curvature_at(x))
    }

    /// Largest entry of `dF + A ∧ F − F ∧ A` over the points. `dF` is taken by
    /// finite differences of `F`.
    pub fn bianchi_residual(&self, points: &[Vec<f64>]) -> f64 {
        let dim = self.dim();
        if dim < 3 {
            return 0.0;
        }
        let triples = subsets(dim, 3);
        let pairs = subsets(dim, 2);
        let af = wedge_table(dim, 1, 2);
        let fa = wedge_table(dim, 2, 1);
        let len = binomial(dim, 3);
        let this = self.clone();
        let f = move |x: &[f64]| this.curvature_at(x);
        points
            .iter()
            .map(|x| {
                let df = matrix_partials(&f, x);
                let a = self.components(x);
                let fx = f(x);
                let mut out = wedge_coefficients(&af, len, &a, &fx);
                for (k, m) in wedge_coefficients(&fa, len, &fx, &a).iter().enumerate() {
                    out[k] -= m;
                }
                for (k, t) in triples.iter().enumerate() {
                    for (pos, &axis) in t.iter().enumerate() {
                        let mut rest = t.clone();
                        rest.remove(pos);
                        let idx = pairs.iter().position(|p| *p == rest).expect("pair");
                        let sign = if pos % 2 == 0 { 1.0 } else { -1.0 };
                        out[k] += df[axis][idx] * Complex64::from(sign);
                    }
                }
                out.iter().map(max_abs).fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }

    /// Anti-Hermitian values and periodic seams, on sample points.
    pub fn check(&self, samples: usize, seed: u64) -> Result<()> {
        for x in self.domain.sample(samples, seed) {
            let a = self.components(&x);
            if a.len() != self.dim() {
                return Err(Error::Structure(format!("connection returned {} components on a {}-dimensional domain", a.len(), self.dim())));
            }
            let worst = a.iter().map(anti_hermitian_defect).fold(0.0, f64::max);
            if worst > ANTI_HERMITIAN_TOL {
                return Err(Error::Precondition(format!("connection is not anti-Hermitian at {x:?} (defect {worst:.3e})")));
            }
            for (axis, ax) in self.domain.axes().iter().enumerate() {
                if !ax.periodic {
                    continue;
                }
                let (mut lo, mut hi) = (x.clone(), x.clone());
                lo[axis] = ax.lo;
                hi[axis] = ax.hi;
                let (u, v) = (self.components(&lo), self.components(&hi));
                let jump = u.iter().zip(&v).map(|(p, q)| max_abs(&(p - q))).fold(0.0, f64::max);
                if jump > SEAM_TOL {
                    return Err(Error::Precondition(format!("connection jumps by {jump:.3e} across the seam of axis {axis}")));
                }
            }
        }
        Ok(())
    }

    /// `A + α`.
    pub fn add(&self, alpha: &LatticeConnection<N>) -> Result<LatticeConnection<N>> {
        if self.domain != alpha.domain {
            return Err(Error::Structure("connections live on different domains".into()));
        }
        let (a, b) = (self.a.clone(), alpha.a.clone());
        let sum = LatticeConnection::new(self.domain.clone(), move |x| a(x).iter().zip(b(x)).map(|(p, q)| p + q).collect());
        Ok(match (&self.da, &alpha.da) {
            (Some(da), Some(db)) => {
                let (da, db) = (da.clone(), db.clone());
                sum.with_derivative(move |x| da(x).iter().zip(db(x)).map(|(r, s)| r.iter().zip(s).map(|(p, q)| p + q).collect()).collect())
            }
            _ => sum,
        })
    }

    /// `t·A`.
    pub fn scale(&self, t: f64) -> LatticeConnection<N> {
        let s = Complex64::from(t);
        let a = self.a.clone();
        let out = LatticeConnection::new(self.domain.clone(), move |x| a(x).into_iter().map(|m| m * s).collect());
        match &self.da {
            Some(da) => {
                let da = da.clone();
                out.with_derivative(move |x| da(x).into_iter().map(|r| r.into_iter().map(|m| m * s).collect()).collect())
            }
            None => out,
        }
    }

    /// Restriction to the slice `x_axis = value`, with the remaining
    /// coordinates in their original order.
    pub fn restrict(&self, axis: usize, value: f64) -> Result<LatticeConnection<N>> {
        if axis >= self.dim() {
            return Err(Error::Parameter(format!("axis {axis} out of range for dimension {}", self.dim())));
        }
        let lift = move |y: &[f64]| {
            let mut x = y.to_vec();
            x.insert(axis, value);
            x
        };
        let a = self.a.clone();
        let out = LatticeConnection::new(self.domain.without(axis), move |y| {
            let mut v = a(&lift(y));
            v.remove(axis);
            v
        });
        Ok(match &self.da {
            Some(da) => {
                let da = da.clone();
                out.with_derivative(move |y| {
                    let mut rows = da(&lift(y));
                    rows.remove(axis);
                    for r in rows.iter_mut() {
                        r.remove(axis);
                    }
                    rows
                })
            }
            None => out,
        })
    }

    /// Pullback along the torus endomorphism `x ↦ Mx`, `M` an integer matrix.
    pub fn pullback_linear(&self, m: &[Vec<i64>]) -> Result<LatticeConnection<N>> {
        let d = self.dim();
        if !self.domain.is_torus() || m.len() != d || m.iter().any(|r| r.len() != d) {
            return Err(Error::Structure("pullback needs a square integer matrix on a torus".into()));
        }
        let m: Vec<Vec<f64>> = m.iter().map(|r| r.iter().map(|&v| v as f64).collect()).collect();
        let image = {
            let m = m.clone();
            move |x: &[f64]| -> Vec<f64> { (0..d).map(|i| (0..d).map(|j| m[i][j] * x[j]).sum()).collect() }
        };
        let a = self.a.clone();
        let (m1, im1) = (m.clone(), image.clone());
        let out = LatticeConnection::new(self.domain.clone(), move |x| {
            let v = a(&im1(x));
            (0..d).map(|mu| (0..d).fold(Mat::<N>::zeros(), |acc, nu| acc + v[nu] * Complex64::from(m1[nu][mu]))).collect()
        });
        Ok(match &self.da {
            Some(da) => {
                let da = da.clone();
                out.with_derivative(move |x| {
                    let p = da(&image(x));
                    (0..d)
                        .map(|lam| {
                            (0..d)
                                .map(|mu| {
                                    let mut acc = Mat::<N>::zeros();
                                    for nu in 0..d {
                                        for rho in 0..d {
                                            acc += p[rho][nu] * Complex64::from(m[nu][mu] * m[rho][lam]);
                                        }
                                    }
                                    acc
                                })
                                .collect()
                        })
                        .collect()
                })
            }
            None => out,
        })
    }
}

/// A Fourier mode `cos(2π k·x)·C_μ + sin(2π k·x)·S_μ`.
#[derive(Clone, Debug)]
pub struct FourierMode<const N: usize> {
    pub wave: Vec<i64>,
    pub cos: Vec<Mat<N>>,
    pub sin: Vec<Mat<N>>,
}

/// A smooth periodic connection on the unit torus given by finitely many modes.
pub fn fourier_connection<const N: usize>(dim: usize, modes: Vec<FourierMode<N>>) -> LatticeConnection<N> {
    use std::f64::consts::TAU;
    let modes = Arc::new(modes);
    let phase = |m: &FourierMode<N>, x: &[f64]| TAU * m.wave.iter().zip(x).map(|(&k, &v)| k as f64 * v).sum::<f64>();
    let m1 = modes.clone();
    LatticeConnection::new(GridDomain::torus(dim), move |x| {
        let mut out = vec![Mat::<N>::zeros(); dim];
        for m in m1.iter() {
            let (s, c) = phase(m, x).sin_cos();
            for (o, (cos, sin)) in out.iter_mut().zip(m.cos.iter().zip(&m.sin)) {
                *o += *cos * Complex64::from(c) + *sin * Complex64::from(s);
            }
        }
        out
    })
    .with_derivative(move |x| {
        let mut out = vec![vec![Mat::<N>::zeros(); dim]; dim];
        for m in modes.iter() {
            let (s, c) = phase(m, x).sin_cos();
            for (lam, row) in out.iter_mut().enumerate() {
                let k = TAU * m.wave[lam] as f64;
                for (o, (cos, sin)) in row.iter_mut().zip(m.cos.iter().zip(&m.sin)) {
                    *o += (*sin * Complex64::from(c) - *cos * Complex64::from(s)) * Complex64::from(k);
                }
            }
        }
        out
    })
}

fn random_modes<const N: usize>(
    dim: usize,
    seed: u64,
    count: usize,
    amplitude: f64,
    mut element: impl FnMut(&mut ChaCha8Rng) -> Mat<N>,
) -> Vec<FourierMode<N>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|j| {
            // the first mode is constant
            let wave = if j == 0 { vec![0; dim] } else { (0..dim).map(|_| rng.gen_range(-1..=1)).collect() };
            let cos = (0..dim).map(|_| element(&mut rng) * Complex64::from(amplitude)).collect();
            let sin = (0..dim).map(|_| element(&mut rng) * Complex64::from(amplitude)).collect();
            FourierMode { wave, cos, sin }
        })
        .collect()
}

/// A random smooth `su(2)` connection on the unit torus.
pub fn random_su2(dim: usize, seed: u64, amplitude: f64) -> LatticeConnection<2> {
    let modes = random_modes(dim, seed, 4, amplitude, |rng| su2([rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]));
    fourier_connection(dim, modes)
}

/// A random smooth `u(1)` connection on the unit torus.
pub fn random_abelian(dim: usize, seed: u64, amplitude: f64) -> LatticeConnection<1> {
    let modes = random_modes(dim, seed, 4, amplitude, |rng| Mat::<1>::new(Complex64::new(0.0, rng.gen_range(-1.0..1.0))));
    fourier_connection(dim, modes)
}

/// Constant `su(2)` connection `A_μ = i c_μ·σ` on the unit torus.
pub fn constant_su2(coeffs: &[[f64; 3]]) -> LatticeConnection<2> {
    LatticeConnection::constant(GridDomain::torus(coeffs.len()), coeffs.iter().map(|&c| su2(c)).collect())
}

/// Dirac monopole of charge `n` in the northern gauge, in `(θ, φ)`:
/// `A = −(i n / 2)(1 − cos θ) dφ`, so that `(i/2π)∫F = n`.
pub fn monopole(n: i64) -> LatticeConnection<1> {
    let h = n as f64 / 2.0;
    let im = |v: f64| Mat::<1>::new(Complex64::new(0.0, v));
    LatticeConnection::new(GridDomain::sphere(), move |x| vec![im(0.0), im(-h * (1.0 - x[0].cos()))])
        .with_derivative(move |x| vec![vec![im(0.0), im(-h * x[0].sin())], vec![im(0.0); 2]])
}

/// Exterior product of monopoles of charges `n` and `m` on `S² × S²`.
pub fn monopole_pair(n: i64, m: i64) -> LatticeConnection<1> {
    let (h, k) = (n as f64 / 2.0, m as f64 / 2.0);
    let im = |v: f64| Mat::<1>::new(Complex64::new(0.0, v));
    let z = im(0.0);
    LatticeConnection::new(GridDomain::sphere_pair(), move |x| vec![z, im(-h * (1.0 - x[0].cos())), z, im(-k * (1.0 - x[2].cos()))])
        .with_derivative(move |x| vec![vec![z, im(-h * x[0].sin()), z, z], vec![z; 4], vec![z, z, z, im(-k * x[2].sin())], vec![z; 4]])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_connection_is_flat() {
        let a = LatticeConnection::<2>::zero(GridDomain::torus(3));
        let f = a.curvature().coefficients(&[0.1, 0.2, 0.3]);
        assert!(f.iter().all(|m| max_abs(m) == 0.0));
    }

    #[test]
    fn constant_curvature_is_the_commutator() {
        let a = constant_su2(&[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 0.5]]);
        let f = a.curvature().coefficients(&[0.4, 0.1, 0.9]);
        let (ax, ay) = (su2([1.0, 0.0, 0.0]), su2([0.0, 1.0, 0.0]));
        assert_eq!(f[0], ax * ay - ay * ax);
        assert!(max_abs(&f[0]) > 1.0);
    }

    #[test]
    fn monopole_flux_is_the_charge() {
        for n in [-2, 0, 1, 3] {
            let a = monopole(n);
            let flux = a.domain().integrate(32, |x| -a.curvature_at(x)[0][(0, 0)].im / (2.0 * std::f64::consts::PI));
            // (i/2π)F with F = i·f gives −f/2π
            assert!((flux - n as f64).abs() < 1e-6, "n = {n}: {flux}");
        }
    }

    #[test]
    fn analytic_and_numerical_derivatives_agree() {
        let a = random_su2(3, 7, 0.5);
        let numeric = LatticeConnection::<2>::new(a.domain().clone(), {
            let a = a.clone();
            move |x| a.components(x)
        });
        for x in a.domain().sample(10, 1) {
            let (p, q) = (a.partials(&x), numeric.partials(&x));
            for (r, s) in p.iter().zip(&q) {
                for (u, v) in r.iter().zip(s) {
                    assert!(max_abs(&(u - v)) < 1e-8);
                }
            }
        }
    }

    #[test]
    fn bianchi_identity() {
        let a = random_su2(4, 3, 0.7);
        let pts = a.domain().sample(20, 2);
        assert!(a.bianchi_residual(&pts) < 1e-5);
        let numeric = LatticeConnection::<2>::new(a.domain().clone(), {
            let a = a.clone();
            move |x| a.components(x)
        });
        assert!(numeric.bianchi_residual(&pts) < 1e-3);
    }

    #[test]
    fn validity_checks() {
        assert!(random_su2(3, 1, 1.0).check(50, 0).is_ok());
        assert!(random_abelian(3, 1, 1.0).check(50, 0).is_ok());
        let hermitian = LatticeConnection::<1>::constant(GridDomain::torus(1), vec![Mat::<1>::new(Complex64::new(1.0, 0.0))]);
        assert!(matches!(hermitian.check(5, 0), Err(Error::Precondition(_))));
        let seam = LatticeConnection::<1>::new(GridDomain::torus(1), |x| vec![Mat::<1>::new(Complex64::new(0.0, x[0]))]);
        assert!(matches!(seam.check(5, 0), Err(Error::Precondition(_))));
    }

    #[test]
    fn restriction_and_pullback() {
        let a = random_su2(4, 9, 0.5);
        let r = a.restrict(1, 0.3).unwrap();
        let full = a.components(&[0.1, 0.3, 0.5, 0.7]);
        let part = r.components(&[0.1, 0.5, 0.7]);
        assert_eq!(part, vec![full[0], full[2], full[3]]);
        let b = random_su2(3, 2, 0.5);
        let double = b.pullback_linear(&[vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 2]]).unwrap();
        let x = [0.1, 0.2, 0.3];
        assert!(max_abs(&(double.components(&x)[1] - b.components(&[0.2, 0.4, 0.6])[1] * Complex64::from(2.0))) < 1e-14);
        assert!(double.check(20, 0).is_ok());
    }
}
