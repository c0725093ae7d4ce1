use rand::Rng;
use serde::{Deserialize, Serialize};

/// One factor of a product manifold, with its ambient coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Factor {
    /// A closed interval, one coordinate.
    Interval { lo: f64, hi: f64 },
    /// `ℝ / period·ℤ`, one coordinate.
    Circle { period: f64 },
    /// The unit sphere in `ℝ³`, three ambient coordinates.
    Sphere,
}

impl Factor {
    pub fn ambient_dim(&self) -> usize {
        match self {
            Factor::Sphere => 3,
            _ => 1,
        }
    }

    pub fn manifold_dim(&self) -> usize {
        match self {
            Factor::Sphere => 2,
            _ => 1,
        }
    }
}

/// A product of intervals, circles and 2-spheres in ambient coordinates.
///
/// Simplices are realized by unwrapping circle coordinates next to the first
/// vertex, interpolating affinely and projecting sphere blocks radially.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Geometry {
    pub factors: Vec<Factor>,
}

fn wrap_period(x: f64, p: f64) -> f64 {
    let r = x - p * (x / p).round();
    if r <= -p / 2.0 {
        r + p
    } else {
        r
    }
}

impl Geometry {
    pub fn new(factors: Vec<Factor>) -> Self {
        Geometry { factors }
    }

    pub fn sphere() -> Self {
        Geometry::new(vec![Factor::Sphere])
    }

    pub fn torus(d: usize) -> Self {
        Geometry::new(vec![Factor::Circle { period: 1.0 }; d])
    }

    pub fn euclidean(d: usize) -> Self {
        Geometry::new(vec![Factor::Interval { lo: -1e9, hi: 1e9 }; d])
    }

    pub fn ambient_dim(&self) -> usize {
        self.factors.iter().map(Factor::ambient_dim).sum()
    }

    pub fn manifold_dim(&self) -> usize {
        self.factors.iter().map(Factor::manifold_dim).sum()
    }

    fn blocks(&self) -> impl Iterator<Item = (usize, &Factor)> {
        self.factors.iter().scan(0usize, |off, f| {
            let start = *off;
            *off += f.ambient_dim();
            Some((start, f))
        })
    }

    /// Put a point in canonical form: circles in `[0, period)`, sphere blocks unit.
    pub fn normalize(&self, x: &[f64]) -> Vec<f64> {
        let mut y = x.to_vec();
        for (s, f) in self.blocks() {
            match f {
                Factor::Circle { period } => y[s] = y[s].rem_euclid(*period),
                Factor::Sphere => {
                    let n = (y[s] * y[s] + y[s + 1] * y[s + 1] + y[s + 2] * y[s + 2]).sqrt();
                    for v in &mut y[s..s + 3] {
                        *v /= n;
                    }
                }
                Factor::Interval { .. } => {}
            }
        }
        y
    }

    /// Realize the simplex spanned by `vertices` (ambient coordinates).
    pub fn realize(&self, vertices: &[&[f64]]) -> RealizedSimplex {
        let base = vertices[0].to_vec();
        let edges = vertices[1..]
            .iter()
            .map(|v| {
                let mut e: Vec<f64> = v.iter().zip(&base).map(|(a, b)| a - b).collect();
                for (s, f) in self.blocks() {
                    if let Factor::Circle { period } = f {
                        e[s] = wrap_period(e[s], *period);
                    }
                }
                e
            })
            .collect();
        RealizedSimplex { geometry: self.clone(), base, edges }
    }

    /// Differential of the sphere projection applied to an ambient vector at
    /// the unprojected point `x`.
    fn project_tangent(&self, x: &[f64], e: &[f64]) -> Vec<f64> {
        let mut out = e.to_vec();
        for (s, f) in self.blocks() {
            if let Factor::Sphere = f {
                let n = (x[s] * x[s] + x[s + 1] * x[s + 1] + x[s + 2] * x[s + 2]).sqrt();
                let u = [x[s] / n, x[s + 1] / n, x[s + 2] / n];
                let dot = u[0] * e[s] + u[1] * e[s + 1] + u[2] * e[s + 2];
                for i in 0..3 {
                    out[s + i] = (e[s + i] - dot * u[i]) / n;
                }
            }
        }
        out
    }

    /// A uniformly distributed point.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        let mut x = Vec::with_capacity(self.ambient_dim());
        for f in &self.factors {
            match f {
                Factor::Interval { lo, hi } => x.push(rng.gen_range(*lo..*hi)),
                Factor::Circle { period } => x.push(rng.gen_range(0.0..*period)),
                Factor::Sphere => {
                    let z: f64 = rng.gen_range(-1.0..1.0);
                    let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                    let r = (1.0 - z * z).sqrt();
                    x.extend_from_slice(&[r * phi.cos(), r * phi.sin(), z]);
                }
            }
        }
        x
    }

    /// An orthonormal basis of the tangent space at `x`, in ambient coordinates.
    pub fn tangent_basis(&self, x: &[f64]) -> Vec<Vec<f64>> {
        let n = self.ambient_dim();
        let mut out = Vec::new();
        for (s, f) in self.blocks() {
            match f {
                Factor::Sphere => {
                    let u = [x[s], x[s + 1], x[s + 2]];
                    let helper = if u[2].abs() < 0.9 { [0.0, 0.0, 1.0] } else { [1.0, 0.0, 0.0] };
                    let mut a = cross(helper, u);
                    normalize3(&mut a);
                    let b = cross(u, a);
                    for t in [a, b] {
                        let mut v = vec![0.0; n];
                        v[s..s + 3].copy_from_slice(&t);
                        out.push(v);
                    }
                }
                _ => {
                    let mut v = vec![0.0; n];
                    v[s] = 1.0;
                    out.push(v);
                }
            }
        }
        out
    }
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn normalize3(a: &mut [f64; 3]) {
    let n = (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt();
    for v in a.iter_mut() {
        *v /= n;
    }
}

/// A simplex realized in a geometry: `x ↦ P(base + Σ xₐ edgeₐ)` on the
/// standard simplex `{xₐ ≥ 0, Σ xₐ ≤ 1}`.
#[derive(Clone, Debug)]
pub struct RealizedSimplex {
    geometry: Geometry,
    base: Vec<f64>,
    edges: Vec<Vec<f64>>,
}

impl RealizedSimplex {
    pub fn dim(&self) -> usize {
        self.edges.len()
    }

    fn affine(&self, x: &[f64]) -> Vec<f64> {
        let mut p = self.base.clone();
        for (e, &t) in self.edges.iter().zip(x) {
            for (pi, ei) in p.iter_mut().zip(e) {
                *pi += t * ei;
            }
        }
        p
    }

    /// Image point, without reducing circle coordinates.
    pub fn point(&self, x: &[f64]) -> Vec<f64> {
        self.project(self.affine(x))
    }

    fn project(&self, mut p: Vec<f64>) -> Vec<f64> {
        for (s, f) in self.geometry.blocks() {
            if let Factor::Sphere = f {
                let n = (p[s] * p[s] + p[s + 1] * p[s + 1] + p[s + 2] * p[s + 2]).sqrt();
                for v in &mut p[s..s + 3] {
                    *v /= n;
                }
            }
        }
        p
    }

    /// Image point and the partial derivatives `∂/∂xₐ`.
    pub fn point_and_tangents(&self, x: &[f64]) -> (Vec<f64>, Vec<Vec<f64>>) {
        let a = self.affine(x);
        let tangents = self.edges.iter().map(|e| self.geometry.project_tangent(&a, e)).collect();
        (self.project(a), tangents)
    }

    /// The tangents when they do not depend on the point: no sphere factors.
    pub fn constant_tangents(&self) -> Option<&[Vec<f64>]> {
        let curved = self.geometry.blocks().any(|(_, f)| matches!(f, Factor::Sphere));
        (!curved).then_some(&self.edges[..])
    }

    pub fn vertex(&self, k: usize) -> Vec<f64> {
        let mut x = vec![0.0; self.dim()];
        if k > 0 {
            x[k - 1] = 1.0;
        }
        self.point(&x)
    }

    pub fn barycenter(&self) -> Vec<f64> {
        let n = self.dim() + 1;
        self.point(&vec![1.0 / n as f64; self.dim()])
    }

    /// Signed volume of the affine (unprojected) realization, for full-dimensional
    /// flat simplices.
    pub fn affine_volume(&self) -> f64 {
        let d = self.dim();
        let mut m: Vec<Vec<f64>> = self.edges.iter().map(|e| e[..d].to_vec()).collect();
        let fact: f64 = (1..=d).map(|k| k as f64).product();
        crate::form::determinant(&mut m) / fact
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn circle_edges_unwrap() {
        let g = Geometry::torus(1);
        let r = g.realize(&[&[0.95], &[0.05]]);
        assert!((r.point(&[1.0])[0] - 1.05).abs() < 1e-12);
    }

    #[test]
    fn sphere_points_are_unit_and_tangent() {
        let g = Geometry::sphere();
        let r = g.realize(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]);
        let (p, t) = r.point_and_tangents(&[0.3, 0.3]);
        let n: f64 = p.iter().map(|v| v * v).sum();
        assert!((n - 1.0).abs() < 1e-12);
        for v in &t {
            let dot: f64 = v.iter().zip(&p).map(|(a, b)| a * b).sum();
            assert!(dot.abs() < 1e-12);
        }
        // Compare with a finite difference.
        let h = 1e-6;
        let q = r.point(&[0.3 + h, 0.3]);
        for i in 0..3 {
            assert!(((q[i] - p[i]) / h - t[0][i]).abs() < 1e-5);
        }
    }

    #[test]
    fn tangent_basis_orthonormal() {
        let g = Geometry::new(vec![Factor::Circle { period: 1.0 }, Factor::Sphere]);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let x = g.sample(&mut rng);
            let b = g.tangent_basis(&x);
            assert_eq!(b.len(), 3);
            for i in 0..3 {
                for j in 0..3 {
                    let d: f64 = b[i].iter().zip(&b[j]).map(|(p, q)| p * q).sum();
                    assert!((d - if i == j { 1.0 } else { 0.0 }).abs() < 1e-12);
                }
                let radial: f64 = (0..3).map(|k| b[i][k + 1] * x[k + 1]).sum();
                assert!(radial.abs() < 1e-12);
            }
        }
    }
}
