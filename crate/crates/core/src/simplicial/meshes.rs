//! Built-in triangulations, covers and subordinations.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use super::complex::SimplicialComplex;
use super::cover::{greedy_subordination, Chart, Cover, Domain, Subordination};
use super::geometry::Geometry;
use super::{Chain, Simplex};
use crate::error::{Error, Result};

/// Latitude/longitude triangulation of the unit sphere with outward
/// orientation. Vertex 0 is the north pole, 1 the south pole, then rings
/// `r = 1..n_theta` of `n_phi` vertices each.
#[derive(Clone, Debug)]
pub struct UvSphere {
    pub n_phi: usize,
    pub n_theta: usize,
    pub complex: SimplicialComplex,
}

impl UvSphere {
    pub fn new(n_phi: usize, n_theta: usize) -> Result<Self> {
        if n_phi < 3 || n_theta < 2 {
            return Err(Error::Parameter(format!("sphere mesh {n_phi}x{n_theta} too coarse")));
        }
        let mut coords = BTreeMap::from([(0, vec![0.0, 0.0, 1.0]), (1, vec![0.0, 0.0, -1.0])]);
        for r in 1..n_theta {
            let theta = PI * r as f64 / n_theta as f64;
            for j in 0..n_phi {
                let phi = 2.0 * PI * j as f64 / n_phi as f64;
                let z = if 2 * r == n_theta { 0.0 } else { theta.cos() };
                coords.insert(ring_id(n_phi, r, j), vec![theta.sin() * phi.cos(), theta.sin() * phi.sin(), z]);
            }
        }
        let sphere = UvSphere { n_phi, n_theta, complex: SimplicialComplex::empty(Geometry::sphere()) };
        let tops = sphere.triangles(0, n_theta);
        let complex = SimplicialComplex::from_top(Geometry::sphere(), coords, &tops)?;
        Ok(UvSphere { complex, ..sphere })
    }

    pub fn vertex(&self, ring: usize, j: usize) -> usize {
        if ring == 0 {
            0
        } else if ring == self.n_theta {
            1
        } else {
            ring_id(self.n_phi, ring, j % self.n_phi)
        }
    }

    /// Outward-oriented triangles between rings `from` and `to`.
    fn triangles(&self, from: usize, to: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for r in from..to {
            for j in 0..self.n_phi {
                let (u0, u1) = (self.vertex(r, j), self.vertex(r, j + 1));
                let (l0, l1) = (self.vertex(r + 1, j), self.vertex(r + 1, j + 1));
                if r == 0 {
                    out.push(vec![u0, l0, l1]);
                } else if r + 1 == self.n_theta {
                    out.push(vec![u0, l0, u1]);
                } else {
                    out.push(vec![u0, l0, l1]);
                    out.push(vec![u0, l1, u1]);
                }
            }
        }
        out
    }

    /// Chain of the triangles between two rings (ring 0 is the north pole).
    pub fn band(&self, from: usize, to: usize) -> Result<SimplicialComplex> {
        let tops = self.triangles(from, to);
        self.complex.with_chain(Chain::from_oriented(tops.iter().map(|v| v.as_slice()))?)
    }

    /// Ring `r` as an eastward loop.
    pub fn ring(&self, r: usize) -> Result<SimplicialComplex> {
        let mut c = Chain::new();
        for j in 0..self.n_phi {
            c.add_oriented(&[self.vertex(r, j), self.vertex(r, j + 1)], 1)?;
        }
        self.complex.with_chain(c)
    }

    pub fn equator(&self) -> Result<SimplicialComplex> {
        self.ring(self.n_theta / 2)
    }

    pub fn north_hemisphere(&self) -> Result<SimplicialComplex> {
        self.band(0, self.n_theta / 2)
    }
}

fn ring_id(n_phi: usize, r: usize, j: usize) -> usize {
    2 + (r - 1) * n_phi + j
}

/// Charts `N = {z > -1/2}` and `S = {z < 1/2}`.
pub fn two_chart_sphere_cover() -> Cover {
    Cover::new(vec![
        Chart { name: "N".into(), domain: Domain::HalfSpace { start: 0, normal: vec![0.0, 0.0, 1.0], offset: -0.5 } },
        Chart { name: "S".into(), domain: Domain::HalfSpace { start: 0, normal: vec![0.0, 0.0, -1.0], offset: -0.5 } },
    ])
}

/// Faces in the closed northern hemisphere go to `N`, the rest to `S`.
pub fn hemisphere_subordination(k: &SimplicialComplex) -> Subordination {
    k.all_simplices()
        .map(|f| {
            let north = f.vertices().iter().all(|&v| k.coords(v)[2] >= -1e-12);
            (f.clone(), if north { 0 } else { 1 })
        })
        .collect()
}

/// Unit vectors to the vertices of a regular tetrahedron, the first at the
/// north pole.
pub fn tetrahedron_directions() -> [[f64; 3]; 4] {
    let s = (8.0f64 / 9.0).sqrt();
    let t = (2.0f64 / 9.0).sqrt();
    let u = (2.0f64 / 3.0).sqrt();
    [[0.0, 0.0, 1.0], [s, 0.0, -1.0 / 3.0], [-t, u, -1.0 / 3.0], [-t, -u, -1.0 / 3.0]]
}

/// Four spherical caps of angular radius 100° around the tetrahedral
/// directions. Every pair and triple meets, no quadruple does, so the nerve is
/// the boundary of a tetrahedron.
pub fn tetrahedral_cover() -> Cover {
    let offset = -(80.0f64.to_radians().cos());
    Cover::new(
        tetrahedron_directions()
            .iter()
            .enumerate()
            .map(|(i, t)| Chart { name: format!("cap{i}"), domain: Domain::HalfSpace { start: 0, normal: t.to_vec(), offset } })
            .collect(),
    )
}

fn permutations(n: usize) -> Vec<(Vec<usize>, i64)> {
    if n == 0 {
        return vec![(Vec::new(), 1)];
    }
    let mut out = Vec::new();
    for (p, s) in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            let moved = p.len() - pos;
            out.push((q, if moved % 2 == 0 { s } else { -s }));
        }
    }
    out
}

/// Cubical grid on the unit torus `Tᵈ`, each cell cut into `d!` simplices
/// along monotone lattice paths.
#[derive(Clone, Debug)]
pub struct TorusGrid {
    pub d: usize,
    pub n: usize,
    pub complex: SimplicialComplex,
}

impl TorusGrid {
    pub fn new(d: usize, n: usize) -> Result<Self> {
        if n < 3 || d == 0 {
            return Err(Error::Parameter(format!("torus grid needs n >= 3 and d >= 1, got d={d}, n={n}")));
        }
        let mut coords = BTreeMap::new();
        for id in 0..n.pow(d as u32) {
            coords.insert(id, Self::index(id, d, n).iter().map(|&i| i as f64 / n as f64).collect());
        }
        let chain = Self::cells_chain(d, n, |_| true)?;
        Ok(TorusGrid { d, n, complex: SimplicialComplex::new(Geometry::torus(d), coords, chain)? })
    }

    fn index(id: usize, d: usize, n: usize) -> Vec<usize> {
        (0..d).map(|k| (id / n.pow(k as u32)) % n).collect()
    }

    pub fn vertex(&self, idx: &[usize]) -> usize {
        idx.iter().enumerate().map(|(k, &i)| (i % self.n) * self.n.pow(k as u32)).sum()
    }

    fn cells_chain(d: usize, n: usize, keep: impl Fn(&[usize]) -> bool) -> Result<Chain> {
        let mut chain = Chain::new();
        let id = |idx: &[usize]| -> usize { idx.iter().enumerate().map(|(k, &i)| (i % n) * n.pow(k as u32)).sum() };
        let perms = permutations(d);
        for cell in 0..n.pow(d as u32) {
            let base = Self::index(cell, d, n);
            if !keep(&base) {
                continue;
            }
            for (p, sign) in &perms {
                let mut cur = base.clone();
                let mut verts = vec![id(&cur)];
                for &axis in p {
                    cur[axis] += 1;
                    verts.push(id(&cur));
                }
                chain.add_oriented(&verts, *sign)?;
            }
        }
        Ok(chain)
    }

    /// The cells whose lower corner satisfies `keep`, as a chain of this grid.
    pub fn region(&self, keep: impl Fn(&[usize]) -> bool) -> Result<SimplicialComplex> {
        self.complex.with_chain(Self::cells_chain(self.d, self.n, keep)?)
    }

    /// The coordinate sub-torus `{x_axis = level/n}`, oriented so that it is
    /// the boundary of the slab of cells just below it.
    pub fn slice(&self, axis: usize, level: usize) -> Result<SimplicialComplex> {
        let slab = Self::cells_chain(self.d, self.n, |idx| idx[axis] == (level + self.n - 1) % self.n)?;
        let top: Chain = slab
            .boundary()
            .terms()
            .filter(|(s, _)| s.vertices().iter().all(|&v| Self::index(v, self.d, self.n)[axis] == level % self.n))
            .map(|(s, c)| (s.clone(), c))
            .collect();
        self.complex.with_chain(top)
    }
}

/// Three arcs of half-width 1/4 per coordinate of the unit torus; chart
/// `Σ aₖ 3ᵏ` is the product of arcs `aₖ`.
pub fn torus_cover(d: usize) -> Cover {
    let arcs: Vec<Vec<Chart>> = (0..d).map(|k| Cover::arcs(k, 3, 1.0, 0.25)).collect();
    let charts = (0..3usize.pow(d as u32))
        .map(|id| {
            let pick: Vec<usize> = (0..d).map(|k| (id / 3usize.pow(k as u32)) % 3).collect();
            Chart {
                name: pick.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(""),
                domain: Domain::Intersection(pick.iter().enumerate().map(|(k, &a)| arcs[k][a].domain.clone()).collect()),
            }
        })
        .collect();
    Cover::new(charts)
}

/// The cover of `S¹ × Tᵈ` by products of three circle arcs with
/// [`torus_cover`] charts. As a point set it is `T^{d+1}`.
pub fn product_torus_cover(base_dim: usize) -> Cover {
    Cover::product(&Cover::new(Cover::arcs(0, 3, 1.0, 0.25)), &torus_cover(base_dim))
}

/// `n` segments of the unit circle.
pub fn circle(n: usize) -> Result<SimplicialComplex> {
    Ok(TorusGrid::new(1, n)?.complex)
}

/// A single positively oriented vertex.
pub fn point(geometry: Geometry, coords: Vec<f64>) -> Result<SimplicialComplex> {
    SimplicialComplex::new(geometry, BTreeMap::from([(0, coords)]), Chain::from_simplex(Simplex::new(&[0])?))
}

/// Greedy subordination for a torus grid chain with the product-of-arcs cover.
pub fn torus_subordination(k: &SimplicialComplex) -> Result<Subordination> {
    let d = k.geometry().ambient_dim();
    greedy_subordination(k, &torus_cover(d), 4)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uv_sphere_counts_and_orientation() {
        let s = UvSphere::new(16, 8).unwrap();
        assert_eq!(s.complex.count(2), 224);
        assert_eq!(s.complex.euler_characteristic(), 2);
        assert!(s.complex.is_cycle());
        for (t, c) in s.complex.chain().terms() {
            let r = s.complex.realize(t);
            let (p, tg) = r.point_and_tangents(&[1.0 / 3.0, 1.0 / 3.0]);
            let n = [tg[0][1] * tg[1][2] - tg[0][2] * tg[1][1], tg[0][2] * tg[1][0] - tg[0][0] * tg[1][2], tg[0][0] * tg[1][1] - tg[0][1] * tg[1][0]];
            let out: f64 = n.iter().zip(&p).map(|(a, b)| a * b).sum();
            assert!(out * c as f64 > 0.0, "triangle {t} points inward");
        }
    }

    #[test]
    fn equator_bounds_north_hemisphere() {
        let s = UvSphere::new(16, 8).unwrap();
        let h = s.north_hemisphere().unwrap();
        assert_eq!(&h.chain().boundary(), s.equator().unwrap().chain());
    }

    #[test]
    fn torus_fundamental_cycle() {
        let t = TorusGrid::new(2, 3).unwrap();
        assert_eq!(t.complex.count(2), 18);
        assert!(t.complex.is_cycle());
        assert_eq!(t.complex.euler_characteristic(), 0);
        let t3 = TorusGrid::new(3, 3).unwrap();
        assert_eq!(t3.complex.count(3), 162);
        assert!(t3.complex.is_cycle());
        assert_eq!(t3.complex.euler_characteristic(), 0);
        let total: f64 = t3.complex.chain().terms().map(|(s, c)| c as f64 * t3.complex.realize(s).affine_volume()).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn torus_slices_are_cycles() {
        let t = TorusGrid::new(3, 3).unwrap();
        let s = t.slice(2, 1).unwrap();
        assert!(s.is_cycle());
        assert_eq!(s.chain().len(), 18);
    }

    #[test]
    fn tetrahedral_nerve_is_a_sphere() {
        let cover = tetrahedral_cover();
        let samples = cover.overlap_samples(&Geometry::sphere(), 20000, 1, 4, 7);
        assert_eq!(samples.nerve(2).count(), 6);
        assert_eq!(samples.nerve(3).count(), 4);
        assert_eq!(samples.nerve(4).count(), 0);
    }

    #[test]
    fn hemisphere_subordination_is_valid() {
        let s = UvSphere::new(16, 8).unwrap();
        let sub = hemisphere_subordination(&s.complex);
        let cover = two_chart_sphere_cover();
        assert!(super::super::verify_subordination(&s.complex, &cover, &sub, 8).passed());
    }
}
