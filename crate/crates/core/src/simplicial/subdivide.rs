use std::collections::BTreeMap;

use super::complex::SimplicialComplex;
use super::cover::{ChartId, Cover, Domain, Subordination};
use super::geometry::{Factor, Geometry};
use super::{Chain, Simplex};
use crate::error::{Error, Result};

/// `sd(σ) = Σₖ (-1)ᵏ cone(b_σ, sd(∂ₖσ))`, as ordered lists of original faces
/// (largest first) with signs.
fn subdivide_simplex(s: &Simplex) -> Vec<(Vec<Simplex>, i64)> {
    if s.dim() == 0 {
        return vec![(vec![s.clone()], 1)];
    }
    let mut out = Vec::new();
    for (k, f) in s.faces() {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        for (flag, c) in subdivide_simplex(&f) {
            let mut v = Vec::with_capacity(flag.len() + 1);
            v.push(s.clone());
            v.extend(flag);
            out.push((v, sign * c));
        }
    }
    out
}

/// One barycentric subdivision of the complex and its chain.
///
/// Original vertices keep their ids; the barycenter of every higher face gets
/// a fresh id above the current maximum. A new face lies in the interior of
/// the largest original face among those whose barycenters span it, and it
/// inherits that face's chart.
pub fn barycentric_subdivide(k: &SimplicialComplex, s: &Subordination) -> Result<(SimplicialComplex, Subordination)> {
    let geometry = k.geometry().clone();
    if k.is_empty() {
        return Ok((SimplicialComplex::empty(geometry), Subordination::new()));
    }
    let mut next = k.max_vertex().map_or(0, |m| m + 1);
    let mut ids: BTreeMap<Simplex, usize> = BTreeMap::new();
    let mut coords = k.vertex_coords().clone();
    for face in k.all_simplices() {
        if face.dim() == 0 {
            ids.insert(face.clone(), face.vertices()[0]);
        } else {
            let p = geometry.normalize(&k.realize(face).barycenter());
            ids.insert(face.clone(), next);
            coords.insert(next, p);
            next += 1;
        }
    }

    let mut chain = Chain::new();
    let mut sub = Subordination::new();
    for (top, coeff) in k.chain().terms() {
        for (flag, sign) in subdivide_simplex(top) {
            let verts: Vec<usize> = flag.iter().map(|f| ids[f]).collect();
            chain.add_oriented(&verts, sign * coeff)?;
            let n = flag.len();
            for mask in 1u32..(1u32 << n) {
                let members: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
                let largest = &flag[members[0]];
                let face = Simplex::new(&members.iter().map(|&i| verts[i]).collect::<Vec<_>>())?;
                sub.assign(face, s.chart(largest)?);
            }
        }
    }
    Ok((SimplicialComplex::new(geometry, coords, chain)?, sub))
}

/// `S¹ × K` with its prism triangulation, plus the bookkeeping needed to lift
/// chains and subordinations from the base.
#[derive(Clone, Debug)]
pub struct ProductComplex {
    pub complex: SimplicialComplex,
    pub n_circle: usize,
    stride: usize,
}

impl ProductComplex {
    pub fn vertex(&self, circle: usize, base: usize) -> usize {
        (circle % self.n_circle) * self.stride + base
    }

    pub fn circle_index(&self, v: usize) -> usize {
        v / self.stride
    }

    pub fn base_vertex(&self, v: usize) -> usize {
        v % self.stride
    }

    /// `σ × S¹` for a base chain, oriented base first.
    pub fn lift_chain(&self, base: &Chain) -> Result<Chain> {
        let mut out = Chain::new();
        for (s, coeff) in base.terms() {
            let v = s.vertices();
            let p = s.dim();
            let orient = if p % 2 == 0 { 1 } else { -1 };
            for c in 0..self.n_circle {
                for i in 0..=p {
                    let mut verts: Vec<usize> = v[..=i].iter().map(|&b| self.vertex(c, b)).collect();
                    verts.extend(v[i..].iter().map(|&b| self.vertex(c + 1, b)));
                    let sign = if i % 2 == 0 { 1 } else { -1 };
                    out.add_oriented(&verts, orient * sign * coeff)?;
                }
            }
        }
        Ok(out)
    }
}

/// Prism triangulation of `S¹ × K`; the circle is the first coordinate, of
/// period 1, cut into `n_circle` segments.
pub fn product_with_circle(k: &SimplicialComplex, n_circle: usize) -> Result<ProductComplex> {
    if n_circle < 3 {
        return Err(Error::Parameter(format!("n_circle must be at least 3, got {n_circle}")));
    }
    let mut factors = vec![Factor::Circle { period: 1.0 }];
    factors.extend(k.geometry().factors.iter().cloned());
    let geometry = Geometry::new(factors);
    let stride = k.max_vertex().map_or(1, |m| m + 1);
    let mut coords = BTreeMap::new();
    for c in 0..n_circle {
        for (&v, x) in k.vertex_coords() {
            let mut p = vec![c as f64 / n_circle as f64];
            p.extend_from_slice(x);
            coords.insert(c * stride + v, p);
        }
    }
    let skeleton = ProductComplex { complex: SimplicialComplex::empty(geometry.clone()), n_circle, stride };
    let chain = skeleton.lift_chain(k.chain())?;
    Ok(ProductComplex { complex: SimplicialComplex::new(geometry, coords, chain)?, n_circle, stride })
}

/// Chart assignment on `S¹ × K` for a product cover: the first arc containing
/// the face's circle projection, times the base chart of its base projection.
pub fn product_subordination(prod: &ProductComplex, base: &Subordination, cover: &Cover) -> Result<Subordination> {
    let (n_arcs, n_base) = cover.product.ok_or_else(|| Error::Structure("product subordination needs a product cover".into()))?;
    let mut out = Subordination::new();
    for face in prod.complex.all_simplices() {
        let mut circle: Vec<usize> = face.vertices().iter().map(|&v| prod.circle_index(v)).collect();
        circle.sort_unstable();
        circle.dedup();
        let n = prod.n_circle as f64;
        // Circle projection: one point or one segment, unwrapped.
        let pts: Vec<f64> = match circle.as_slice() {
            [c] => vec![*c as f64 / n],
            [a, b] if b - a == 1 => vec![*a as f64 / n, (*a as f64 + 0.5) / n, *b as f64 / n],
            [a, b] if *a == 0 && *b == prod.n_circle - 1 => vec![*b as f64 / n, (*b as f64 + 0.5) / n, 1.0],
            _ => return Err(Error::Structure(format!("face {face} is not a prism face"))),
        };
        let mut arc = None;
        for a in 0..n_arcs {
            let dom = arc_domain(cover, a, n_base)?;
            if pts.iter().all(|&t| dom.contains(&[t])) {
                arc = Some(a);
                break;
            }
        }
        let arc = arc.ok_or_else(|| Error::Unassigned(face.vertices().to_vec()))?;
        let base_face = Simplex::new(&dedup_sorted(face.vertices().iter().map(|&v| prod.base_vertex(v)).collect()))?;
        let b: ChartId = base.chart(&base_face)?;
        out.assign(face.clone(), arc * n_base + b);
    }
    Ok(out)
}

/// The arc factor of chart `a · n_base` of a product cover.
fn arc_domain(cover: &Cover, a: usize, n_base: usize) -> Result<&Domain> {
    match &cover.charts[a * n_base].domain {
        Domain::Intersection(parts) if !parts.is_empty() => Ok(&parts[0]),
        _ => Err(Error::Structure("product cover chart is not an arc intersection".into())),
    }
}

fn dedup_sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v.dedup();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::cover::verify_subordination;
    use crate::simplicial::meshes::{
        circle, hemisphere_subordination, torus_cover, torus_subordination, two_chart_sphere_cover, TorusGrid, UvSphere,
    };

    fn single_triangle() -> SimplicialComplex {
        let coords = BTreeMap::from([(0, vec![0.0, 0.0]), (1, vec![2.0, 0.0]), (2, vec![0.3, 1.5])]);
        SimplicialComplex::from_top(Geometry::euclidean(2), coords, &[vec![0, 1, 2]]).unwrap()
    }

    fn one_chart(k: &SimplicialComplex) -> Subordination {
        k.all_simplices().map(|s| (s.clone(), 0)).collect()
    }

    #[test]
    fn triangle_subdivision_counts() {
        let k = single_triangle();
        let (sd, sub) = barycentric_subdivide(&k, &one_chart(&k)).unwrap();
        assert_eq!(sd.count(2), 6);
        assert_eq!(sd.count(1), 12);
        assert_eq!(sd.count(0), 7);
        assert_eq!(sub.len(), 25);
        assert_eq!(sd.chain().boundary().boundary(), Chain::new());
    }

    #[test]
    fn subdivision_preserves_signed_volume() {
        let k = single_triangle();
        let (sd, _) = barycentric_subdivide(&k, &one_chart(&k)).unwrap();
        let vol = |k: &SimplicialComplex| -> f64 { k.chain().terms().map(|(s, c)| c as f64 * k.realize(s).affine_volume()).sum() };
        assert!((vol(&k) - vol(&sd)).abs() < 1e-12);
    }

    #[test]
    fn empty_subdivision() {
        let k = SimplicialComplex::empty(Geometry::sphere());
        let (sd, sub) = barycentric_subdivide(&k, &Subordination::new()).unwrap();
        assert!(sd.is_empty() && sub.is_empty());
    }

    #[test]
    fn subdivided_cycles_stay_cycles_and_subordinate() {
        let s = UvSphere::new(8, 4).unwrap();
        let (sd, sub) = barycentric_subdivide(&s.complex, &hemisphere_subordination(&s.complex)).unwrap();
        assert!(sd.is_cycle());
        assert_eq!(sd.count(2), 6 * s.complex.count(2));
        assert!(verify_subordination(&sd, &two_chart_sphere_cover(), &sub, 6).passed());

        let t = TorusGrid::new(3, 3).unwrap();
        let (sd, sub) = barycentric_subdivide(&t.complex, &torus_subordination(&t.complex).unwrap()).unwrap();
        assert!(sd.is_cycle());
        assert!(verify_subordination(&sd, &torus_cover(3), &sub, 4).passed());
    }

    #[test]
    fn circle_times_circle_is_torus() {
        let p = product_with_circle(&circle(3).unwrap(), 3).unwrap();
        assert_eq!(p.complex.count(2), 18);
        assert_eq!(p.complex.euler_characteristic(), 0);
        assert!(p.complex.is_cycle());
    }

    #[test]
    fn point_times_circle() {
        let k = crate::simplicial::meshes::point(Geometry::euclidean(1), vec![0.0]).unwrap();
        let p = product_with_circle(&k, 5).unwrap();
        assert_eq!(p.complex.count(1), 5);
        assert!(p.complex.is_cycle());
        assert!(product_with_circle(&k, 2).is_err());
    }

    #[test]
    fn circle_times_sphere() {
        let s = UvSphere::new(6, 4).unwrap();
        let p = product_with_circle(&s.complex, 3).unwrap();
        assert!(p.complex.is_cycle());
        assert_eq!(p.complex.euler_characteristic(), 0);
    }

    #[test]
    fn product_boundary_commutes() {
        // ∂(W × S¹) = ∂W × S¹ with the base-first orientation.
        let s = UvSphere::new(6, 4).unwrap();
        let w = s.north_hemisphere().unwrap();
        let p = product_with_circle(&s.complex, 3).unwrap();
        let lifted = p.lift_chain(w.chain()).unwrap();
        let lifted_boundary = p.lift_chain(&w.chain().boundary()).unwrap();
        assert_eq!(lifted.boundary(), lifted_boundary);
    }

    #[test]
    fn product_orientation_is_base_first() {
        // On S¹ × S¹ (circle coordinate t first, base x second), base-first
        // orientation means dx∧dt > 0, i.e. negative affine volume in (t, x).
        let p = product_with_circle(&circle(3).unwrap(), 4).unwrap();
        let vol: f64 = p.complex.chain().terms().map(|(s, c)| c as f64 * p.complex.realize(s).affine_volume()).sum();
        assert!((vol + 1.0).abs() < 1e-12);
    }

    #[test]
    fn product_subordination_is_valid() {
        let base = TorusGrid::new(2, 3).unwrap();
        let base_sub = torus_subordination(&base.complex).unwrap();
        let cover = Cover::product(&Cover::new(Cover::arcs(0, 3, 1.0, 0.25)), &torus_cover(2));
        let p = product_with_circle(&base.complex, 6).unwrap();
        let sub = product_subordination(&p, &base_sub, &cover).unwrap();
        assert!(verify_subordination(&p.complex, &cover, &sub, 4).passed());
        assert!(product_subordination(&p, &base_sub, &torus_cover(3)).is_err());
    }
}
