use std::collections::{BTreeMap, BTreeSet};

use super::geometry::{Geometry, RealizedSimplex};
use super::{Chain, Simplex};
use crate::error::{Error, Result};

/// A finite simplicial complex carrying a distinguished chain (its cycle or
/// fundamental chain) and ambient vertex coordinates.
///
/// The complex is the closure of the chain's simplices, so every face of every
/// listed simplex is listed.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplicialComplex {
    geometry: Geometry,
    coords: BTreeMap<usize, Vec<f64>>,
    simplices: Vec<BTreeSet<Simplex>>,
    chain: Chain,
}

impl SimplicialComplex {
    pub fn new(geometry: Geometry, coords: BTreeMap<usize, Vec<f64>>, chain: Chain) -> Result<Self> {
        let dim = match chain.dim() {
            Some(d) => d,
            None if chain.is_empty() => 0,
            None => return Err(Error::Structure("chain mixes dimensions".into())),
        };
        let mut simplices = vec![BTreeSet::new(); if chain.is_empty() { 0 } else { dim + 1 }];
        for (s, _) in chain.terms() {
            for f in s.closure() {
                simplices[f.dim()].insert(f);
            }
        }
        let n = geometry.ambient_dim();
        for v in simplices.first().into_iter().flatten() {
            let c = coords.get(&v.vertices()[0]).ok_or_else(|| Error::Structure(format!("vertex {} has no coordinates", v.vertices()[0])))?;
            if c.len() != n {
                return Err(Error::Structure(format!("vertex {} has {} coordinates, geometry needs {n}", v.vertices()[0], c.len())));
            }
        }
        let used: BTreeSet<usize> = simplices.first().into_iter().flatten().map(|s| s.vertices()[0]).collect();
        let coords = coords.into_iter().filter(|(v, _)| used.contains(v)).collect();
        Ok(SimplicialComplex { geometry, coords, simplices, chain })
    }

    /// Complex of the given oriented top simplices, each with coefficient 1.
    pub fn from_top(geometry: Geometry, coords: BTreeMap<usize, Vec<f64>>, tops: &[Vec<usize>]) -> Result<Self> {
        let chain = Chain::from_oriented(tops.iter().map(|v| v.as_slice()))?;
        SimplicialComplex::new(geometry, coords, chain)
    }

    pub fn empty(geometry: Geometry) -> Self {
        SimplicialComplex { geometry, coords: BTreeMap::new(), simplices: Vec::new(), chain: Chain::new() }
    }

    /// A complex with the same geometry and coordinates and a different chain.
    pub fn with_chain(&self, chain: Chain) -> Result<Self> {
        for (s, _) in chain.terms() {
            if !self.contains(s) {
                return Err(Error::UnknownSimplex(s.vertices().to_vec()));
            }
        }
        SimplicialComplex::new(self.geometry.clone(), self.coords.clone(), chain)
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    pub fn chain(&self) -> &Chain {
        &self.chain
    }

    pub fn dim(&self) -> Option<usize> {
        self.simplices.len().checked_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn coords(&self, v: usize) -> &[f64] {
        &self.coords[&v]
    }

    pub fn vertex_coords(&self) -> &BTreeMap<usize, Vec<f64>> {
        &self.coords
    }

    pub fn simplices(&self, d: usize) -> impl Iterator<Item = &Simplex> {
        self.simplices.get(d).into_iter().flatten()
    }

    pub fn count(&self, d: usize) -> usize {
        self.simplices.get(d).map_or(0, BTreeSet::len)
    }

    /// Every simplex, lowest dimension first, lexicographic within a dimension.
    pub fn all_simplices(&self) -> impl Iterator<Item = &Simplex> {
        self.simplices.iter().flatten()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.simplices.get(s.dim()).is_some_and(|set| set.contains(s))
    }

    /// The face of `s` opposite its `k`-th vertex.
    pub fn face(&self, s: &Simplex, k: usize) -> Result<Simplex> {
        if !self.contains(s) {
            return Err(Error::UnknownSimplex(s.vertices().to_vec()));
        }
        if k > s.dim() || s.dim() == 0 {
            return Err(Error::Parameter(format!("face index {k} out of range for {s}")));
        }
        Ok(s.face(k))
    }

    /// Boundary of a chain of this complex.
    pub fn boundary(&self, c: &Chain) -> Result<Chain> {
        for (s, _) in c.terms() {
            if !self.contains(s) {
                return Err(Error::UnknownSimplex(s.vertices().to_vec()));
            }
        }
        Ok(c.boundary())
    }

    pub fn is_cycle(&self) -> bool {
        self.chain.boundary().is_empty()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.simplices.iter().enumerate().map(|(d, s)| if d % 2 == 0 { s.len() as i64 } else { -(s.len() as i64) }).sum()
    }

    pub fn realize(&self, s: &Simplex) -> RealizedSimplex {
        let verts: Vec<&[f64]> = s.vertices().iter().map(|v| self.coords[v].as_slice()).collect();
        self.geometry.realize(&verts)
    }

    /// Realize the vertices in the given (not necessarily sorted) order.
    pub fn realize_ordered(&self, vertices: &[usize]) -> RealizedSimplex {
        let verts: Vec<&[f64]> = vertices.iter().map(|v| self.coords[v].as_slice()).collect();
        self.geometry.realize(&verts)
    }

    pub fn max_vertex(&self) -> Option<usize> {
        self.coords.keys().next_back().copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::geometry::Factor;

    fn triangle() -> SimplicialComplex {
        let coords = BTreeMap::from([(0, vec![0.0, 0.0]), (1, vec![1.0, 0.0]), (2, vec![0.0, 1.0])]);
        SimplicialComplex::from_top(Geometry::euclidean(2), coords, &[vec![0, 1, 2]]).unwrap()
    }

    #[test]
    fn closure_and_euler() {
        let k = triangle();
        assert_eq!((k.count(0), k.count(1), k.count(2)), (3, 3, 1));
        assert_eq!(k.euler_characteristic(), 1);
        assert!(!k.is_cycle());
    }

    #[test]
    fn unknown_simplex_is_structural_error() {
        let k = triangle();
        let c = Chain::from_oriented([&[0usize, 5][..]]).unwrap();
        assert!(matches!(k.boundary(&c), Err(Error::UnknownSimplex(_))));
    }

    #[test]
    fn missing_coordinates_rejected() {
        let coords = BTreeMap::from([(0, vec![0.0])]);
        let r = SimplicialComplex::from_top(Geometry::new(vec![Factor::Circle { period: 1.0 }]), coords, &[vec![0, 1]]);
        assert!(r.is_err());
    }

    #[test]
    fn face_incidence_matches_deletion() {
        let k = triangle();
        let s = Simplex::new(&[0, 1, 2]).unwrap();
        assert_eq!(k.face(&s, 1).unwrap(), Simplex::new(&[0, 2]).unwrap());
        assert!(k.face(&s, 3).is_err());
    }
}
