//! Simplices, chains, triangulated cycles, covers and chart subordination.
//!
//! A simplex is stored by its sorted vertex list; orientation lives in chain
//! coefficients, so `[v1, v0]` enters a chain as `-[v0, v1]`. The `k`-th face
//! of a simplex deletes its `k`-th vertex and carries the sign `(-1)^k`.

mod complex;
mod cover;
mod geometry;
pub mod json;
pub mod meshes;
mod subdivide;

pub use complex::SimplicialComplex;
pub use cover::{
    greedy_subordination, verify_subordination, Chart, ChartId, Cover, Domain, FaceCheck, OverlapSamples, Subordination, SubordinationReport,
};
pub use geometry::{Factor, Geometry, RealizedSimplex};
pub use subdivide::{barycentric_subdivide, product_subordination, product_with_circle, ProductComplex};

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};
use crate::form::sort_with_sign;

/// An unoriented simplex: strictly increasing vertex ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex(Vec<usize>);

impl Simplex {
    /// Sort `vertices`, returning the simplex and the parity of the sort.
    pub fn oriented(vertices: &[usize]) -> Result<(Simplex, i64)> {
        if vertices.is_empty() {
            return Err(Error::Structure("empty simplex".into()));
        }
        let (sorted, sign) = sort_with_sign(vertices).ok_or_else(|| Error::Structure(format!("repeated vertex in {vertices:?}")))?;
        Ok((Simplex(sorted), sign))
    }

    pub fn new(vertices: &[usize]) -> Result<Simplex> {
        Ok(Simplex::oriented(vertices)?.0)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// Delete the `k`-th vertex.
    pub fn face(&self, k: usize) -> Simplex {
        let mut v = self.0.clone();
        v.remove(k);
        Simplex(v)
    }

    /// Codimension-one faces with their index; empty for a vertex.
    pub fn faces(&self) -> impl Iterator<Item = (usize, Simplex)> + '_ {
        let n = if self.0.len() > 1 { self.0.len() } else { 0 };
        (0..n).map(move |k| (k, self.face(k)))
    }

    /// All faces of every dimension, the simplex itself included.
    pub fn closure(&self) -> Vec<Simplex> {
        let n = self.0.len();
        (1u32..(1u32 << n)).map(|mask| Simplex((0..n).filter(|i| mask & (1 << i) != 0).map(|i| self.0[i]).collect())).collect()
    }

    pub fn contains_face(&self, other: &Simplex) -> bool {
        other.0.iter().all(|v| self.0.binary_search(v).is_ok())
    }

    /// Face key used in exchange formats, e.g. `"0,1,2"`.
    pub fn key(&self) -> String {
        self.0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
    }

    pub fn parse_key(key: &str) -> Result<Simplex> {
        let v: std::result::Result<Vec<usize>, _> = key.split(',').map(|s| s.trim().parse::<usize>()).collect();
        let v = v.map_err(|_| Error::Parse(format!("bad face key {key:?}")))?;
        let (s, sign) = Simplex::oriented(&v)?;
        if sign != 1 {
            return Err(Error::Parse(format!("face key {key:?} is not sorted")));
        }
        Ok(s)
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.key())
    }
}

/// A finite integer combination of simplices; zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Chain {
    terms: BTreeMap<Simplex, i64>,
}

impl Chain {
    pub fn new() -> Self {
        Chain::default()
    }

    pub fn from_simplex(s: Simplex) -> Self {
        let mut c = Chain::new();
        c.add_term(s, 1);
        c
    }

    /// Chain from ordered vertex lists, each with coefficient 1.
    pub fn from_oriented<'a>(simplices: impl IntoIterator<Item = &'a [usize]>) -> Result<Self> {
        let mut c = Chain::new();
        for s in simplices {
            c.add_oriented(s, 1)?;
        }
        Ok(c)
    }

    pub fn add_term(&mut self, s: Simplex, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let entry = self.terms.entry(s.clone()).or_insert(0);
        *entry += coeff;
        if *entry == 0 {
            self.terms.remove(&s);
        }
    }

    pub fn add_oriented(&mut self, vertices: &[usize], coeff: i64) -> Result<()> {
        let (s, sign) = Simplex::oriented(vertices)?;
        self.add_term(s, sign * coeff);
        Ok(())
    }

    pub fn coefficient(&self, s: &Simplex) -> i64 {
        self.terms.get(s).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Simplex, i64)> {
        self.terms.iter().map(|(s, c)| (s, *c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Dimension of the chain, if it is non-empty and homogeneous.
    pub fn dim(&self) -> Option<usize> {
        let mut dims = self.terms.keys().map(Simplex::dim);
        let d = dims.next()?;
        dims.all(|e| e == d).then_some(d)
    }

    pub fn scale(&self, k: i64) -> Chain {
        let mut c = Chain::new();
        for (s, v) in self.terms() {
            c.add_term(s.clone(), k * v);
        }
        c
    }

    /// Alternating sum of codimension-one faces.
    pub fn boundary(&self) -> Chain {
        let mut out = Chain::new();
        for (s, c) in self.terms() {
            for (k, f) in s.faces() {
                out.add_term(f, if k % 2 == 0 { c } else { -c });
            }
        }
        out
    }
}

impl Add for &Chain {
    type Output = Chain;
    fn add(self, rhs: &Chain) -> Chain {
        let mut c = self.clone();
        for (s, v) in rhs.terms() {
            c.add_term(s.clone(), v);
        }
        c
    }
}

impl Sub for &Chain {
    type Output = Chain;
    fn sub(self, rhs: &Chain) -> Chain {
        self + &rhs.scale(-1)
    }
}

impl Neg for &Chain {
    type Output = Chain;
    fn neg(self) -> Chain {
        self.scale(-1)
    }
}

impl FromIterator<(Simplex, i64)> for Chain {
    fn from_iter<I: IntoIterator<Item = (Simplex, i64)>>(iter: I) -> Self {
        let mut c = Chain::new();
        for (s, v) in iter {
            c.add_term(s, v);
        }
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_boundary() {
        let c = Chain::from_oriented([&[0usize, 1][..]]).unwrap();
        let b = c.boundary();
        assert_eq!(b.coefficient(&Simplex::new(&[1]).unwrap()), 1);
        assert_eq!(b.coefficient(&Simplex::new(&[0]).unwrap()), -1);
    }

    #[test]
    fn reversed_simplex_is_negative() {
        let mut c = Chain::new();
        c.add_oriented(&[0, 1, 2], 1).unwrap();
        c.add_oriented(&[1, 0, 2], 1).unwrap();
        assert!(c.is_empty());
    }

    #[test]
    fn boundary_of_boundary_of_tetrahedron() {
        let c = Chain::from_oriented([&[3usize, 1, 0, 2][..]]).unwrap();
        assert_eq!(c.boundary().len(), 4);
        assert!(c.boundary().boundary().is_empty());
    }

    #[test]
    fn repeated_vertex_rejected() {
        assert!(Simplex::new(&[1, 1]).is_err());
    }

    #[test]
    fn key_roundtrip() {
        let s = Simplex::new(&[4, 2, 9]).unwrap();
        assert_eq!(s.key(), "2,4,9");
        assert_eq!(Simplex::parse_key("2,4,9").unwrap(), s);
        assert!(Simplex::parse_key("4,2").is_err());
    }

    #[test]
    fn closure_counts() {
        let s = Simplex::new(&[0, 1, 2, 3]).unwrap();
        assert_eq!(s.closure().len(), 15);
    }
}
