//! Mesh exchange format.
//!
//! ```json
//! {
//!   "geometry": [{"type": "sphere"}],
//!   "vertices": {"0": [0, 0, 1], "1": [1, 0, 0]},
//!   "simplices": [{"vertices": [0, 1, 2], "orientation": 1}],
//!   "cover": {"charts": [{"name": "N", "domain": {"type": "whole"}}]},
//!   "subordination": {"0,1,2": 0}
//! }
//! ```
//!
//! Only top simplices are listed; faces are implied. A missing subordination
//! is filled greedily.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::complex::SimplicialComplex;
use super::cover::{greedy_subordination, Cover, Subordination};
use super::geometry::Geometry;
use super::{Chain, Simplex};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SimplexEntry {
    pub vertices: Vec<usize>,
    #[serde(default = "one")]
    pub orientation: i64,
}

fn one() -> i64 {
    1
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshDoc {
    pub geometry: Geometry,
    pub vertices: BTreeMap<String, Vec<f64>>,
    pub simplices: Vec<SimplexEntry>,
    pub cover: Cover,
    #[serde(default)]
    pub subordination: BTreeMap<String, usize>,
}

/// A triangulated cycle with its cover and chart assignment.
#[derive(Clone, Debug)]
pub struct Mesh {
    pub complex: SimplicialComplex,
    pub cover: Cover,
    pub subordination: Subordination,
}

impl MeshDoc {
    pub fn into_mesh(self) -> Result<Mesh> {
        let mut coords = BTreeMap::new();
        for (k, v) in self.vertices {
            let id: usize = k.trim().parse().map_err(|_| Error::Parse(format!("bad vertex id {k:?}")))?;
            coords.insert(id, v);
        }
        let mut chain = Chain::new();
        for s in &self.simplices {
            if s.orientation.abs() != 1 {
                return Err(Error::Parse(format!("orientation of {:?} must be +1 or -1", s.vertices)));
            }
            chain.add_oriented(&s.vertices, s.orientation)?;
        }
        let complex = SimplicialComplex::new(self.geometry, coords, chain)?;
        let subordination = if self.subordination.is_empty() {
            greedy_subordination(&complex, &self.cover, 4)?
        } else {
            let mut sub = Subordination::new();
            for (k, c) in &self.subordination {
                let face = Simplex::parse_key(k)?;
                if !complex.contains(&face) {
                    return Err(Error::UnknownSimplex(face.vertices().to_vec()));
                }
                if *c >= self.cover.len() {
                    return Err(Error::Parse(format!("face {k} assigned to unknown chart {c}")));
                }
                sub.assign(face, *c);
            }
            sub
        };
        Ok(Mesh { complex, cover: self.cover, subordination })
    }

    pub fn from_mesh(mesh: &Mesh) -> Self {
        MeshDoc {
            geometry: mesh.complex.geometry().clone(),
            vertices: mesh.complex.vertex_coords().iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
            simplices: mesh
                .complex
                .chain()
                .terms()
                .flat_map(|(s, c)| {
                    let sign = c.signum();
                    std::iter::repeat_n(SimplexEntry { vertices: s.vertices().to_vec(), orientation: sign }, c.unsigned_abs() as usize)
                })
                .collect(),
            cover: mesh.cover.clone(),
            subordination: mesh.subordination.iter().map(|(s, c)| (s.key(), c)).collect(),
        }
    }
}

pub fn parse_mesh(text: &str) -> Result<Mesh> {
    let doc: MeshDoc = serde_json::from_str(text)?;
    doc.into_mesh()
}
