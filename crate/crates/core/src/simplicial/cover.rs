use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::complex::SimplicialComplex;
use super::geometry::Geometry;
use super::Simplex;
use crate::circle::wrap;
use crate::error::{Error, Result};
use crate::form::subsets;

pub type ChartId = usize;

/// An open chart domain in ambient coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Domain {
    Whole,
    /// `{ x : Σ normalᵢ x[start + i] > offset }`.
    HalfSpace {
        start: usize,
        normal: Vec<f64>,
        offset: f64,
    },
    /// Points whose periodic coordinate is within `half_width` of `center`.
    Arc {
        coord: usize,
        center: f64,
        half_width: f64,
        period: f64,
    },
    Intersection(Vec<Domain>),
}

impl Domain {
    pub fn contains(&self, x: &[f64]) -> bool {
        match self {
            Domain::Whole => true,
            Domain::HalfSpace { start, normal, offset } => normal.iter().enumerate().map(|(i, n)| n * x[start + i]).sum::<f64>() > *offset,
            Domain::Arc { coord, center, half_width, period } => (period * wrap((x[*coord] - center) / period)).abs() < *half_width,
            Domain::Intersection(parts) => parts.iter().all(|d| d.contains(x)),
        }
    }

    /// The same domain with every coordinate index shifted by `k`.
    pub fn shifted(&self, k: usize) -> Domain {
        match self {
            Domain::Whole => Domain::Whole,
            Domain::HalfSpace { start, normal, offset } => Domain::HalfSpace { start: start + k, normal: normal.clone(), offset: *offset },
            Domain::Arc { coord, center, half_width, period } => {
                Domain::Arc { coord: coord + k, center: *center, half_width: *half_width, period: *period }
            }
            Domain::Intersection(parts) => Domain::Intersection(parts.iter().map(|d| d.shifted(k)).collect()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Chart {
    pub name: String,
    pub domain: Domain,
}

/// A finite open cover. Product covers of `S¹ × N` remember their factor
/// shape: chart `a · n_base + b` is arc `a` times base chart `b`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cover {
    pub charts: Vec<Chart>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub product: Option<(usize, usize)>,
}

impl Cover {
    pub fn new(charts: Vec<Chart>) -> Self {
        Cover { charts, product: None }
    }

    pub fn whole() -> Self {
        Cover::new(vec![Chart { name: "M".into(), domain: Domain::Whole }])
    }

    pub fn len(&self) -> usize {
        self.charts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.charts.is_empty()
    }

    pub fn contains(&self, chart: ChartId, x: &[f64]) -> bool {
        self.charts.get(chart).is_some_and(|c| c.domain.contains(x))
    }

    pub fn charts_at(&self, x: &[f64]) -> Vec<ChartId> {
        (0..self.charts.len()).filter(|&i| self.charts[i].domain.contains(x)).collect()
    }

    /// Arcs on coordinate 0 times a base cover on the remaining coordinates.
    pub fn product(circle: &Cover, base: &Cover) -> Cover {
        let mut charts = Vec::with_capacity(circle.len() * base.len());
        for a in &circle.charts {
            for b in &base.charts {
                charts.push(Chart {
                    name: format!("{}x{}", a.name, b.name),
                    domain: Domain::Intersection(vec![a.domain.clone(), b.domain.shifted(1)]),
                });
            }
        }
        Cover { charts, product: Some((circle.len(), base.len())) }
    }

    /// `n` equal arcs of a circle coordinate, each of half-width `overlap`
    /// times the arc spacing.
    pub fn arcs(coord: usize, n: usize, period: f64, half_width: f64) -> Vec<Chart> {
        (0..n)
            .map(|a| Chart {
                name: format!("arc{a}"),
                domain: Domain::Arc { coord, center: period * (a as f64 + 0.5) / n as f64, half_width, period },
            })
            .collect()
    }

    /// Points sampled in every overlap of at most `max_len` charts.
    pub fn overlap_samples(&self, geometry: &Geometry, pool: usize, per_overlap: usize, max_len: usize, seed: u64) -> OverlapSamples {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut points: BTreeMap<Vec<ChartId>, Vec<Vec<f64>>> = BTreeMap::new();
        for _ in 0..pool {
            let x = geometry.sample(&mut rng);
            let here = self.charts_at(&x);
            for len in 1..=max_len.min(here.len()) {
                for pick in subsets(here.len(), len) {
                    let tuple: Vec<ChartId> = pick.iter().map(|&i| here[i]).collect();
                    let bucket = points.entry(tuple).or_default();
                    if bucket.len() < per_overlap {
                        bucket.push(x.clone());
                    }
                }
            }
        }
        OverlapSamples { points }
    }
}

/// Sample points per non-empty overlap; the keys are the nerve.
#[derive(Clone, Debug, Default)]
pub struct OverlapSamples {
    pub points: BTreeMap<Vec<ChartId>, Vec<Vec<f64>>>,
}

impl OverlapSamples {
    pub fn nerve(&self, len: usize) -> impl Iterator<Item = &Vec<ChartId>> {
        self.points.keys().filter(move |k| k.len() == len)
    }

    pub fn get(&self, tuple: &[ChartId]) -> &[Vec<f64>] {
        self.points.get(tuple).map_or(&[], Vec::as_slice)
    }
}

/// Chart assignment for faces of a triangulated cycle.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Subordination {
    map: BTreeMap<Simplex, ChartId>,
}

impl Subordination {
    pub fn new() -> Self {
        Subordination::default()
    }

    pub fn assign(&mut self, face: Simplex, chart: ChartId) {
        self.map.insert(face, chart);
    }

    pub fn get(&self, face: &Simplex) -> Option<ChartId> {
        self.map.get(face).copied()
    }

    pub fn chart(&self, face: &Simplex) -> Result<ChartId> {
        self.get(face).ok_or_else(|| Error::Unassigned(face.vertices().to_vec()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Simplex, ChartId)> {
        self.map.iter().map(|(s, c)| (s, *c))
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

impl FromIterator<(Simplex, ChartId)> for Subordination {
    fn from_iter<I: IntoIterator<Item = (Simplex, ChartId)>>(iter: I) -> Self {
        Subordination { map: iter.into_iter().collect() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FaceCheck {
    pub face: Simplex,
    pub chart: Option<ChartId>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SubordinationReport {
    pub faces: Vec<FaceCheck>,
}

impl SubordinationReport {
    pub fn passed(&self) -> bool {
        self.faces.iter().all(|f| f.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &FaceCheck> {
        self.faces.iter().filter(|f| !f.passed)
    }
}

fn face_seed(face: &Simplex) -> u64 {
    face.vertices().iter().fold(0xcbf2_9ce4_8422_2325u64, |h, &v| (h ^ v as u64).wrapping_mul(0x100_0000_01b3))
}

/// Vertices, barycenter and `samples` seeded interior points of a face.
fn probe_points(k: &SimplicialComplex, face: &Simplex, samples: usize) -> Vec<Vec<f64>> {
    let r = k.realize(face);
    let d = face.dim();
    let mut pts: Vec<Vec<f64>> = (0..=d).map(|i| r.vertex(i)).collect();
    if d == 0 {
        return pts;
    }
    pts.push(r.barycenter());
    let mut rng = ChaCha8Rng::seed_from_u64(face_seed(face));
    for _ in 0..samples {
        let mut w: Vec<f64> = (0..=d).map(|_| -rng.gen_range(f64::EPSILON..1.0f64).ln()).collect();
        let s: f64 = w.iter().sum();
        w.iter_mut().for_each(|v| *v /= s);
        pts.push(r.point(&w[1..]));
    }
    pts
}

/// Check every face of the complex against its assigned chart.
pub fn verify_subordination(k: &SimplicialComplex, cover: &Cover, s: &Subordination, samples: usize) -> SubordinationReport {
    let faces = k
        .all_simplices()
        .map(|face| {
            let chart = s.get(face);
            let passed = chart.is_some_and(|c| c < cover.len() && probe_points(k, face, samples).iter().all(|x| cover.contains(c, x)));
            FaceCheck { face: face.clone(), chart, passed }
        })
        .collect();
    SubordinationReport { faces }
}

/// Assign to each face the first chart containing all of its probe points.
pub fn greedy_subordination(k: &SimplicialComplex, cover: &Cover, samples: usize) -> Result<Subordination> {
    let mut out = Subordination::new();
    for face in k.all_simplices() {
        let pts = probe_points(k, face, samples);
        let chart =
            (0..cover.len()).find(|&c| pts.iter().all(|x| cover.contains(c, x))).ok_or_else(|| Error::Unassigned(face.vertices().to_vec()))?;
        out.assign(face.clone(), chart);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arc_membership_wraps() {
        let d = Domain::Arc { coord: 0, center: 1.0 / 6.0, half_width: 0.25, period: 1.0 };
        assert!(d.contains(&[0.95]));
        assert!(!d.contains(&[0.5]));
    }

    #[test]
    fn shifted_intersection() {
        let d = Domain::Intersection(vec![Domain::HalfSpace { start: 0, normal: vec![1.0], offset: 0.0 }]).shifted(1);
        assert!(d.contains(&[-5.0, 1.0]));
        assert!(!d.contains(&[5.0, -1.0]));
    }

    #[test]
    fn product_cover_indexing() {
        let circle = Cover::new(Cover::arcs(0, 3, 1.0, 0.25));
        let base = Cover::new(Cover::arcs(0, 3, 1.0, 0.25));
        let p = Cover::product(&circle, &base);
        assert_eq!(p.len(), 9);
        assert!(p.contains(2 * 3 + 1, &[5.0 / 6.0, 0.5]));
    }
}
