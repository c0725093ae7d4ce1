//! Branched Δ-complexes: closed oriented pseudo-manifolds whose simplices carry
//! a vertex order compatible with faces.
//!
//! Cells are identified through a canonical key computed from an ordered
//! vertex tuple, so quotients (one-vertex tori, lens spaces, prisms over a
//! surface with the ends glued) are built the same way as ordinary simplicial
//! complexes.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::form::determinant;
use crate::simplicial::{Chain, Simplex};

/// A top-dimensional cell: orientation sign and the ids of all its faces,
/// indexed by the bitmask of local vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopCell {
    pub sign: i64,
    cells: Vec<usize>,
}

impl TopCell {
    pub fn cell(&self, mask: usize) -> usize {
        self.cells[mask]
    }

    /// Edge from local vertex `i` to local vertex `j > i`.
    pub fn edge(&self, i: usize, j: usize) -> usize {
        self.cells[(1 << i) | (1 << j)]
    }

    pub fn vertex(&self, i: usize) -> usize {
        self.cells[1 << i]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchedTriangulation {
    dim: usize,
    counts: Vec<usize>,
    tops: Vec<TopCell>,
    edge_ends: Vec<(usize, usize)>,
    edge_keys: Vec<Vec<i64>>,
    /// Edges `(01, 02, 12)` of every 2-cell.
    triangles: Vec<[usize; 3]>,
}

fn mask_bits(mask: usize) -> Vec<usize> {
    (0..usize::BITS as usize).filter(|b| mask & (1 << b) != 0).collect()
}

impl BranchedTriangulation {
    /// Build from ordered top simplices with orientation signs. `canon` maps an
    /// ordered vertex tuple to the key of the cell it spans.
    pub fn build<P: Clone>(dim: usize, tops: &[(Vec<P>, i64)], canon: impl Fn(&[P]) -> Vec<i64>) -> Result<Self> {
        if dim == 0 || dim > 6 {
            return Err(Error::Structure(format!("unsupported dimension {dim}")));
        }
        if tops.is_empty() {
            return Err(Error::Structure("no top cells".into()));
        }
        let full = (1usize << (dim + 1)) - 1;
        let mut ids: Vec<BTreeMap<Vec<i64>, usize>> = vec![BTreeMap::new(); dim + 1];
        let mut edge_ends = Vec::new();
        let mut edge_keys = Vec::new();
        let mut triangles = Vec::new();
        let mut cells_out = Vec::with_capacity(tops.len());
        for (points, sign) in tops {
            if points.len() != dim + 1 {
                return Err(Error::Structure(format!("top cell with {} vertices in dimension {dim}", points.len())));
            }
            if sign.abs() != 1 {
                return Err(Error::Structure(format!("orientation sign {sign}")));
            }
            let mut cells = vec![usize::MAX; full + 1];
            // Increasing masks visit every face before the cells containing it.
            let mut order: Vec<usize> = (1..=full).collect();
            order.sort_by_key(|m| m.count_ones());
            for mask in order {
                let bits = mask_bits(mask);
                let sub: Vec<P> = bits.iter().map(|&b| points[b].clone()).collect();
                let key = canon(&sub);
                let k = bits.len() - 1;
                let next = ids[k].len();
                let id = *ids[k].entry(key.clone()).or_insert(next);
                if id == next {
                    match k {
                        1 => {
                            edge_ends.push((cells[1 << bits[0]], cells[1 << bits[1]]));
                            edge_keys.push(key);
                        }
                        2 => triangles.push([
                            cells[(1 << bits[0]) | (1 << bits[1])],
                            cells[(1 << bits[0]) | (1 << bits[2])],
                            cells[(1 << bits[1]) | (1 << bits[2])],
                        ]),
                        _ => {}
                    }
                } else if k == 1 && edge_ends[id] != (cells[1 << bits[0]], cells[1 << bits[1]]) {
                    return Err(Error::Structure(format!("edge {key:?} glued with inconsistent ends")));
                }
                cells[mask] = id;
            }
            cells_out.push(TopCell { sign: *sign, cells });
        }
        let counts = ids.iter().map(|m| m.len()).collect();
        let tri = BranchedTriangulation { dim, counts, tops: cells_out, edge_ends, edge_keys, triangles };
        tri.validate()?;
        Ok(tri)
    }

    /// Every codimension-1 cell bounds exactly two top cells, with opposite
    /// induced orientations.
    fn validate(&self) -> Result<()> {
        let full = (1usize << (self.dim + 1)) - 1;
        let mut incidences: BTreeMap<usize, Vec<i64>> = BTreeMap::new();
        for t in &self.tops {
            for k in 0..=self.dim {
                let sign = if k % 2 == 0 { t.sign } else { -t.sign };
                incidences.entry(t.cells[full ^ (1 << k)]).or_default().push(sign);
            }
        }
        for (face, signs) in incidences {
            if signs.len() != 2 {
                return Err(Error::Structure(format!(
                    "not a closed pseudo-manifold: a codimension-1 cell ({face}) bounds {} top cells",
                    signs.len()
                )));
            }
            if signs[0] + signs[1] != 0 {
                return Err(Error::Structure(format!("top cells around face {face} are not coherently oriented")));
            }
        }
        Ok(())
    }

    /// A simplicial cycle with the global vertex order as branching.
    pub fn from_chain(chain: &Chain) -> Result<Self> {
        let dim = chain.dim().ok_or_else(|| Error::Structure("empty chain".into()))?;
        let mut tops = Vec::with_capacity(chain.len());
        for (s, c) in chain.terms() {
            if c.abs() != 1 {
                return Err(Error::Structure(format!("coefficient {c} on {}", s.key())));
            }
            tops.push((s.vertices().to_vec(), c));
        }
        BranchedTriangulation::build(dim, &tops, |sub| sub.iter().map(|&v| v as i64).collect())
    }

    /// `∂Δ⁴`.
    pub fn sphere3() -> Self {
        let simplex = Simplex::new(&[0, 1, 2, 3, 4]).expect("valid simplex");
        let chain = Chain::from_simplex(simplex).boundary();
        BranchedTriangulation::from_chain(&chain).expect("boundary of a simplex is a sphere")
    }

    /// The Kuhn triangulation of the `n^d` grid on the `d`-torus. With `n = 1`
    /// there is a single vertex.
    pub fn lattice_torus(d: usize, n: usize) -> Result<Self> {
        if d == 0 || n == 0 {
            return Err(Error::Parameter("torus needs d >= 1 and n >= 1".into()));
        }
        let perms = permutations(d);
        let mut tops = Vec::new();
        for cell in 0..n.pow(d as u32) {
            let mut base = vec![0i64; d];
            let mut c = cell;
            for b in base.iter_mut() {
                *b = (c % n) as i64;
                c /= n;
            }
            for perm in &perms {
                let mut pts = vec![base.clone()];
                for &axis in perm {
                    let mut p = pts.last().expect("nonempty").clone();
                    p[axis] += 1;
                    pts.push(p);
                }
                let mut m: Vec<Vec<f64>> = (1..=d).map(|i| (0..d).map(|k| (pts[i][k] - pts[0][k]) as f64).collect()).collect();
                let sign = determinant(&mut m).signum() as i64;
                tops.push((pts, sign));
            }
        }
        let n = n as i64;
        BranchedTriangulation::build(d, &tops, |sub| {
            let mut key: Vec<i64> = sub[0].iter().map(|x| x.rem_euclid(n)).collect();
            for p in &sub[1..] {
                key.extend(p.iter().zip(&sub[0]).map(|(a, b)| a - b));
            }
            key
        })
    }

    /// One-vertex torus: edges `a` (displacement `(1,0)`), `b` (`(0,1)`) and the
    /// diagonal `ab`.
    pub fn torus2() -> Self {
        BranchedTriangulation::lattice_torus(2, 1).expect("one-vertex torus")
    }

    /// The lens space `L(p, 1)` as the quotient of the join of two polygons
    /// by the free rotation action.
    pub fn lens(p: usize) -> Result<Self> {
        if p == 0 {
            return Err(Error::Parameter("lens space needs p >= 1".into()));
        }
        let m = match p {
            1 => 3,
            2 => 2,
            _ => 1,
        };
        let n = m * p;
        let mut tops = Vec::new();
        // One representative per orbit: the first vertex lies in a fundamental domain.
        for i in 0..m {
            for j in 0..n {
                tops.push((vec![i, (i + 1) % n, n + j, n + (j + 1) % n], 1));
            }
        }
        BranchedTriangulation::build(3, &tops, |sub| {
            let first = sub[0];
            let s = if first < n { first / m } else { (first - n) / m };
            sub.iter().map(|&v| if v < n { ((v + n - s * m) % n) as i64 } else { (n + (v - n + n - s * m) % n) as i64 }).collect()
        })
    }

    /// The genus-2 surface: an octagon with sides `a₁ b₁ a₁⁻¹ b₁⁻¹ a₂ b₂ a₂⁻¹ b₂⁻¹`,
    /// fanned from one corner. Edge keys `[1, g]` name the generator `g`
    /// (`a₁, b₁, a₂, b₂` as `0..4`).
    pub fn genus2() -> Self {
        let inverse = |side: usize| matches!(side % 4, 2 | 3);
        let mut tops = Vec::new();
        for i in 1..7 {
            let (a, b) = (i, i + 1);
            if inverse(i) {
                tops.push((vec![0, b, a], -1));
            } else {
                tops.push((vec![0, a, b], 1));
            }
        }
        BranchedTriangulation::build(2, &tops, |sub: &[usize]| match sub.len() {
            1 => vec![0],
            2 => {
                let (x, y) = (sub[0].min(sub[1]), sub[0].max(sub[1]));
                if y - x == 1 || (x, y) == (0, 7) {
                    let side = if (x, y) == (0, 7) { 7 } else { x };
                    vec![1, GENUS2_LETTERS[side] as i64]
                } else {
                    vec![2, x as i64, y as i64]
                }
            }
            _ => {
                let mut s: Vec<i64> = sub.iter().map(|&v| v as i64).collect();
                s.sort();
                s.insert(0, 3);
                s
            }
        })
        .expect("octagon gluing is a closed surface")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of cells of dimension `k`.
    pub fn count(&self, k: usize) -> usize {
        self.counts.get(k).copied().unwrap_or(0)
    }

    pub fn vertices(&self) -> usize {
        self.count(0)
    }

    pub fn edges(&self) -> usize {
        self.count(1)
    }

    pub fn tops(&self) -> &[TopCell] {
        &self.tops
    }

    pub fn edge_ends(&self) -> &[(usize, usize)] {
        &self.edge_ends
    }

    pub fn edge_key(&self, e: usize) -> &[i64] {
        &self.edge_keys[e]
    }

    pub fn find_edge(&self, key: &[i64]) -> Option<usize> {
        self.edge_keys.iter().position(|k| k == key)
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    /// Connected components of the 1-skeleton.
    pub fn components(&self) -> usize {
        let mut parent: Vec<usize> = (0..self.vertices()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for &(a, b) in &self.edge_ends {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
        (0..self.vertices()).filter(|&v| find(&mut parent, v) == v).count()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.counts.iter().enumerate().map(|(k, &c)| if k % 2 == 0 { c as i64 } else { -(c as i64) }).sum()
    }
}

/// Side `i` of the genus-2 octagon carries generator `GENUS2_LETTERS[i]`.
pub const GENUS2_LETTERS: [usize; 8] = [0, 1, 0, 1, 2, 3, 2, 3];

fn permutations(d: usize) -> Vec<Vec<usize>> {
    if d == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(d - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, d - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// An edge of `S¹ × Σ` in terms of the surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrismEdge {
    /// Lies in a copy of `Σ`, over the given surface edge.
    Horizontal(usize),
    /// The circle fiber over a surface vertex.
    Vertical(usize),
    /// Goes once around the circle while running along a surface edge.
    Diagonal(usize),
}

/// `Σ × S¹` with one circle segment, prisms cut into staircase simplices.
#[derive(Clone, Debug)]
pub struct Prism {
    pub triangulation: BranchedTriangulation,
    pub edges: Vec<PrismEdge>,
}

impl Prism {
    pub fn over(surface: &BranchedTriangulation) -> Result<Self> {
        if surface.dim() != 2 {
            return Err(Error::Structure("prism needs a surface".into()));
        }
        const CORNERS: [[f64; 2]; 3] = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
        let chains: [[(usize, i64); 4]; 3] = [[(0, 0), (1, 0), (2, 0), (2, 1)], [(0, 0), (1, 0), (1, 1), (2, 1)], [(0, 0), (0, 1), (1, 1), (2, 1)]];
        let mut tops = Vec::new();
        for (t, cell) in surface.tops().iter().enumerate() {
            for chain in &chains {
                let pts: Vec<[f64; 3]> = chain.iter().map(|&(i, s)| [CORNERS[i][0], CORNERS[i][1], s as f64]).collect();
                let mut m: Vec<Vec<f64>> = (1..4).map(|k| (0..3).map(|c| pts[k][c] - pts[0][c]).collect()).collect();
                let sign = cell.sign * determinant(&mut m).signum() as i64;
                tops.push((chain.iter().map(|&(i, s)| (t, i, s)).collect::<Vec<_>>(), sign));
            }
        }
        let tri = BranchedTriangulation::build(3, &tops, |sub: &[(usize, usize, i64)]| {
            let t = sub[0].0;
            let locals: BTreeSet<usize> = sub.iter().map(|&(_, i, _)| i).collect();
            let locals: Vec<usize> = locals.into_iter().collect();
            let mask = locals.iter().fold(0, |m, &i| m | (1 << i));
            let id = surface.tops()[t].cell(mask);
            let flat = sub.iter().all(|&(_, _, s)| s == sub[0].2);
            let mut key = vec![locals.len() as i64 - 1, id as i64];
            for &(_, i, s) in sub {
                let pos = locals.iter().position(|&l| l == i).expect("local index present");
                key.push(pos as i64);
                key.push(if flat { 0 } else { s });
            }
            key
        })?;
        let edges = (0..tri.edges())
            .map(|e| {
                let key = tri.edge_key(e);
                let id = key[1] as usize;
                match (key[0], key[3] == key[5]) {
                    (0, _) => PrismEdge::Vertical(id),
                    (_, true) => PrismEdge::Horizontal(id),
                    (_, false) => PrismEdge::Diagonal(id),
                }
            })
            .collect();
        Ok(Prism { triangulation: tri, edges })
    }
}

/// Replace the top simplex `tet` by the cone on its boundary from a new vertex.
pub fn pachner_1_4(chain: &Chain, tet: &Simplex) -> Result<Chain> {
    let c = chain.coefficient(tet);
    if c == 0 {
        return Err(Error::UnknownSimplex(tet.vertices().to_vec()));
    }
    let v = chain.terms().flat_map(|(s, _)| s.vertices().to_vec()).max().unwrap_or(0) + 1;
    let mut out = chain.clone();
    out.add_term(tet.clone(), -c);
    for (k, face) in tet.faces() {
        let mut verts = vec![v];
        verts.extend_from_slice(face.vertices());
        let sign = if k % 2 == 0 { c } else { -c };
        out.add_oriented(&verts, sign)?;
    }
    Ok(out)
}

/// Replace the two top simplices around the triangle `face` by three around
/// the new edge joining their apexes.
pub fn pachner_2_3(chain: &Chain, face: &Simplex) -> Result<Chain> {
    if face.dim() != 2 {
        return Err(Error::Structure("2-3 move needs a triangle".into()));
    }
    let apexes: Vec<(usize, i64)> = chain
        .terms()
        .filter(|(s, _)| s.dim() == 3 && s.contains_face(face))
        .map(|(s, c)| (*s.vertices().iter().find(|v| !face.vertices().contains(v)).expect("apex"), c))
        .collect();
    if apexes.len() != 2 {
        return Err(Error::Structure(format!("triangle {} is in {} tetrahedra", face.key(), apexes.len())));
    }
    let (d, e) = (apexes[0].0, apexes[1].0);
    let edge = Simplex::new(&[d.min(e), d.max(e)])?;
    if chain.terms().any(|(s, _)| s.contains_face(&edge)) {
        return Err(Error::Structure(format!("edge {} already present", edge.key())));
    }
    let mut verts = face.vertices().to_vec();
    verts.extend([d, e]);
    let (big, _) = Simplex::oriented(&verts)?;
    let boundary = Chain::from_simplex(big.clone()).boundary();
    let mut with_d = face.vertices().to_vec();
    with_d.push(d);
    let (tet_d, _) = Simplex::oriented(&with_d)?;
    let lambda = chain.coefficient(&tet_d) * boundary.coefficient(&tet_d);
    let out = chain - &boundary.scale(lambda);
    if out.terms().any(|(s, _)| s.contains_face(face)) {
        return Err(Error::Structure("tetrahedra around the triangle are not coherently oriented".into()));
    }
    Ok(out)
}
