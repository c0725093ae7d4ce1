//! Dijkgraaf–Witten state sums over flat colorings of branched triangulations.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::group::{FiniteGroup, GroupCochain};
use super::triangulation::BranchedTriangulation;
use crate::error::{Error, Result};

/// A finite sum `Σ c · exp(2πi·θ)` with rational phases `θ ∈ [0, 1)` and
/// rational coefficients. Two sums are equal when they have the same terms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PhaseSum {
    terms: BTreeMap<Rational64, Rational64>,
}

impl PhaseSum {
    pub fn new() -> Self {
        PhaseSum::default()
    }

    pub fn add(&mut self, phase: Rational64, coeff: Rational64) {
        let phase = phase - phase.floor();
        let entry = self.terms.entry(phase).or_insert_with(Rational64::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&phase);
        }
    }

    pub fn scale(&self, s: Rational64) -> PhaseSum {
        let mut out = PhaseSum::new();
        for (p, c) in &self.terms {
            out.add(*p, c * s);
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (Rational64, Rational64)> + '_ {
        self.terms.iter().map(|(p, c)| (*p, *c))
    }

    /// The value when every phase is trivial.
    pub fn as_rational(&self) -> Option<Rational64> {
        match self.terms.len() {
            0 => Some(Rational64::zero()),
            1 => self.terms.get(&Rational64::zero()).copied(),
            _ => None,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        self.terms
            .iter()
            .map(|(p, c)| {
                let t = 2.0 * std::f64::consts::PI * p.to_f64().unwrap_or(f64::NAN);
                Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), t)
            })
            .sum()
    }
}

impl fmt::Display for PhaseSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return if *r.denom() == 1 { write!(f, "{}", r.numer()) } else { write!(f, "{}/{}", r.numer(), r.denom()) };
        }
        let parts: Vec<String> = self.terms.iter().map(|(p, c)| format!("{c}·e(2πi·{p})")).collect();
        f.write_str(&parts.join(" + "))
    }
}

impl Serialize for PhaseSum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `g(e₀₁)·g(e₁₂) = g(e₀₂)` on every 2-cell.
pub fn is_flat(tri: &BranchedTriangulation, g: &FiniteGroup, coloring: &[usize]) -> bool {
    coloring.len() == tri.edges() && tri.triangles().iter().all(|&[e01, e02, e12]| g.mul(coloring[e01], coloring[e12]) == coloring[e02])
}

/// `Σ_top sign · ω(g(e₀₁), g(e₁₂), …)` reduced mod 1.
pub fn coloring_weight(tri: &BranchedTriangulation, omega: &GroupCochain, coloring: &[usize]) -> Rational64 {
    let d = tri.dim();
    let mut args = vec![0; d];
    let mut total = Rational64::zero();
    for top in tri.tops() {
        for (i, a) in args.iter_mut().enumerate() {
            *a = coloring[top.edge(i, i + 1)];
        }
        let v = omega.value(&args);
        total += if top.sign > 0 { v } else { -v };
    }
    total - total.floor()
}

fn check_inputs(tri: &BranchedTriangulation, omega: &GroupCochain) -> Result<()> {
    if tri.dim() != omega.degree() {
        return Err(Error::Structure(format!("a {}-cochain cannot weight a {}-dimensional triangulation", omega.degree(), tri.dim())));
    }
    let report = omega.cocycle_report();
    if !report.passed {
        let first = report.violations.first().map(|v| v.tuple.join(", ")).unwrap_or_default();
        return Err(Error::Precondition(format!("weight fails the cocycle identity at ({first})")));
    }
    Ok(())
}

/// Largest number of colorings the brute-force sum will enumerate.
pub const BRUTE_FORCE_LIMIT: u128 = 20_000_000;

/// `|G|^{-V} Σ_{flat colorings} exp(2πi·weight)`, enumerating every edge coloring.
pub fn dw_brute_force(tri: &BranchedTriangulation, omega: &GroupCochain) -> Result<PhaseSum> {
    check_inputs(tri, omega)?;
    let g = omega.group();
    let n = g.order();
    let total = (n as u128).checked_pow(tri.edges() as u32).unwrap_or(u128::MAX);
    if total > BRUTE_FORCE_LIMIT {
        return Err(Error::Parameter(format!("{total} colorings exceed the brute-force limit")));
    }
    let counts: BTreeMap<Rational64, i64> = (0..total as u64)
        .into_par_iter()
        .fold(BTreeMap::new, |mut acc, mut idx| {
            let coloring: Vec<usize> = (0..tri.edges())
                .map(|_| {
                    let c = (idx % n as u64) as usize;
                    idx /= n as u64;
                    c
                })
                .collect();
            if is_flat(tri, g, &coloring) {
                *acc.entry(coloring_weight(tri, omega, &coloring)).or_insert(0) += 1;
            }
            acc
        })
        .reduce(BTreeMap::new, merge_counts);
    Ok(normalize(counts, Rational64::from_integer(n as i64).pow(tri.vertices() as i32)))
}

fn merge_counts(mut a: BTreeMap<Rational64, i64>, b: BTreeMap<Rational64, i64>) -> BTreeMap<Rational64, i64> {
    for (k, v) in b {
        *a.entry(k).or_insert(0) += v;
    }
    a
}

fn normalize(counts: BTreeMap<Rational64, i64>, norm: Rational64) -> PhaseSum {
    let mut out = PhaseSum::new();
    for (p, c) in counts {
        out.add(p, Rational64::from_integer(c) / norm);
    }
    out
}

/// All flat colorings with a spanning forest of the 1-skeleton colored by the
/// identity. Every flat coloring is gauge equivalent to exactly
/// `|G|^{components}` of these up to the free part of the gauge group.
pub fn gauge_fixed_colorings(tri: &BranchedTriangulation, g: &FiniteGroup) -> Vec<Vec<usize>> {
    let ne = tri.edges();
    let mut assign: Vec<Option<usize>> = vec![None; ne];
    // Spanning forest by BFS.
    let mut seen = vec![false; tri.vertices()];
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); tri.vertices()];
    for (e, &(a, b)) in tri.edge_ends().iter().enumerate() {
        if a != b {
            adj[a].push((b, e));
            adj[b].push((a, e));
        }
    }
    for root in 0..tri.vertices() {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &(w, e) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    assign[e] = Some(g.identity());
                    queue.push_back(w);
                }
            }
        }
    }
    let mut edge_tris: Vec<Vec<usize>> = vec![Vec::new(); ne];
    for (t, tri_edges) in tri.triangles().iter().enumerate() {
        for &e in tri_edges {
            edge_tris[e].push(t);
        }
    }
    let search = Search { tri, g, edge_tris: &edge_tris };
    let mut trail = Vec::new();
    if !search.propagate(&mut assign, &mut trail, (0..tri.triangles().len()).collect()) {
        return Vec::new();
    }
    let first_free = assign.iter().position(|a| a.is_none());
    match first_free {
        None => vec![assign.into_iter().map(|a| a.expect("assigned")).collect()],
        Some(e) => (0..g.order())
            .into_par_iter()
            .flat_map_iter(|x| {
                let mut local = assign.clone();
                let mut out = Vec::new();
                let mut trail = Vec::new();
                local[e] = Some(x);
                if search.propagate(&mut local, &mut trail, edge_tris[e].clone()) {
                    search.recurse(&mut local, &mut out);
                }
                out
            })
            .collect(),
    }
}

struct Search<'a> {
    tri: &'a BranchedTriangulation,
    g: &'a FiniteGroup,
    edge_tris: &'a [Vec<usize>],
}

impl Search<'_> {
    /// Deduce forced edges from the triangles in `queue`; false on a contradiction.
    fn propagate(&self, assign: &mut [Option<usize>], trail: &mut Vec<usize>, mut queue: Vec<usize>) -> bool {
        let g = self.g;
        while let Some(t) = queue.pop() {
            let [e01, e02, e12] = self.tri.triangles()[t];
            let forced = match (assign[e01], assign[e02], assign[e12]) {
                (Some(a), Some(b), Some(c)) => {
                    if g.mul(a, c) != b {
                        return false;
                    }
                    None
                }
                (Some(a), None, Some(c)) => Some((e02, g.mul(a, c))),
                (Some(a), Some(b), None) => Some((e12, g.mul(g.inv(a), b))),
                (None, Some(b), Some(c)) => Some((e01, g.mul(b, g.inv(c)))),
                _ => None,
            };
            if let Some((e, x)) = forced {
                assign[e] = Some(x);
                trail.push(e);
                queue.extend(&self.edge_tris[e]);
            }
        }
        true
    }

    fn recurse(&self, assign: &mut Vec<Option<usize>>, out: &mut Vec<Vec<usize>>) {
        let Some(e) = assign.iter().position(|a| a.is_none()) else {
            out.push(assign.iter().map(|a| a.expect("assigned")).collect());
            return;
        };
        for x in 0..self.g.order() {
            let mut trail = vec![e];
            assign[e] = Some(x);
            if self.propagate(assign, &mut trail, self.edge_tris[e].clone()) {
                self.recurse(assign, out);
            }
            for f in trail {
                assign[f] = None;
            }
        }
    }
}

/// The Dijkgraaf–Witten invariant `|G|^{-V} Σ_{flat} exp(2πi Σ ±ω)`, computed on
/// gauge-fixed colorings. Weights are gauge invariant on closed manifolds, so
/// the sum over all colorings is `|G|^{V - components}` times the fixed sum.
pub fn dw_invariant(tri: &BranchedTriangulation, omega: &GroupCochain) -> Result<PhaseSum> {
    check_inputs(tri, omega)?;
    let g = omega.group();
    let colorings = gauge_fixed_colorings(tri, g);
    let counts = colorings
        .par_iter()
        .fold(BTreeMap::new, |mut acc, c| {
            *acc.entry(coloring_weight(tri, omega, c)).or_insert(0i64) += 1;
            acc
        })
        .reduce(BTreeMap::new, merge_counts);
    let norm = Rational64::from_integer(g.order() as i64).pow(tri.components() as i32);
    Ok(normalize(counts, norm))
}

/// Number of flat colorings divided by `|G|^V`: the untwisted invariant.
pub fn untwisted(tri: &BranchedTriangulation, g: &FiniteGroup) -> Rational64 {
    let fixed = gauge_fixed_colorings(tri, g).len() as i64;
    Rational64::from_integer(fixed) / Rational64::from_integer(g.order() as i64).pow(tri.components() as i32)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::multiplicative::triangulation::{pachner_1_4, pachner_2_3};
    use crate::simplicial::meshes::TorusGrid;
    use crate::simplicial::{Chain, Simplex};

    fn trivial(n: usize) -> GroupCochain {
        GroupCochain::trivial(Arc::new(FiniteGroup::cyclic(n)), 3)
    }

    fn r(a: i64, b: i64) -> Rational64 {
        Rational64::new(a, b)
    }

    #[test]
    fn untwisted_values() {
        let t3 = BranchedTriangulation::lattice_torus(3, 1).unwrap();
        let s3 = BranchedTriangulation::sphere3();
        for n in 1..=5 {
            let z = dw_invariant(&t3, &trivial(n)).unwrap();
            assert_eq!(z.as_rational(), Some(r((n * n) as i64, 1)));
            assert_eq!(dw_invariant(&s3, &trivial(n)).unwrap().as_rational(), Some(r(1, n as i64)));
        }
    }

    #[test]
    fn lens_space_counts_homomorphisms() {
        // |Hom(ℤ/p, ℤ/n)| / n = gcd(p, n) / n
        for p in 1..=4usize {
            let l = BranchedTriangulation::lens(p).unwrap();
            for n in 1..=4usize {
                let gcd = num_integer::gcd(p, n) as i64;
                assert_eq!(dw_invariant(&l, &trivial(n)).unwrap().as_rational(), Some(r(gcd, n as i64)), "p={p} n={n}");
            }
        }
    }

    #[test]
    fn gauge_fixed_sum_matches_brute_force() {
        let s3 = BranchedTriangulation::sphere3();
        let t3 = BranchedTriangulation::lattice_torus(3, 1).unwrap();
        let l3 = BranchedTriangulation::lens(3).unwrap();
        for tri in [&s3, &t3, &l3] {
            for (n, k) in [(2, 1), (3, 1), (3, 2), (4, 1), (4, 3)] {
                let w = GroupCochain::cyclic(n, k);
                assert_eq!(dw_invariant(tri, &w).unwrap(), dw_brute_force(tri, &w).unwrap());
            }
        }
    }

    #[test]
    fn lens_space_sees_the_twist() {
        // On L(3,1) with ℤ/3 the twisted sum differs from the untwisted one.
        let l = BranchedTriangulation::lens(3).unwrap();
        let plain = dw_invariant(&l, &trivial(3)).unwrap();
        let twisted = dw_invariant(&l, &GroupCochain::cyclic(3, 1)).unwrap();
        assert_ne!(plain, twisted);
        assert!((plain.to_complex().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pachner_moves_preserve_the_invariant() {
        let sphere = Chain::from_simplex(Simplex::new(&[0, 1, 2, 3, 4]).unwrap()).boundary();
        let one = pachner_1_4(&sphere, &Simplex::new(&[0, 1, 2, 3]).unwrap()).unwrap();
        let two = pachner_2_3(&one, &Simplex::new(&[0, 1, 2]).unwrap()).unwrap();
        let grid = TorusGrid::new(3, 3).unwrap().complex.chain().clone();
        let first = grid.terms().next().unwrap().0.clone();
        let grid_moved = pachner_1_4(&grid, &first).unwrap();
        let pairs = [(sphere, one.clone()), (one, two), (grid, grid_moved)];
        for (a, b) in &pairs {
            let (ta, tb) = (BranchedTriangulation::from_chain(a).unwrap(), BranchedTriangulation::from_chain(b).unwrap());
            for (n, k) in [(2, 1), (3, 2), (4, 1)] {
                let w = GroupCochain::cyclic(n, k);
                assert_eq!(dw_invariant(&ta, &w).unwrap(), dw_invariant(&tb, &w).unwrap());
            }
        }
    }

    #[test]
    fn non_cocycle_is_rejected() {
        let mut w = GroupCochain::cyclic(2, 1);
        w.set(&[1, 1, 1], r(1, 4)).unwrap();
        let t3 = BranchedTriangulation::lattice_torus(3, 1).unwrap();
        assert!(matches!(dw_invariant(&t3, &w), Err(Error::Precondition(_))));
        let w2 = GroupCochain::trivial(Arc::new(FiniteGroup::cyclic(2)), 2);
        assert!(matches!(dw_invariant(&t3, &w2), Err(Error::Structure(_))));
    }

    #[test]
    fn surfaces_count_flat_connections() {
        // Σ_g: |Hom(π₁, G)| / |G|; for abelian G that is |G|^{2g - 1}.
        let g = FiniteGroup::cyclic(3);
        assert_eq!(untwisted(&BranchedTriangulation::torus2(), &g), r(3, 1));
        assert_eq!(untwisted(&BranchedTriangulation::genus2(), &g), r(27, 1));
        // S3 on the torus: commuting pairs / 6 = 18 / 6.
        assert_eq!(untwisted(&BranchedTriangulation::torus2(), &FiniteGroup::symmetric3()), r(3, 1));
    }
}
