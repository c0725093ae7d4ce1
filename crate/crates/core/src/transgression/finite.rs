//! The transgressed character of a finite group 3-cocycle.
//!
//! A loop coloring of a surface `Σ` is a flat coloring `σ` of `Σ` together with
//! a holonomy `x` around an extra circle that commutes with `σ`. Together they
//! color `Σ × S¹`, and the character's value is the Dijkgraaf–Witten weight of
//! that single coloring.

use std::sync::Arc;

use num_rational::Rational64;
use num_traits::Zero;
use serde::Serialize;

use crate::circle::CircleValue;
use crate::error::{Error, Result};
use crate::multiplicative::{coloring_weight, is_flat, BranchedTriangulation, FiniteGroup, GroupCochain, Prism, PrismEdge, GENUS2_LETTERS};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LoopColoring {
    pub loop_holonomy: usize,
    pub surface: Vec<usize>,
}

impl LoopColoring {
    /// On [`BranchedTriangulation::torus2`]: holonomies `a`, `b` around the two
    /// generators.
    pub fn torus(g: &FiniteGroup, x: usize, a: usize, b: usize) -> Result<Self> {
        let t = BranchedTriangulation::torus2();
        let mut surface = vec![0; t.edges()];
        for (key, value) in [([0, 0, 1, 0], a), ([0, 0, 0, 1], b), ([0, 0, 1, 1], g.mul(a, b))] {
            let e = t.find_edge(&key).ok_or_else(|| Error::Structure("torus edge missing".into()))?;
            surface[e] = value;
        }
        Ok(LoopColoring { loop_holonomy: x, surface })
    }

    /// Every pairwise commuting triple `(x, a, b)` on the torus.
    pub fn all_torus(g: &FiniteGroup) -> Vec<LoopColoring> {
        let n = g.order();
        let mut out = Vec::new();
        for x in 0..n {
            for a in 0..n {
                for b in 0..n {
                    if g.commute(x, a) && g.commute(x, b) && g.commute(a, b) {
                        out.push(LoopColoring::torus(g, x, a, b).expect("torus edges exist"));
                    }
                }
            }
        }
        out
    }

    /// On [`BranchedTriangulation::genus2`], from generator holonomies
    /// `(a₁, b₁, a₂, b₂)`; flatness is checked on evaluation.
    pub fn genus2(g: &FiniteGroup, x: usize, gens: [usize; 4]) -> Result<Self> {
        let s = BranchedTriangulation::genus2();
        let mut surface = vec![g.identity(); s.edges()];
        for (letter, &h) in gens.iter().enumerate() {
            let e = s.find_edge(&[1, letter as i64]).ok_or_else(|| Error::Structure("genus-2 edge missing".into()))?;
            surface[e] = h;
        }
        // Diagonal from corner 0 to corner i: transport along the sides.
        let mut path = g.identity();
        for side in 0..6 {
            let h = gens[GENUS2_LETTERS[side]];
            let step = if matches!(side % 4, 2 | 3) { g.inv(h) } else { h };
            path = g.mul(path, step);
            let corner = side + 1;
            if corner >= 2 {
                if let Some(e) = s.find_edge(&[2, 0, corner as i64]) {
                    surface[e] = path;
                }
            }
        }
        Ok(LoopColoring { loop_holonomy: x, surface })
    }

    /// Pointwise product.
    pub fn product(&self, other: &LoopColoring, g: &FiniteGroup) -> Result<LoopColoring> {
        if self.surface.len() != other.surface.len() {
            return Err(Error::Structure("colorings of different surfaces".into()));
        }
        Ok(LoopColoring {
            loop_holonomy: g.mul(self.loop_holonomy, other.loop_holonomy),
            surface: self.surface.iter().zip(&other.surface).map(|(&a, &b)| g.mul(a, b)).collect(),
        })
    }
}

pub type Twist = Arc<dyn Fn(&LoopColoring) -> Rational64 + Send + Sync>;

/// A `U(1)`-valued function on loop colorings of a fixed surface.
#[derive(Clone)]
pub struct FiniteCharacter {
    omega: GroupCochain,
    surface: Arc<BranchedTriangulation>,
    prism: Arc<Prism>,
    twist: Option<Twist>,
}

impl std::fmt::Debug for FiniteCharacter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FiniteCharacter")
            .field("group_order", &self.omega.group().order())
            .field("surface_edges", &self.surface.edges())
            .field("twisted", &self.twist.is_some())
            .finish()
    }
}

/// The transgression of `ω` to loop colorings of `surface`.
pub fn psi_finite_group(omega: &GroupCochain, surface: &BranchedTriangulation) -> Result<FiniteCharacter> {
    if omega.degree() != 3 {
        return Err(Error::Structure("transgression takes a 3-cochain".into()));
    }
    let report = omega.cocycle_report();
    if !report.passed {
        let first = report.violations.first().map(|v| v.tuple.join(", ")).unwrap_or_default();
        return Err(Error::Precondition(format!("not a group 3-cocycle: fails at ({first})")));
    }
    let prism = Prism::over(surface)?;
    Ok(FiniteCharacter { omega: omega.clone(), surface: Arc::new(surface.clone()), prism: Arc::new(prism), twist: None })
}

impl FiniteCharacter {
    pub fn group(&self) -> &FiniteGroup {
        self.omega.group()
    }

    pub fn surface(&self) -> &BranchedTriangulation {
        &self.surface
    }

    pub fn prism(&self) -> &Prism {
        &self.prism
    }

    /// Multiply by an extra phase function of the coloring.
    pub fn with_twist(&self, twist: Twist) -> FiniteCharacter {
        FiniteCharacter { twist: Some(twist), ..self.clone() }
    }

    /// A shipped non-multiplicative perturbation: adds `shift` on colorings
    /// with loop holonomy `x` and trivial surface part.
    pub fn perturbed(&self, x: usize, shift: Rational64) -> FiniteCharacter {
        self.with_twist(Arc::new(
            move |c: &LoopColoring| {
                if c.loop_holonomy == x && c.surface.iter().all(|&h| h == 0) {
                    shift
                } else {
                    Rational64::zero()
                }
            },
        ))
    }

    /// The coloring of `Σ × S¹` determined by a loop coloring.
    pub fn lift(&self, c: &LoopColoring) -> Result<Vec<usize>> {
        let g = self.omega.group();
        if c.surface.len() != self.surface.edges() || c.loop_holonomy >= g.order() {
            return Err(Error::Structure("coloring does not match the surface".into()));
        }
        if c.surface.iter().any(|&h| h >= g.order()) {
            return Err(Error::Structure("coloring names a missing group element".into()));
        }
        if !is_flat(&self.surface, g, &c.surface) {
            return Err(Error::Precondition("surface coloring is not flat".into()));
        }
        if c.surface.iter().any(|&h| !g.commute(h, c.loop_holonomy)) {
            return Err(Error::Precondition("loop holonomy does not commute with the surface coloring".into()));
        }
        let lifted: Vec<usize> = self
            .prism
            .edges
            .iter()
            .map(|e| match *e {
                PrismEdge::Horizontal(s) => c.surface[s],
                PrismEdge::Vertical(_) => c.loop_holonomy,
                PrismEdge::Diagonal(s) => g.mul(c.surface[s], c.loop_holonomy),
            })
            .collect();
        debug_assert!(is_flat(&self.prism.triangulation, g, &lifted));
        Ok(lifted)
    }

    pub fn evaluate(&self, c: &LoopColoring) -> Result<CircleValue> {
        let lifted = self.lift(c)?;
        let mut w = coloring_weight(&self.prism.triangulation, &self.omega, &lifted);
        if let Some(t) = &self.twist {
            w += t(c);
        }
        Ok(CircleValue::from_rational(w))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiplicative::{dw_brute_force, multiplicativity_check};
    use std::collections::BTreeMap;

    #[test]
    fn trivial_cocycle_gives_the_constant_character() {
        let g = Arc::new(FiniteGroup::symmetric3());
        let chi = psi_finite_group(&GroupCochain::trivial(g.clone(), 3), &BranchedTriangulation::torus2()).unwrap();
        for c in LoopColoring::all_torus(&g) {
            assert_eq!(chi.evaluate(&c).unwrap(), CircleValue::identity());
        }
    }

    /// Enumerate every flat coloring of `T² × S¹` and read off, per loop
    /// coloring, the weight the state sum assigns to it.
    fn oracle_weights(omega: &GroupCochain, chi: &FiniteCharacter) -> BTreeMap<(usize, Vec<usize>), Rational64> {
        let tri = &chi.prism().triangulation;
        let g = omega.group();
        let n = g.order();
        let mut out = BTreeMap::new();
        for mut idx in 0..n.pow(tri.edges() as u32) {
            let col: Vec<usize> = (0..tri.edges())
                .map(|_| {
                    let c = idx % n;
                    idx /= n;
                    c
                })
                .collect();
            if !is_flat(tri, g, &col) {
                continue;
            }
            let mut x = None;
            let mut surface = vec![0; chi.surface().edges()];
            for (e, kind) in chi.prism().edges.iter().enumerate() {
                match *kind {
                    PrismEdge::Vertical(_) => x = Some(col[e]),
                    PrismEdge::Horizontal(s) => surface[s] = col[e],
                    PrismEdge::Diagonal(_) => {}
                }
            }
            out.insert((x.unwrap(), surface), coloring_weight(tri, omega, &col));
        }
        out
    }

    #[test]
    fn agrees_with_the_state_sum() {
        for (n, k) in [(2, 1), (3, 1), (4, 3)] {
            let w = GroupCochain::cyclic(n, k);
            let chi = psi_finite_group(&w, &BranchedTriangulation::torus2()).unwrap();
            let oracle = oracle_weights(&w, &chi);
            let colorings = LoopColoring::all_torus(w.group());
            assert_eq!(oracle.len(), colorings.len());
            for c in colorings {
                let expected = oracle[&(c.loop_holonomy, c.surface.clone())];
                assert_eq!(chi.evaluate(&c).unwrap(), CircleValue::from_rational(expected));
            }
            // The prism over the torus is a 3-torus: the total matches the state sum.
            let z = dw_brute_force(&chi.prism().triangulation, &w).unwrap();
            assert_eq!(z.as_rational(), Some(Rational64::from_integer((n * n) as i64)));
        }
    }

    #[test]
    fn nonabelian_values_and_coboundary_invariance() {
        let g = Arc::new(FiniteGroup::symmetric3());
        let base = GroupCochain::random(g.clone(), 2, 6, 3).coboundary();
        let w = GroupCochain::random(g.clone(), 2, 5, 4).coboundary().add(&base).unwrap();
        let chi = psi_finite_group(&w, &BranchedTriangulation::torus2()).unwrap();
        for c in LoopColoring::all_torus(&g) {
            assert_eq!(chi.evaluate(&c).unwrap(), CircleValue::identity());
        }
    }

    #[test]
    fn coboundary_shift_leaves_values_unchanged() {
        for n in 2..=4 {
            let g = Arc::new(FiniteGroup::cyclic(n));
            let w = GroupCochain::cyclic(n, 1);
            let chi = psi_finite_group(&w, &BranchedTriangulation::torus2()).unwrap();
            for seed in 0..5 {
                let shifted = w.add(&GroupCochain::random(g.clone(), 2, 12, seed).coboundary()).unwrap();
                let chi2 = psi_finite_group(&shifted, &BranchedTriangulation::torus2()).unwrap();
                for c in LoopColoring::all_torus(&g) {
                    assert_eq!(chi.evaluate(&c).unwrap(), chi2.evaluate(&c).unwrap());
                }
            }
        }
    }

    #[test]
    fn genus_two_colorings() {
        let g = FiniteGroup::cyclic(3);
        let w = GroupCochain::cyclic(3, 2);
        let chi = psi_finite_group(&w, &BranchedTriangulation::genus2()).unwrap();
        let c = LoopColoring::genus2(&g, 1, [1, 2, 0, 1]).unwrap();
        assert!(chi.evaluate(&c).unwrap().approx_eq(&CircleValue::identity(), 0.0));
        let s3 = FiniteGroup::symmetric3();
        // a₁ = r, b₁ = s do not commute and nothing compensates: not flat.
        let bad = LoopColoring::genus2(&s3, 0, [1, 3, 0, 0]).unwrap();
        let chi3 = psi_finite_group(&GroupCochain::trivial(Arc::new(s3), 3), &BranchedTriangulation::genus2()).unwrap();
        assert!(matches!(chi3.evaluate(&bad), Err(Error::Precondition(_))));
    }

    #[test]
    fn twisted_character_has_a_defect() {
        let g = FiniteGroup::cyclic(2);
        let chi = psi_finite_group(&GroupCochain::cyclic(2, 1), &BranchedTriangulation::torus2()).unwrap();
        let all = LoopColoring::all_torus(&g);
        let pairs: Vec<_> = all.iter().flat_map(|a| all.iter().map(move |b| (a.clone(), b.clone()))).collect();
        let clean = multiplicativity_check(&chi, &pairs);
        assert!(clean.passed);
        assert_eq!(clean.skipped, 0);
        // A phase depending on whether the loop holonomy is trivial is not a homomorphism.
        let twisted = chi.with_twist(Arc::new(|c: &LoopColoring| {
            if c.loop_holonomy == 1 && c.surface.iter().all(|&h| h == 0) {
                Rational64::new(1, 4)
            } else {
                Rational64::zero()
            }
        }));
        let report = multiplicativity_check(&twisted, &pairs);
        assert!(!report.passed);
        assert!(report.entries.iter().any(|e| e.defect.is_some_and(|d| d != CircleValue::identity())));
    }
}
