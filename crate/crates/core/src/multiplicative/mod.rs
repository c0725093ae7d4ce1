//! Finite groups and their nerve, group cocycles, simplicial cocycle triples,
//! Dijkgraaf–Witten state sums, multiplicativity of transgressed characters
//! and the B-field integrality criterion.

mod bfield;
mod group;
pub mod json;
mod state_sum;
mod triangulation;
mod triple;

pub use bfield::{b_field_integrality_check, BFieldEntry, BFieldReport, SurfacePair};
pub use group::{face_map, CocycleViolation, FiniteGroup, GroupCochain, GroupCocycleReport, MAX_REPORTED};
pub use state_sum::{coloring_weight, dw_brute_force, dw_invariant, gauge_fixed_colorings, is_flat, untwisted, PhaseSum, BRUTE_FORCE_LIMIT};
pub use triangulation::{pachner_1_4, pachner_2_3, BranchedTriangulation, Prism, PrismEdge, TopCell, GENUS2_LETTERS};
pub use triple::{random_cech_pair, CechFamily, DiscreteLevel, SimplicialCocycleTriple, TripleReport, TripleRung, TripleViolation};

use serde::Serialize;

use crate::circle::CircleValue;
use crate::error::Error;
use crate::transgression::{FiniteCharacter, LoopColoring};

/// The finite specialization of the triple check: the group cocycle identity.
pub fn check_triple(omega: &GroupCochain) -> GroupCocycleReport {
    omega.cocycle_report()
}

#[derive(Clone, Debug, Serialize)]
pub struct PairOutcome {
    pub first: LoopColoring,
    pub second: LoopColoring,
    /// `χ(σ₁σ₂) − χ(σ₁) − χ(σ₂)`, absent when the pair was skipped.
    pub defect: Option<CircleValue>,
    pub notice: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MultiplicativityReport {
    pub passed: bool,
    pub checked: usize,
    pub skipped: usize,
    pub entries: Vec<PairOutcome>,
}

/// Evaluate the defect on each pair. Pairs whose product is not flat are
/// skipped with a notice.
pub fn multiplicativity_check(chi: &FiniteCharacter, pairs: &[(LoopColoring, LoopColoring)]) -> MultiplicativityReport {
    let g = chi.group();
    let mut entries = Vec::with_capacity(pairs.len());
    for (a, b) in pairs {
        let outcome = a.product(b, g).and_then(|ab| {
            let (va, vb, vab) = (chi.evaluate(a)?, chi.evaluate(b)?, chi.evaluate(&ab)?);
            Ok(vab - va - vb)
        });
        let (defect, notice) = match outcome {
            Ok(d) => (Some(d), None),
            Err(Error::Precondition(msg)) => (None, Some(format!("skipped: {msg}"))),
            Err(e) => (None, Some(format!("skipped: {e}"))),
        };
        entries.push(PairOutcome { first: a.clone(), second: b.clone(), defect, notice });
    }
    let checked = entries.iter().filter(|e| e.defect.is_some()).count();
    let passed = entries.iter().all(|e| e.defect.is_none_or(|d| d == CircleValue::identity()));
    MultiplicativityReport { passed, checked, skipped: entries.len() - checked, entries }
}
