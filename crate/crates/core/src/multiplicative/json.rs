//! Exchange formats for finite groups, group cocycles and branched
//! triangulations.
//!
//! ```json
//! {"group": {"type": "table", "elements": ["e", "a"], "table": [[0, 1], [1, 0]]},
//!  "cocycle": {"type": "table", "values": ["0", "0", "0", "0", "0", "0", "0", "1/2"]}}
//! ```
//!
//! Named forms: groups `cyclic{n}`, `klein`, `dihedral{n}`, `symmetric3`;
//! cocycles `trivial`, `cyclic_cocycle{n, k}` (which fixes the group to `ℤ/n`)
//! and `perturbed{base, tuple, shift}`. Tabulated values are listed with the
//! last argument varying fastest.

use std::sync::Arc;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use super::group::{FiniteGroup, GroupCochain};
use super::triangulation::BranchedTriangulation;
use crate::error::{Error, Result};
use crate::simplicial::Chain;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupDoc {
    Cyclic { n: usize },
    Klein,
    Dihedral { n: usize },
    Symmetric3,
    Table { elements: Vec<String>, table: Vec<Vec<usize>> },
}

impl GroupDoc {
    pub fn build(&self) -> Result<FiniteGroup> {
        Ok(match self {
            GroupDoc::Cyclic { n } if *n >= 1 => FiniteGroup::cyclic(*n),
            GroupDoc::Cyclic { .. } => return Err(Error::Parse("cyclic group needs n >= 1".into())),
            GroupDoc::Klein => FiniteGroup::klein(),
            GroupDoc::Dihedral { n } if *n >= 2 => FiniteGroup::dihedral(*n),
            GroupDoc::Dihedral { .. } => return Err(Error::Parse("dihedral group needs n >= 2".into())),
            GroupDoc::Symmetric3 => FiniteGroup::symmetric3(),
            GroupDoc::Table { elements, table } => FiniteGroup::from_table(elements.clone(), table.clone())?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum CocycleDoc {
    Trivial,
    CyclicCocycle { n: usize, k: i64 },
    Table { values: Vec<String> },
    Perturbed { base: Box<CocycleDoc>, tuple: Vec<usize>, shift: String },
}

/// `"p/q"` or an integer.
pub fn parse_rational(s: &str) -> Result<Rational64> {
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(Rational64::new(p, q))
        }
        None => Ok(Rational64::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

impl CocycleDoc {
    /// The group implied by the cocycle, if any.
    fn implied_group(&self) -> Option<FiniteGroup> {
        match self {
            CocycleDoc::CyclicCocycle { n, .. } => Some(FiniteGroup::cyclic((*n).max(1))),
            CocycleDoc::Perturbed { base, .. } => base.implied_group(),
            _ => None,
        }
    }

    pub fn build(&self, group: Arc<FiniteGroup>) -> Result<GroupCochain> {
        match self {
            CocycleDoc::Trivial => Ok(GroupCochain::trivial(group, 3)),
            CocycleDoc::CyclicCocycle { n, k } => {
                if *n == 0 {
                    return Err(Error::Parse("cyclic_cocycle needs n >= 1".into()));
                }
                if *group != FiniteGroup::cyclic(*n) {
                    return Err(Error::Parse(format!("cyclic_cocycle({n}, {k}) needs the group Z/{n}")));
                }
                Ok(GroupCochain::cyclic(*n, *k))
            }
            CocycleDoc::Table { values } => {
                let values = values.iter().map(|v| parse_rational(v)).collect::<Result<Vec<_>>>()?;
                GroupCochain::tabulated(group, 3, values).map_err(|e| Error::Parse(e.to_string()))
            }
            CocycleDoc::Perturbed { base, tuple, shift } => {
                let mut c = base.build(group.clone())?;
                if tuple.len() != 3 || tuple.iter().any(|&x| x >= group.order()) {
                    return Err(Error::Parse(format!("perturbation tuple {tuple:?} is not a triple of elements")));
                }
                let v = c.value(tuple) + parse_rational(shift)?;
                c.set(tuple, v).map_err(|e| Error::Parse(e.to_string()))?;
                Ok(c)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiniteModelDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupDoc>,
    pub cocycle: CocycleDoc,
}

impl FiniteModelDoc {
    pub fn build(&self) -> Result<GroupCochain> {
        let group = match (&self.group, self.cocycle.implied_group()) {
            (Some(g), _) => g.build()?,
            (None, Some(g)) => g,
            (None, None) => return Err(Error::Parse("a group is required for this cocycle".into())),
        };
        self.cocycle.build(Arc::new(group))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum TriangulationDoc {
    /// The boundary of the 4-simplex.
    Sphere3,
    /// Kuhn triangulation of the `n^dim` grid; `n = 1` has one vertex.
    Torus {
        #[serde(default = "three")]
        dim: usize,
        #[serde(default = "one")]
        n: usize,
    },
    Lens {
        p: usize,
    },
    Genus2,
    /// Oriented top simplices; the global vertex order is the branching.
    Simplices {
        simplices: Vec<Vec<usize>>,
        #[serde(default)]
        orientations: Option<Vec<i64>>,
    },
}

fn three() -> usize {
    3
}

fn one() -> usize {
    1
}

impl TriangulationDoc {
    pub fn build(&self) -> Result<BranchedTriangulation> {
        match self {
            TriangulationDoc::Sphere3 => Ok(BranchedTriangulation::sphere3()),
            TriangulationDoc::Torus { dim, n } => BranchedTriangulation::lattice_torus(*dim, *n),
            TriangulationDoc::Lens { p } => BranchedTriangulation::lens(*p),
            TriangulationDoc::Genus2 => Ok(BranchedTriangulation::genus2()),
            TriangulationDoc::Simplices { simplices, orientations } => {
                let mut chain = Chain::new();
                for (i, s) in simplices.iter().enumerate() {
                    let o = orientations.as_ref().and_then(|o| o.get(i)).copied().unwrap_or(1);
                    chain.add_oriented(s, o)?;
                }
                BranchedTriangulation::from_chain(&chain)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_cyclic_cocycle() {
        let doc: FiniteModelDoc = serde_json::from_str(r#"{"cocycle": {"type": "cyclic_cocycle", "n": 3, "k": 1}}"#).unwrap();
        assert_eq!(doc.build().unwrap(), GroupCochain::cyclic(3, 1));
        let wrong: FiniteModelDoc =
            serde_json::from_str(r#"{"group": {"type": "klein"}, "cocycle": {"type": "cyclic_cocycle", "n": 4, "k": 1}}"#).unwrap();
        assert!(wrong.build().is_err());
    }

    #[test]
    fn tabulated_cocycle_on_a_table_group() {
        let text = r#"{"group": {"type": "table", "elements": ["e", "a"], "table": [[0, 1], [1, 0]]},
            "cocycle": {"type": "table", "values": ["0","0","0","0","0","0","0","1/2"]}}"#;
        let doc: FiniteModelDoc = serde_json::from_str(text).unwrap();
        let w = doc.build().unwrap();
        assert_eq!(w.values(), GroupCochain::cyclic(2, 1).values());
        assert!(w.is_cocycle());
    }

    #[test]
    fn perturbation_breaks_the_identity() {
        let text = r#"{"cocycle": {"type": "perturbed", "base": {"type": "cyclic_cocycle", "n": 3, "k": 1},
            "tuple": [1, 1, 1], "shift": "1/3"}}"#;
        let w = serde_json::from_str::<FiniteModelDoc>(text).unwrap().build().unwrap();
        assert!(!w.is_cocycle());
    }

    #[test]
    fn triangulations() {
        let t: TriangulationDoc = serde_json::from_str(r#"{"type": "torus"}"#).unwrap();
        assert_eq!(t.build().unwrap().count(3), 6);
        let s: TriangulationDoc = serde_json::from_str(
            r#"{"type": "simplices", "simplices": [[1,2,3,4],[0,2,3,4],[0,1,3,4],[0,1,2,4],[0,1,2,3]],
                "orientations": [1,-1,1,-1,1]}"#,
        )
        .unwrap();
        assert_eq!(s.build().unwrap(), BranchedTriangulation::sphere3());
        let bad: TriangulationDoc = serde_json::from_str(r#"{"type": "simplices", "simplices": [[0,1,2,3]]}"#).unwrap();
        assert!(bad.build().is_err());
        assert!(serde_json::from_str::<TriangulationDoc>(r#"{"type": "klein_bottle"}"#).is_err());
    }
}
