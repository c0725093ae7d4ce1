//! Simplicial Čech cocycle triples `(g, h, k)` over explicit covering families
//! of a discrete simplicial space `X₁, X₂, X₃, X₄`.
//!
//! The relations, in additive notation with `d_i^*` the pullback along faces:
//!
//! 1. `δg = 0` on `X₁`;
//! 2. `Σ (-1)^i d_i^* g = δh` on `X₂`;
//! 3. `Σ (-1)^i d_i^* h = δk` on `X₃`;
//! 4. `Σ (-1)^i d_i^* k = 0` on `X₄`.
//!
//! When every level is covered by one chart the Čech direction collapses, `g`
//! and `h` vanish and the relations reduce to the group cocycle identity for `k`.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Rational64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::group::{face_map, FiniteGroup, GroupCochain, MAX_REPORTED};
use crate::circle::CircleValue;
use crate::error::{Error, Result};
use crate::form::sort_with_sign;

/// One level `Xₙ`: finitely many points, the face maps to `Xₙ₋₁`, a cover and
/// the chart maps compatible with the faces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscreteLevel {
    pub points: usize,
    /// `faces[i][x]` is `d_i x`. Empty on `X₁`.
    pub faces: Vec<Vec<usize>>,
    pub charts: Vec<BTreeSet<usize>>,
    /// `chart_faces[i][α]` is a chart of `Xₙ₋₁` containing `d_i(U_α)`.
    pub chart_faces: Vec<Vec<usize>>,
}

/// A Čech cochain of functions: values on chart tuples at points. Missing
/// entries are zero; tuples are alternating.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CechFamily {
    values: BTreeMap<(Vec<usize>, usize), Rational64>,
}

impl CechFamily {
    pub fn new() -> Self {
        CechFamily::default()
    }

    /// Store the value on the sorted tuple (sign adjusted).
    pub fn set(&mut self, charts: &[usize], point: usize, value: Rational64) -> Result<()> {
        let (sorted, sign) = sort_with_sign(charts).ok_or_else(|| Error::Structure(format!("repeated chart in {charts:?}")))?;
        let v = if sign > 0 { value } else { -value };
        self.values.insert((sorted, point), v - v.floor());
        Ok(())
    }

    pub fn value(&self, charts: &[usize], point: usize) -> Rational64 {
        match sort_with_sign(charts) {
            None => Rational64::zero(),
            Some((sorted, sign)) => {
                let v = self.values.get(&(sorted, point)).copied().unwrap_or_else(Rational64::zero);
                if sign > 0 {
                    v
                } else {
                    -v
                }
            }
        }
    }

    pub fn add(&self, other: &CechFamily) -> CechFamily {
        let mut out = self.clone();
        for ((c, x), v) in &other.values {
            let e = out.values.entry((c.clone(), *x)).or_insert_with(Rational64::zero);
            *e += v;
            *e -= e.floor();
        }
        out
    }

    pub fn entries(&self) -> impl Iterator<Item = (&[usize], usize, Rational64)> {
        self.values.iter().map(|((c, x), v)| (c.as_slice(), *x, *v))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TripleViolation {
    pub charts: Vec<usize>,
    pub point: usize,
    pub defect: CircleValue,
}

#[derive(Clone, Debug, Serialize)]
pub struct TripleRung {
    pub rung: usize,
    pub checked: usize,
    pub failures: usize,
    pub violations: Vec<TripleViolation>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TripleReport {
    pub passed: bool,
    pub rungs: Vec<TripleRung>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialCocycleTriple {
    levels: Vec<DiscreteLevel>,
    pub g: CechFamily,
    pub h: CechFamily,
    pub k: CechFamily,
}

fn sorted_tuples(n: usize, len: usize) -> Vec<Vec<usize>> {
    crate::form::subsets(n, len)
}

impl SimplicialCocycleTriple {
    /// `levels` are `X₁ … X₄`. Checks that faces and chart maps are compatible.
    pub fn new(levels: Vec<DiscreteLevel>, g: CechFamily, h: CechFamily, k: CechFamily) -> Result<Self> {
        if levels.len() != 4 {
            return Err(Error::Structure(format!("need levels X1..X4, got {}", levels.len())));
        }
        for (idx, level) in levels.iter().enumerate() {
            let n = idx + 1;
            if level.charts.iter().flatten().any(|&x| x >= level.points) {
                return Err(Error::Structure(format!("chart of X{n} names a missing point")));
            }
            if idx == 0 {
                continue;
            }
            let prev = &levels[idx - 1];
            if level.faces.len() != n + 1 || level.chart_faces.len() != n + 1 {
                return Err(Error::Structure(format!("X{n} needs {} face maps", n + 1)));
            }
            for i in 0..=n {
                for (alpha, chart) in level.charts.iter().enumerate() {
                    let target =
                        *level.chart_faces[i].get(alpha).ok_or_else(|| Error::Structure(format!("X{n}: chart {alpha} has no image under d{i}")))?;
                    let image =
                        prev.charts.get(target).ok_or_else(|| Error::Structure(format!("X{n}: d{i} maps chart {alpha} to a missing chart")))?;
                    for &x in chart {
                        let y = *level.faces[i].get(x).ok_or_else(|| Error::Structure(format!("X{n}: d{i} undefined at point {x}")))?;
                        if !image.contains(&y) {
                            return Err(Error::Structure(format!("X{n}: d{i} sends point {x} of chart {alpha} outside chart {target}")));
                        }
                    }
                }
            }
        }
        Ok(SimplicialCocycleTriple { levels, g, h, k })
    }

    pub fn levels(&self) -> &[DiscreteLevel] {
        &self.levels
    }

    /// The nerve `Gⁿ`, each level covered by `copies` copies of the whole level.
    pub fn nerve_levels(group: &FiniteGroup, copies: usize) -> Vec<DiscreteLevel> {
        (1..=4)
            .map(|n| {
                let tuples: Vec<Vec<usize>> = group.tuples(n).collect();
                let index = |t: &[usize]| t.iter().fold(0, |acc, &x| acc * group.order() + x);
                let faces = if n == 1 {
                    Vec::new()
                } else {
                    (0..=n).map(|i| tuples.iter().map(|t| index(&face_map(group, i, t).expect("in range"))).collect()).collect()
                };
                let all: BTreeSet<usize> = (0..tuples.len()).collect();
                DiscreteLevel {
                    points: tuples.len(),
                    faces,
                    charts: vec![all; copies],
                    chart_faces: if n == 1 { Vec::new() } else { vec![(0..copies).collect(); n + 1] },
                }
            })
            .collect()
    }

    /// `(0, 0, ω)` on the nerve of the group of `ω`.
    pub fn from_group_cocycle(omega: &GroupCochain, copies: usize) -> Result<Self> {
        if omega.degree() != 3 {
            return Err(Error::Structure("triple needs a 3-cochain".into()));
        }
        let levels = SimplicialCocycleTriple::nerve_levels(omega.group(), copies);
        let mut k = CechFamily::new();
        for c in 0..copies {
            for (x, v) in omega.values().iter().enumerate() {
                if !v.is_zero() {
                    k.set(&[c], x, *v)?;
                }
            }
        }
        SimplicialCocycleTriple::new(levels, CechFamily::new(), CechFamily::new(), k)
    }

    fn pull_alternating(&self, level: usize, family: &CechFamily, charts: &[usize], x: usize) -> Rational64 {
        let lv = &self.levels[level];
        (0..lv.faces.len())
            .map(|i| {
                let mapped: Vec<usize> = charts.iter().map(|&c| lv.chart_faces[i][c]).collect();
                let v = family.value(&mapped, lv.faces[i][x]);
                if i % 2 == 0 {
                    v
                } else {
                    -v
                }
            })
            .sum()
    }

    fn cech_delta(family: &CechFamily, charts: &[usize], x: usize) -> Rational64 {
        (0..charts.len())
            .map(|j| {
                let mut c = charts.to_vec();
                c.remove(j);
                let v = family.value(&c, x);
                if j % 2 == 0 {
                    v
                } else {
                    -v
                }
            })
            .sum()
    }

    fn rung(&self, rung: usize, level: usize, len: usize, residual: impl Fn(&[usize], usize) -> Rational64) -> TripleRung {
        let lv = &self.levels[level];
        let mut checked = 0;
        let mut failures = 0;
        let mut violations = Vec::new();
        for charts in sorted_tuples(lv.charts.len(), len) {
            let mut common: BTreeSet<usize> = lv.charts[charts[0]].clone();
            for &c in &charts[1..] {
                common = common.intersection(&lv.charts[c]).copied().collect();
            }
            for x in common {
                checked += 1;
                let r = residual(&charts, x);
                if !(r - r.floor()).is_zero() {
                    failures += 1;
                    if violations.len() < MAX_REPORTED {
                        violations.push(TripleViolation { charts: charts.clone(), point: x, defect: CircleValue::from_rational(r) });
                    }
                }
            }
        }
        TripleRung { rung, checked, failures, violations }
    }

    /// Verify the four relations exactly.
    pub fn check(&self) -> TripleReport {
        let rungs = vec![
            self.rung(1, 0, 4, |c, x| Self::cech_delta(&self.g, c, x)),
            self.rung(2, 1, 3, |c, x| self.pull_alternating(1, &self.g, c, x) - Self::cech_delta(&self.h, c, x)),
            self.rung(3, 2, 2, |c, x| self.pull_alternating(2, &self.h, c, x) - Self::cech_delta(&self.k, c, x)),
            self.rung(4, 3, 1, |c, x| self.pull_alternating(3, &self.k, c, x)),
        ];
        TripleReport { passed: rungs.iter().all(|r| r.failures == 0), rungs }
    }

    /// The total coboundary of `a` (Čech 1-cochain on `X₁`) and `b`
    /// (Čech 0-cochain on `X₂`).
    pub fn total_coboundary(levels: Vec<DiscreteLevel>, a: &CechFamily, b: &CechFamily) -> Result<Self> {
        let shell = SimplicialCocycleTriple::new(levels, CechFamily::new(), CechFamily::new(), CechFamily::new())?;
        let mut g = CechFamily::new();
        let mut h = CechFamily::new();
        let mut k = CechFamily::new();
        let each = |level: usize, len: usize, f: &mut dyn FnMut(&[usize], usize) -> Result<()>| -> Result<()> {
            let lv = &shell.levels[level];
            for charts in sorted_tuples(lv.charts.len(), len) {
                let mut common: BTreeSet<usize> = lv.charts[charts[0]].clone();
                for &c in &charts[1..] {
                    common = common.intersection(&lv.charts[c]).copied().collect();
                }
                for x in common {
                    f(&charts, x)?;
                }
            }
            Ok(())
        };
        each(0, 3, &mut |c, x| g.set(c, x, Self::cech_delta(a, c, x)))?;
        each(1, 2, &mut |c, x| h.set(c, x, shell.pull_alternating(1, a, c, x) - Self::cech_delta(b, c, x)))?;
        each(2, 1, &mut |c, x| k.set(c, x, -shell.pull_alternating(2, b, c, x)))?;
        Ok(SimplicialCocycleTriple { levels: shell.levels, g, h, k })
    }

    pub fn add(&self, other: &SimplicialCocycleTriple) -> Result<Self> {
        if self.levels != other.levels {
            return Err(Error::Structure("triples live on different covering families".into()));
        }
        Ok(SimplicialCocycleTriple { levels: self.levels.clone(), g: self.g.add(&other.g), h: self.h.add(&other.h), k: self.k.add(&other.k) })
    }
}

/// Random Čech data `(a, b)` with values in `(1/den)ℤ` on the given levels.
pub fn random_cech_pair(levels: &[DiscreteLevel], den: i64, seed: u64) -> (CechFamily, CechFamily) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a = CechFamily::new();
    let mut b = CechFamily::new();
    for pair in sorted_tuples(levels[0].charts.len(), 2) {
        for x in 0..levels[0].points {
            a.set(&pair, x, Rational64::new(rng.gen_range(0..den), den)).expect("distinct charts");
        }
    }
    for c in 0..levels[1].charts.len() {
        for x in 0..levels[1].points {
            b.set(&[c], x, Rational64::new(rng.gen_range(0..den), den)).expect("single chart");
        }
    }
    (a, b)
}
