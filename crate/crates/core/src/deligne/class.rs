use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::DeligneCochain;
use crate::circle::wrap;
use crate::error::{Error, Result};
use crate::simplicial::{Chain, ChartId, OverlapSamples};

/// An integer Čech cochain on the nerve, keyed by increasing chart tuples.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntegerCochain {
    pub degree: usize,
    pub values: BTreeMap<Vec<ChartId>, i64>,
}

impl IntegerCochain {
    pub fn get(&self, tuple: &[ChartId]) -> i64 {
        self.values.get(tuple).copied().unwrap_or(0)
    }

    /// Pair with a chain on the nerve whose vertices are chart ids.
    pub fn pair(&self, cycle: &Chain) -> i64 {
        cycle.terms().map(|(s, c)| c * self.get(s.vertices())).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.values.values().all(|&v| v == 0)
    }
}

/// A continuous real lift of a circle-valued function over one overlap,
/// propagated along a minimum spanning tree of the sample points.
struct Lift {
    points: Vec<Vec<f64>>,
    values: Vec<f64>,
}

impl Lift {
    fn build(points: &[Vec<f64>], g: impl Fn(&[f64]) -> f64, shift: i64) -> Result<Lift> {
        let n = points.len();
        if n == 0 {
            return Err(Error::Evaluation("no sample points in overlap".into()));
        }
        // Prim's minimum spanning tree: every hop is as short as possible.
        let dist = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>();
        let mut parent = vec![usize::MAX; n];
        let mut best = vec![f64::INFINITY; n];
        let mut done = vec![false; n];
        let mut order = Vec::with_capacity(n);
        best[0] = 0.0;
        for _ in 0..n {
            let i = (0..n).filter(|&i| !done[i]).min_by(|&a, &b| best[a].total_cmp(&best[b])).expect("vertex left");
            done[i] = true;
            order.push(i);
            for j in 0..n {
                if !done[j] {
                    let d = dist(&points[i], &points[j]);
                    if d < best[j] {
                        best[j] = d;
                        parent[j] = i;
                    }
                }
            }
        }
        let raw: Vec<f64> = points.iter().map(|p| g(p)).collect();
        if raw.iter().any(|v| !v.is_finite()) {
            return Err(Error::Evaluation("transition function undefined at a sample point".into()));
        }
        let mut values = vec![0.0; n];
        values[0] = raw[0].rem_euclid(1.0) + shift as f64;
        for &i in &order[1..] {
            let p = parent[i];
            values[i] = values[p] + wrap(raw[i] - raw[p]);
        }
        Ok(Lift { points: points.to_vec(), values })
    }

    fn at(&self, x: &[f64], gx: f64, g: impl Fn(&[f64]) -> f64) -> f64 {
        let nearest = (0..self.points.len())
            .min_by(|&a, &b| {
                let da: f64 = self.points[a].iter().zip(x).map(|(p, q)| (p - q) * (p - q)).sum();
                let db: f64 = self.points[b].iter().zip(x).map(|(p, q)| (p - q) * (p - q)).sum();
                da.total_cmp(&db)
            })
            .expect("non-empty lift");
        self.values[nearest] + wrap(gx - g(&self.points[nearest]))
    }
}

/// The integer Čech `(p+1)`-cocycle `δ(log g)`: choose continuous real lifts
/// of `g` on each `(p+1)`-fold overlap, then take their alternating sum on each
/// `(p+2)`-fold overlap. The class integrates like the curvature.
///
/// `branch_seed` shifts each lift by a random integer; the result changes by a
/// coboundary only.
pub fn characteristic_class(xi: &DeligneCochain, samples: &OverlapSamples, branch_seed: Option<u64>) -> Result<IntegerCochain> {
    let p = xi.degree();
    let g = xi.g();
    let mut rng = ChaCha8Rng::seed_from_u64(branch_seed.unwrap_or(0));
    let mut lifts: BTreeMap<Vec<ChartId>, Lift> = BTreeMap::new();
    for t in samples.nerve(p + 1) {
        let form = g.value(t)?;
        let shift = if branch_seed.is_some() { rng.gen_range(-3..=3) } else { 0 };
        lifts.insert(t.clone(), Lift::build(samples.get(t), |x| form.evaluate(x, &[]), shift)?);
    }
    let mut values = BTreeMap::new();
    for t in samples.nerve(p + 2) {
        let x = &samples.get(t)[0];
        let mut total = 0.0;
        for k in 0..t.len() {
            let mut rest = t.clone();
            rest.remove(k);
            let form = g.value(&rest)?;
            let eval = |y: &[f64]| form.evaluate(y, &[]);
            let lift = lifts.get(&rest).ok_or_else(|| Error::MissingOverlap(rest.clone()))?;
            let v = lift.at(x, eval(x), eval);
            total += if k % 2 == 0 { v } else { -v };
        }
        let rounded = total.round();
        if (total - rounded).abs() > 0.1 {
            return Err(Error::Evaluation(format!("Čech condition fails on {t:?}: defect {total}")));
        }
        values.insert(t.clone(), -(rounded as i64));
    }
    Ok(IntegerCochain { degree: p + 1, values })
}
