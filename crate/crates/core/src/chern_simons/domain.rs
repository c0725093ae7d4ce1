//! Coordinate boxes with tensor-product quadrature.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::quadrature::gauss_legendre;

/// One coordinate axis. Periodic axes use the trapezoid rule, the others
/// Gauss–Legendre.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub periodic: bool,
}

impl Axis {
    pub fn unit_circle() -> Axis {
        Axis { lo: 0.0, hi: 1.0, periodic: true }
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    fn rule(&self, n: usize) -> (Vec<f64>, Vec<f64>) {
        let len = self.length();
        if self.periodic {
            let h = len / n as f64;
            ((0..n).map(|k| self.lo + k as f64 * h).collect(), vec![h; n])
        } else {
            let (x, w) = gauss_legendre(n);
            (x.iter().map(|t| self.lo + t * len).collect(), w.iter().map(|w| w * len).collect())
        }
    }
}

/// A product of axes: a torus when every axis is periodic, or a coordinate
/// chart whose complement has measure zero (such as `(θ, φ)` on a sphere).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridDomain {
    axes: Vec<Axis>,
}

impl GridDomain {
    pub fn new(axes: Vec<Axis>) -> Self {
        GridDomain { axes }
    }

    /// The unit torus `[0,1)^dim`.
    pub fn torus(dim: usize) -> Self {
        GridDomain { axes: vec![Axis::unit_circle(); dim] }
    }

    /// Polar coordinates `(θ, φ)` on the 2-sphere.
    pub fn sphere() -> Self {
        use std::f64::consts::PI;
        GridDomain { axes: vec![Axis { lo: 0.0, hi: PI, periodic: false }, Axis { lo: 0.0, hi: 2.0 * PI, periodic: true }] }
    }

    /// `(θ₁, φ₁, θ₂, φ₂)` on `S² × S²`.
    pub fn sphere_pair() -> Self {
        let mut axes = GridDomain::sphere().axes;
        axes.extend(GridDomain::sphere().axes);
        GridDomain { axes }
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn is_torus(&self) -> bool {
        self.axes.iter().all(|a| a.periodic)
    }

    /// Drop one axis.
    pub fn without(&self, axis: usize) -> GridDomain {
        let mut axes = self.axes.clone();
        axes.remove(axis);
        GridDomain { axes }
    }

    /// Uniform random interior points.
    pub fn sample(&self, count: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| {
                self.axes
                    .iter()
                    .map(|a| {
                        // keep clear of coordinate singularities at the ends
                        let m = if a.periodic { 0.0 } else { 0.02 * a.length() };
                        rng.gen_range(a.lo + m..a.hi - m)
                    })
                    .collect()
            })
            .collect()
    }

    /// `∫ f dx` with `n` nodes per axis. Rows along the first axis are summed
    /// in parallel and combined pairwise, so the result does not depend on
    /// the thread count.
    pub fn integrate(&self, n: usize, f: impl Fn(&[f64]) -> f64 + Sync) -> f64 {
        let dim = self.dim();
        if dim == 0 {
            return f(&[]);
        }
        let rules: Vec<(Vec<f64>, Vec<f64>)> = self.axes.iter().map(|a| a.rule(n)).collect();
        let inner: usize = n.pow(dim as u32 - 1);
        let rows: Vec<f64> = (0..n)
            .into_par_iter()
            .map(|i0| {
                let mut x = vec![0.0; dim];
                x[0] = rules[0].0[i0];
                let mut row = 0.0;
                for flat in 0..inner {
                    let mut rest = flat;
                    let mut w = rules[0].1[i0];
                    for ax in (1..dim).rev() {
                        let k = rest % n;
                        rest /= n;
                        x[ax] = rules[ax].0[k];
                        w *= rules[ax].1[k];
                    }
                    row += w * f(&x);
                }
                row
            })
            .collect();
        pairwise_sum(&rows)
    }
}

pub fn pairwise_sum(v: &[f64]) -> f64 {
    match v.len() {
        0 => 0.0,
        1 => v[0],
        n => pairwise_sum(&v[..n / 2]) + pairwise_sum(&v[n / 2..]),
    }
}
