//! Quadrature on intervals and simplices.
//!
//! Simplex rules are conical products of Gauss–Legendre rules pulled back
//! through the collapsed (Duffy) map of the unit cube onto the simplex. All
//! weights are positive and a rule with `m` points per axis integrates
//! polynomials of total degree `2m - d` exactly on a `d`-simplex.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Gauss–Legendre nodes and weights on `[0, 1]`.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(m >= 1);
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    for i in 0..m {
        // Chebyshev initial guess, then Newton on P_m.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre(m, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(m, x);
        if d.is_finite() {
            dp = d;
        }
        nodes[i] = 0.5 * (1.0 - x);
        weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

fn legendre(m: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if m == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=m {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = m as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// A quadrature rule on the reference `d`-simplex `{x_a ≥ 0, Σ x_a ≤ 1}`.
/// Points are stored as the `d` affine coordinates; weights sum to `1/d!`.
#[derive(Clone, Debug)]
pub struct SimplexRule {
    pub dim: usize,
    pub points: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
}

impl SimplexRule {
    pub fn collapsed(dim: usize, m: usize) -> SimplexRule {
        if dim == 0 {
            return SimplexRule { dim, points: vec![vec![]], weights: vec![1.0] };
        }
        let (gx, gw) = gauss_legendre(m);
        let total = m.pow(dim as u32);
        let mut points = Vec::with_capacity(total);
        let mut weights = Vec::with_capacity(total);
        let mut idx = vec![0usize; dim];
        for _ in 0..total {
            let mut x = vec![0.0; dim];
            let mut rest = 1.0;
            let mut w = 1.0;
            for a in 0..dim {
                let u = gx[idx[a]];
                x[a] = rest * u;
                // Duffy Jacobian: prod_a (1-u_a)^(d-1-a)
                w *= gw[idx[a]] * (1.0 - u).powi((dim - 1 - a) as i32);
                rest *= 1.0 - u;
            }
            points.push(x);
            weights.push(w);
            for a in (0..dim).rev() {
                idx[a] += 1;
                if idx[a] < m {
                    break;
                }
                idx[a] = 0;
            }
        }
        SimplexRule { dim, points, weights }
    }

    /// Shared, cached rule.
    pub fn cached(dim: usize, m: usize) -> Arc<SimplexRule> {
        type Cache = Mutex<HashMap<(usize, usize), Arc<SimplexRule>>>;
        static CACHE: OnceLock<Cache> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("quadrature cache poisoned");
        guard.entry((dim, m)).or_insert_with(|| Arc::new(SimplexRule::collapsed(dim, m))).clone()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Periodic trapezoid nodes `k/n` on `[0,1)` with equal weights.
pub fn periodic_trapezoid(n: usize) -> (Vec<f64>, f64) {
    ((0..n).map(|k| k as f64 / n as f64).collect(), 1.0 / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial(n: usize) -> f64 {
        (1..=n).map(|k| k as f64).product()
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(5);
        for p in 0..10 {
            let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(p)).sum();
            assert!((s - 1.0 / (p as f64 + 1.0)).abs() < 1e-14, "degree {p}");
        }
    }

    // Monomial integrals on the reference simplex: ∫ x^a = a! / (d + |a|)!  (Dirichlet).
    #[test]
    fn simplex_rule_monomials() {
        for dim in 1..=4 {
            let rule = SimplexRule::collapsed(dim, 5);
            let wsum: f64 = rule.weights.iter().sum();
            assert!((wsum - 1.0 / factorial(dim)).abs() < 1e-14);
            let exps: Vec<Vec<u32>> = match dim {
                1 => vec![vec![3], vec![6]],
                2 => vec![vec![2, 1], vec![3, 3]],
                3 => vec![vec![1, 1, 1], vec![2, 0, 3]],
                _ => vec![vec![1, 1, 1, 1], vec![2, 1, 0, 2]],
            };
            for e in exps {
                let total: u32 = e.iter().sum();
                if total as usize > 10 - dim {
                    continue;
                }
                let approx: f64 =
                    rule.points.iter().zip(&rule.weights).map(|(p, w)| w * p.iter().zip(&e).map(|(x, k)| x.powi(*k as i32)).product::<f64>()).sum();
                let exact = e.iter().map(|k| factorial(*k as usize)).product::<f64>() / factorial(dim + total as usize);
                assert!((approx - exact).abs() < 1e-14, "dim {dim} exps {e:?}");
            }
        }
    }
}
