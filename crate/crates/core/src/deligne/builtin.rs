//! Named Deligne cocycles and random cochain generators.

use std::f64::consts::PI;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{CechCochain, DeligneCochain, Fill};
use crate::form::{binomial, subset_index, subsets, FormField};
use crate::simplicial::ChartId;

/// `(x dy - y dx) / (2π (x² + y²))`, i.e. `d(φ / 2π)` on `ℝ³` minus the z-axis.
type ScalarFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

fn dphi() -> [ScalarFn; 3] {
    [
        Arc::new(|x: &[f64]| -x[1] / (2.0 * PI * (x[0] * x[0] + x[1] * x[1]))),
        Arc::new(|x: &[f64]| x[0] / (2.0 * PI * (x[0] * x[0] + x[1] * x[1]))),
        Arc::new(|_: &[f64]| 0.0),
    ]
}

/// The angle `scale · φ / 2π` with its exact differential.
pub fn azimuth(scale: f64) -> FormField {
    let d = dphi();
    FormField::angle(3, move |x| scale * x[1].atan2(x[0]) / (2.0 * PI)).with_derivative(move |x| d.iter().map(|f| scale * f(x)).collect())
}

/// Monopole potential `(n/4π)(x dy - y dx)/(r(r + s z))` with `s = +1` on the
/// northern chart and `s = -1` (and overall sign flipped) on the southern one.
pub fn monopole_potential(n: i64, north: bool) -> FormField {
    let s = if north { 1.0 } else { -1.0 };
    let c = s * n as f64 / (4.0 * PI);
    let f = move |x: &[f64]| {
        let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        c / (r * (r + s * x[2]))
    };
    let grad = move |x: &[f64]| {
        let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        let h = r * (r + s * x[2]);
        let hx = [2.0 * x[0] + s * x[2] * x[0] / r, 2.0 * x[1] + s * x[2] * x[1] / r, 2.0 * x[2] + s * r + s * x[2] * x[2] / r];
        let h2 = h * h;
        [-c * hx[0] / h2, -c * hx[1] / h2, -c * hx[2] / h2]
    };
    FormField::new(3, 1, move |x| {
        let v = f(x);
        vec![-v * x[1], v * x[0], 0.0]
    })
    .with_derivative(move |x| {
        // A = f·(-y, x, 0): dA = (2f + x f_x + y f_y) dx∧dy + y f_z dx∧dz - x f_z dy∧dz.
        let v = f(x);
        let g = grad(x);
        vec![2.0 * v + x[0] * g[0] + x[1] * g[1], x[1] * g[2], -x[0] * g[2]]
    })
}

/// Charge-`n` monopole on the two-chart cover `N = 0, S = 1` of `S²`:
/// `g_NS = -nφ/2π`, `A_S - A_N = d g_NS`.
pub fn monopole_two_chart(n: i64) -> DeligneCochain {
    let g = CechCochain::from_fn(1, 0, 3, Fill::Strict, move |t| (t == [0, 1]).then(|| azimuth(-(n as f64))));
    let a = CechCochain::from_fn(0, 1, 3, Fill::Strict, move |t| match t {
        [0] => Some(monopole_potential(n, true)),
        [1] => Some(monopole_potential(n, false)),
        _ => None,
    });
    DeligneCochain::new(2, vec![g, a]).expect("monopole shapes")
}

/// Charge-`n` monopole on the tetrahedral four-cap cover: cap 0 carries the
/// northern potential, caps 1..3 the southern one.
pub fn monopole_tetrahedral(n: i64) -> DeligneCochain {
    let g = CechCochain::from_fn(1, 0, 3, Fill::Strict, move |t| match t {
        [0, _] => Some(azimuth(-(n as f64))),
        [_, _] => Some(FormField::zero(3, 0).as_circle_valued()),
        _ => None,
    });
    let a = CechCochain::from_fn(0, 1, 3, Fill::Strict, move |t| match t {
        [0] => Some(monopole_potential(n, true)),
        [_] => Some(monopole_potential(n, false)),
        _ => None,
    });
    DeligneCochain::new(4, vec![g, a]).expect("monopole shapes")
}

/// `[1, 0, b dx∧dy]` on the unit 2-torus with its 9-chart cover.
pub fn flat_gerbe(b: f64) -> DeligneCochain {
    DeligneCochain::from_global_form(FormField::monomial(2, &[0, 1], b), 9)
}

/// `[1, 0, 0, c dx∧dy∧dz]` on the unit 3-torus with its 27-chart cover.
pub fn flat_3form(c: f64) -> DeligneCochain {
    DeligneCochain::from_global_form(FormField::monomial(3, &[0, 1, 2], c), 27)
}

/// Smooth random form `Σ a sin(2π k·x + φ)` per coefficient, `k ∈ {-1,0,1}ᵈ`,
/// with its exact differential. Degree 0 forms are circle-valued.
pub fn random_trig_form(dim: usize, degree: usize, amplitude: f64, seed: u64) -> FormField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = binomial(dim, degree);
    // (coefficient index, amplitude, wave vector, phase)
    let terms: Vec<(usize, f64, Vec<f64>, f64)> = (0..n)
        .flat_map(|i| (0..2).map(move |_| i))
        .map(|i| {
            let a = rng.gen_range(-amplitude..amplitude);
            let k: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1i32..=1) as f64).collect();
            (i, a, k, rng.gen_range(0.0..2.0 * PI))
        })
        .collect();
    // For each term, its contributions `(index of dx_J, sign, axis)` to `dω`,
    // one per axis outside the term's index set `I`, `J = I ∪ {axis}`.
    let basis = subsets(dim, degree);
    let spread: Vec<Vec<(usize, f64, usize)>> = terms
        .iter()
        .map(|(i, ..)| {
            let set = &basis[*i];
            (0..dim)
                .filter(|a| !set.contains(a))
                .map(|axis| {
                    let pos = set.iter().filter(|&&b| b < axis).count();
                    let mut joined = set.clone();
                    joined.insert(pos, axis);
                    (subset_index(dim, &joined), if pos % 2 == 0 { 1.0 } else { -1.0 }, axis)
                })
                .collect()
        })
        .collect();
    let terms = Arc::new(terms);
    let t1 = terms.clone();
    let n_out = binomial(dim, degree + 1);
    let form = FormField::new(dim, degree, move |x| {
        let mut c = vec![0.0; n];
        for (i, a, k, ph) in t1.iter() {
            let arg: f64 = 2.0 * PI * k.iter().zip(x).map(|(p, q)| p * q).sum::<f64>() + ph;
            c[*i] += a * arg.sin();
        }
        c
    })
    .with_derivative(move |x| {
        let mut out = vec![0.0; n_out];
        for ((_, a, k, ph), contributions) in terms.iter().zip(&spread) {
            let arg: f64 = 2.0 * PI * k.iter().zip(x).map(|(p, q)| p * q).sum::<f64>() + ph;
            let slope = a * 2.0 * PI * arg.cos();
            for &(j, sign, axis) in contributions {
                out[j] += sign * slope * k[axis];
            }
        }
        out
    });
    if degree == 0 {
        form.as_circle_valued()
    } else {
        form
    }
}

fn tuple_seed(seed: u64, r: usize, t: &[ChartId]) -> u64 {
    t.iter().fold(seed ^ (0x9e37_79b9_7f4a_7c15u64.wrapping_mul(r as u64 + 1)), |h, &i| (h ^ i as u64).wrapping_mul(0x100_0000_01b3).rotate_left(17))
}

/// Random data shaped like a degree-`degree` cochain: every overlap gets its
/// own smooth trigonometric form. Feeding it to [`super::coboundary`] gives a
/// random exact cocycle one degree up.
pub fn random_cochain(degree: usize, charts: usize, dim: usize, amplitude: f64, seed: u64) -> DeligneCochain {
    let components = (0..=degree)
        .map(|r| CechCochain::from_fn(degree - r, r, dim, Fill::Zero, move |t| Some(random_trig_form(dim, r, amplitude, tuple_seed(seed, r, t)))))
        .collect();
    DeligneCochain::new(charts, components).expect("random cochain shapes")
}

/// The nerve of the tetrahedral cover as an oriented 2-cycle whose
/// orientation agrees with the outward orientation of the sphere.
pub fn tetrahedral_nerve_cycle() -> crate::simplicial::Chain {
    let t = crate::simplicial::meshes::tetrahedron_directions();
    let mut m: Vec<Vec<f64>> = (1..4).map(|i| (0..3).map(|k| t[i][k] - t[0][k]).collect()).collect();
    let sign = crate::form::determinant(&mut m).signum() as i64;
    let mut solid = crate::simplicial::Chain::new();
    solid.add_oriented(&[0, 1, 2, 3], sign).expect("distinct charts");
    solid.boundary()
}
