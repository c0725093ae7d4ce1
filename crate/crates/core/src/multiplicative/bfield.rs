//! The integrality criterion for a B-field on `G × G`, for torus groups
//! `G = ℝᵈ/ℤᵈ` and surfaces `Σ = T²` mapped by integer linear maps.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::circle::wrap;
use crate::error::{Error, Result};
use crate::form::FormField;
use crate::holonomy::integrate_chain;
use crate::simplicial::meshes::TorusGrid;

/// A pair of maps `σ₁, σ₂ : T² → G`, each an integer `d × 2` matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct SurfacePair {
    pub first: Vec<Vec<i64>>,
    pub second: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BFieldEntry {
    pub value: f64,
    pub distance: f64,
    pub integral: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BFieldReport {
    pub identity_residual: f64,
    pub entries: Vec<BFieldEntry>,
}

impl BFieldReport {
    pub fn all_integral(&self) -> bool {
        self.entries.iter().all(|e| e.integral)
    }
}

/// The face maps `G × G → G`: `d₀(a,b) = b`, `d₁(a,b) = a + b`, `d₂(a,b) = a`.
fn face_matrix(d: usize, i: usize) -> Vec<Vec<f64>> {
    (0..d)
        .map(|r| {
            (0..2 * d)
                .map(|c| {
                    let first = c == r;
                    let second = c == d + r;
                    match i {
                        0 => second as u8 as f64,
                        1 => (first || second) as u8 as f64,
                        _ => first as u8 as f64,
                    }
                })
                .collect()
        })
        .collect()
}

/// Checks `d₀*H − d₁*H + d₂*H = dB` at random samples, then reports
/// `∫_{T²} (σ₁, σ₂)*B` for each pair with its distance to the nearest integer.
pub fn b_field_integrality_check(
    curv_h: &FormField,
    b: &FormField,
    pairs: &[SurfacePair],
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<BFieldReport> {
    let d = curv_h.dim();
    if curv_h.degree() != 3 || b.degree() != 2 || b.dim() != 2 * d {
        return Err(Error::Structure("need a 3-form on G and a 2-form on G × G".into()));
    }
    let pulled: Vec<FormField> = (0..3).map(|i| curv_h.pullback_affine(face_matrix(d, i), vec![0.0; d])).collect();
    let db = b.exterior_derivative();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = (0.0f64, Vec::new());
    for _ in 0..samples {
        let x: Vec<f64> = (0..2 * d).map(|_| rng.gen::<f64>()).collect();
        let lhs: Vec<f64> = {
            let (a, m, c) = (pulled[0].coefficients(&x), pulled[1].coefficients(&x), pulled[2].coefficients(&x));
            (0..a.len()).map(|k| a[k] - m[k] + c[k]).collect()
        };
        let r = lhs.iter().zip(db.coefficients(&x)).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max);
        if r > worst.0 {
            worst = (r, x);
        }
    }
    if worst.0 > tol {
        return Err(Error::Precondition(format!("alternating pullback of the curvature differs from dB by {:.3e} at {:?}", worst.0, worst.1)));
    }
    let grid = TorusGrid::new(2, 3)?;
    let mut entries = Vec::with_capacity(pairs.len());
    for pair in pairs {
        for m in [&pair.first, &pair.second] {
            if m.len() != d || m.iter().any(|r| r.len() != 2) {
                return Err(Error::Structure(format!("surface map must be a {d} x 2 integer matrix")));
            }
        }
        let matrix: Vec<Vec<f64>> = pair.first.iter().chain(&pair.second).map(|r| r.iter().map(|&v| v as f64).collect()).collect();
        let form = b.pullback_affine(matrix, vec![0.0; 2 * d]);
        let value = integrate_chain(&grid.complex, grid.complex.chain(), &form, 5);
        let distance = wrap(value).abs();
        entries.push(BFieldEntry { value, distance, integral: distance <= tol });
    }
    Ok(BFieldReport { identity_residual: worst.0, entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id2() -> Vec<Vec<i64>> {
        vec![vec![1, 0], vec![0, 1]]
    }

    /// `c · dx₁ ∧ dy₂` on `T² × T²`: pulled back along `(σ, τ)` it integrates
    /// to `c · (σ₁₁ τ₂₂ − σ₁₂ τ₂₁)`.
    fn mixed_b(c: f64) -> FormField {
        FormField::monomial(4, &[0, 3], c)
    }

    #[test]
    fn zero_b_on_flat_torus() {
        let h = FormField::zero(2, 3);
        let report = b_field_integrality_check(&h, &FormField::zero(4, 2), &[SurfacePair { first: id2(), second: id2() }], 20, 1, 1e-8).unwrap();
        assert_eq!(report.entries[0].value, 0.0);
        assert!(report.all_integral());
    }

    #[test]
    fn integer_and_half_integer_multiples() {
        let h = FormField::zero(2, 3);
        let pairs = vec![SurfacePair { first: id2(), second: id2() }, SurfacePair { first: vec![vec![2, 0], vec![0, 1]], second: id2() }];
        let whole = b_field_integrality_check(&h, &mixed_b(3.0), &pairs, 20, 1, 1e-6).unwrap();
        assert!((whole.entries[0].value - 3.0).abs() < 1e-9);
        assert!((whole.entries[1].value - 6.0).abs() < 1e-9);
        assert!(whole.all_integral());
        let half = b_field_integrality_check(&h, &mixed_b(0.5), &pairs, 20, 1, 1e-6).unwrap();
        assert!((half.entries[0].distance - 0.5).abs() < 1e-9);
        assert!(!half.all_integral());
    }

    #[test]
    fn non_closed_b_fails_the_identity() {
        let h = FormField::zero(2, 3);
        let b = FormField::new(4, 2, |x| {
            let mut c = vec![0.0; 6];
            c[0] = (2.0 * std::f64::consts::PI * x[2]).sin();
            c
        });
        let err = b_field_integrality_check(&h, &b, &[], 50, 2, 1e-6);
        assert!(matches!(err, Err(Error::Precondition(_))));
    }
}
