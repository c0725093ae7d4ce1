//! Small dense matrices and matrix-valued differential forms.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use nalgebra::SMatrix;
use num_complex::Complex64;

use crate::form::{binomial, sort_with_sign, subset_index, subsets, FormField};

pub type Mat<const N: usize> = SMatrix<Complex64, N, N>;

/// Coefficient evaluator of a matrix-valued form, one matrix per basis element.
pub type MatFn<const N: usize> = Arc<dyn Fn(&[f64]) -> Vec<Mat<N>> + Send + Sync>;

const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn pauli() -> [Mat<2>; 3] {
    let (o, one) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
    [Mat::<2>::new(o, one, one, o), Mat::<2>::new(o, -I, I, o), Mat::<2>::new(one, o, o, -one)]
}

/// `i(c₁σ₁ + c₂σ₂ + c₃σ₃)`, an element of `su(2)`.
pub fn su2(c: [f64; 3]) -> Mat<2> {
    let s = pauli();
    (s[0] * Complex64::from(c[0]) + s[1] * Complex64::from(c[1]) + s[2] * Complex64::from(c[2])) * I
}

/// `exp` of an `su(2)` element, in closed form.
pub fn su2_exp(c: [f64; 3]) -> Mat<2> {
    let r = (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt();
    let (cos, sinc) = if r < 1e-300 { (1.0, 1.0) } else { (r.cos(), r.sin() / r) };
    Mat::<2>::identity() * Complex64::from(cos) + su2(c) * Complex64::from(sinc)
}

/// Coordinates `(a₀, a₁, a₂, a₃)` with `g = a₀ + i(a·σ)`; a unit vector for `g ∈ SU(2)`.
pub fn su2_coordinates(g: &Mat<2>) -> [f64; 4] {
    let s = pauli();
    let t = |m: Mat<2>| m.trace() * 0.5;
    [t(*g).re, t(g * s[0]).im, t(g * s[1]).im, t(g * s[2]).im]
}

pub fn max_abs<const N: usize>(m: &Mat<N>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn anti_hermitian_defect<const N: usize>(m: &Mat<N>) -> f64 {
    max_abs(&(m + m.adjoint()))
}

pub fn unitary_defect<const N: usize>(m: &Mat<N>) -> f64 {
    max_abs(&(m.adjoint() * m - Mat::<N>::identity()))
}

/// Rows `(left index, right index, output index, sign)` for `dx_J ∧ dx_K = ±dx_{J∪K}`.
pub type WedgeTable = Arc<[(usize, usize, usize, f64)]>;

/// The wedge table for degrees `p`, `q` in dimension `dim`, built once and shared.
pub fn wedge_table(dim: usize, p: usize, q: usize) -> WedgeTable {
    type Tables = RwLock<HashMap<(usize, usize, usize), WedgeTable>>;
    static TABLES: OnceLock<Tables> = OnceLock::new();
    let tables = TABLES.get_or_init(Default::default);
    if let Some(t) = tables.read().expect("wedge table cache").get(&(dim, p, q)) {
        return t.clone();
    }
    let t: WedgeTable = build_wedge_table(dim, p, q).into();
    tables.write().expect("wedge table cache").entry((dim, p, q)).or_insert(t).clone()
}

fn build_wedge_table(dim: usize, p: usize, q: usize) -> Vec<(usize, usize, usize, f64)> {
    let left = subsets(dim, p);
    let right = subsets(dim, q);
    let mut table = Vec::new();
    for (i, a) in left.iter().enumerate() {
        for (j, b) in right.iter().enumerate() {
            let mut joined = a.clone();
            joined.extend_from_slice(b);
            if let Some((sorted, sign)) = sort_with_sign(&joined) {
                table.push((i, j, subset_index(dim, &sorted), sign as f64));
            }
        }
    }
    table
}

/// Wedge of coefficient vectors using a precomputed table.
pub fn wedge_coefficients<const N: usize>(table: &[(usize, usize, usize, f64)], len: usize, u: &[Mat<N>], v: &[Mat<N>]) -> Vec<Mat<N>> {
    let mut out = vec![Mat::<N>::zeros(); len];
    for &(i, j, k, s) in table {
        out[k] += u[i] * v[j] * Complex64::from(s);
    }
    out
}

/// `Re tr(α ∧ β)` on coefficient vectors.
pub fn trace_wedge_coefficients<const N: usize>(table: &[(usize, usize, usize, f64)], len: usize, u: &[Mat<N>], v: &[Mat<N>]) -> Vec<f64> {
    let mut out = vec![0.0; len];
    for &(i, j, k, s) in table {
        out[k] += s * (u[i] * v[j]).trace().re;
    }
    out
}

/// A `u(N)`-valued differential form on a coordinate domain.
#[derive(Clone)]
pub struct MatrixForm<const N: usize> {
    dim: usize,
    degree: usize,
    eval: MatFn<N>,
}

impl<const N: usize> fmt::Debug for MatrixForm<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MatrixForm").field("rank", &N).field("dim", &self.dim).field("degree", &self.degree).finish()
    }
}

impl<const N: usize> MatrixForm<N> {
    pub fn new(dim: usize, degree: usize, eval: impl Fn(&[f64]) -> Vec<Mat<N>> + Send + Sync + 'static) -> Self {
        MatrixForm { dim, degree, eval: Arc::new(eval) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coefficients(&self, x: &[f64]) -> Vec<Mat<N>> {
        (self.eval)(x)
    }

    pub fn wedge(&self, other: &MatrixForm<N>) -> MatrixForm<N> {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let (p, q) = (self.degree, other.degree);
        let table = wedge_table(self.dim, p, q);
        let len = binomial(self.dim, p + q);
        let (f, g) = (self.eval.clone(), other.eval.clone());
        MatrixForm::new(self.dim, p + q, move |x| wedge_coefficients(&table, len, &f(x), &g(x)))
    }

    /// `Re tr(ω)` as a real form.
    pub fn trace(&self) -> FormField {
        let f = self.eval.clone();
        FormField::new(self.dim, self.degree, move |x| f(x).iter().map(|m| m.trace().re).collect())
    }

    /// Largest entry of `ω + ω†` over the sample points.
    pub fn anti_hermitian_defect(&self, points: &[Vec<f64>]) -> f64 {
        points.iter().flat_map(|x| self.coefficients(x)).map(|m| anti_hermitian_defect(&m)).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_algebra() {
        let s = pauli();
        let one = Mat::<2>::identity();
        for a in &s {
            assert!(max_abs(&(a * a - one)) < 1e-15);
        }
        // σ₁σ₂ = iσ₃
        assert!(max_abs(&(s[0] * s[1] - s[2] * I)) < 1e-15);
        assert!(anti_hermitian_defect(&su2([0.3, -1.0, 2.0])) < 1e-15);
    }

    #[test]
    fn exponential_is_unitary_and_has_coordinates() {
        let g = su2_exp([0.4, 1.1, -0.7]);
        assert!(unitary_defect(&g) < 1e-14);
        let a = su2_coordinates(&g);
        let norm: f64 = a.iter().map(|v| v * v).sum();
        assert!((norm - 1.0).abs() < 1e-14);
        let r = (0.4f64 * 0.4 + 1.1 * 1.1 + 0.7 * 0.7).sqrt();
        assert!((a[0] - r.cos()).abs() < 1e-14);
        assert!((a[1] - 0.4 * r.sin() / r).abs() < 1e-14);
    }

    #[test]
    fn wedge_of_one_forms_is_the_commutator() {
        let (x, y) = (su2([1.0, 0.0, 0.0]), su2([0.0, 1.0, 0.0]));
        let a = MatrixForm::<2>::new(2, 1, move |_| vec![x, y]);
        let aa = a.wedge(&a).coefficients(&[0.0, 0.0]);
        assert_eq!(aa.len(), 1);
        assert!(max_abs(&(aa[0] - (x * y - y * x))) < 1e-15);
        // tr(A ∧ A) = 0 for any matrix 1-form.
        assert!(a.wedge(&a).trace().coefficients(&[0.0, 0.0])[0].abs() < 1e-15);
    }
}
