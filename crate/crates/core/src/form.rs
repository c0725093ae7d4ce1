//! Differential forms on coordinate domains, stored as coefficient fields.
//!
//! An `r`-form on an `n`-dimensional coordinate space is a function returning
//! its `C(n, r)` coefficients `ω_I`, indexed by increasing `r`-subsets `I` in
//! lexicographic order. Forms are real: an imaginary-valued form of the
//! geometric picture is stored divided by `2πi`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use crate::circle::wrap;

pub type CoeffFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;
pub type MapFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;
/// Jacobian rows of a [`MapFn`].
pub type JacobianFn = Arc<dyn Fn(&[f64]) -> Vec<Vec<f64>> + Send + Sync>;

/// Step for central differences. The fourth-order stencil makes the
/// truncation error `O(h⁴)`.
pub const FD_STEP: f64 = 1e-3;

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r = 1usize;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Increasing `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(binomial(n, k));
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// [`subsets`], built once per `(n, k)` and shared.
pub fn shared_subsets(n: usize, k: usize) -> Arc<[Vec<usize>]> {
    type Cache = RwLock<HashMap<(usize, usize), Arc<[Vec<usize>]>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(s) = cache.read().expect("subset cache").get(&(n, k)) {
        return s.clone();
    }
    let s: Arc<[Vec<usize>]> = subsets(n, k).into();
    cache.write().expect("subset cache").entry((n, k)).or_insert(s).clone()
}

/// Position of an increasing subset in the lexicographic order of [`subsets`].
pub fn subset_index(n: usize, set: &[usize]) -> usize {
    let k = set.len();
    let mut idx = 0;
    let mut prev = 0usize;
    for (pos, &s) in set.iter().enumerate() {
        for skipped in prev..s {
            idx += binomial(n - skipped - 1, k - pos - 1);
        }
        prev = s + 1;
    }
    idx
}

/// Sort a list of distinct indices, returning the permutation sign, or `None`
/// when an index repeats.
pub fn sort_with_sign(v: &[usize]) -> Option<(Vec<usize>, i64)> {
    let mut w = v.to_vec();
    let mut sign = 1i64;
    for i in 1..w.len() {
        let mut j = i;
        while j > 0 && w[j - 1] > w[j] {
            w.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if w.windows(2).any(|p| p[0] == p[1]) {
        return None;
    }
    Some((w, sign))
}

pub fn determinant<R: AsRef<[f64]> + AsMut<[f64]>>(m: &mut [R]) -> f64 {
    let n = m.len();
    let mut det = 1.0;
    for c in 0..n {
        let mut piv = c;
        for r in c + 1..n {
            if m[r].as_ref()[c].abs() > m[piv].as_ref()[c].abs() {
                piv = r;
            }
        }
        if m[piv].as_ref()[c] == 0.0 {
            return 0.0;
        }
        if piv != c {
            m.swap(piv, c);
            det = -det;
        }
        let (top, below) = m.split_at_mut(c + 1);
        let pivot = &top[c].as_ref()[c..n];
        det *= pivot[0];
        for row in below.iter_mut() {
            let row = row.as_mut();
            let f = row[c] / pivot[0];
            if f != 0.0 {
                for (x, p) in row[c..n].iter_mut().zip(pivot) {
                    *x -= f * p;
                }
            }
        }
    }
    det
}

/// `det[t_a[i_b]]` for tangents `t_a` and the coordinate subset `i_b`.
fn minor(tangents: &[Vec<f64>], set: &[usize]) -> f64 {
    const SMALL: usize = 4;
    match set.len() {
        1 => tangents[0][set[0]],
        2 => tangents[0][set[0]] * tangents[1][set[1]] - tangents[0][set[1]] * tangents[1][set[0]],
        n if n <= SMALL => {
            let mut m = [[0.0; SMALL]; SMALL];
            for (row, t) in m.iter_mut().zip(tangents) {
                for (x, &i) in row.iter_mut().zip(set) {
                    *x = t[i];
                }
            }
            determinant(&mut m[..n])
        }
        _ => determinant(&mut tangents.iter().map(|t| set.iter().map(|&i| t[i]).collect::<Vec<f64>>()).collect::<Vec<_>>()),
    }
}

/// Fourth-order central difference of a vector-valued function along `axis`.
pub fn central_difference(f: &dyn Fn(&[f64]) -> Vec<f64>, x: &[f64], axis: usize, wrapped: bool) -> Vec<f64> {
    let h = FD_STEP;
    let mut p = x.to_vec();
    let mut at = |s: f64| {
        p[axis] = x[axis] + s;
        f(&p)
    };
    let fp1 = at(h);
    let fm1 = at(-h);
    let fp2 = at(2.0 * h);
    let fm2 = at(-2.0 * h);
    let base = if wrapped { Some(f(x)) } else { None };
    (0..fp1.len())
        .map(|i| {
            let (a, b, c, d) = match &base {
                Some(f0) => (wrap(fp2[i] - f0[i]), wrap(fp1[i] - f0[i]), wrap(fm1[i] - f0[i]), wrap(fm2[i] - f0[i])),
                None => (fp2[i], fp1[i], fm1[i], fm2[i]),
            };
            (-a + 8.0 * b - 8.0 * c + d) / (12.0 * h)
        })
        .collect()
}

/// A smooth real `r`-form on an open subset of `ℝⁿ`.
#[derive(Clone)]
pub struct FormField {
    dim: usize,
    degree: usize,
    circle_valued: bool,
    coeff: CoeffFn,
    deriv: Option<CoeffFn>,
}

impl fmt::Debug for FormField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FormField")
            .field("dim", &self.dim)
            .field("degree", &self.degree)
            .field("circle_valued", &self.circle_valued)
            .field("analytic_derivative", &self.deriv.is_some())
            .finish()
    }
}

impl FormField {
    pub fn new(dim: usize, degree: usize, coeff: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static) -> Self {
        FormField { dim, degree, circle_valued: false, coeff: Arc::new(coeff), deriv: None }
    }

    /// Attach an analytic exterior derivative (coefficients of `dω`).
    pub fn with_derivative(mut self, d: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static) -> Self {
        self.deriv = Some(Arc::new(d));
        self
    }

    pub fn zero(dim: usize, degree: usize) -> Self {
        let n = binomial(dim, degree);
        let nd = binomial(dim, degree + 1);
        FormField::new(dim, degree, move |_| vec![0.0; n]).with_derivative(move |_| vec![0.0; nd])
    }

    pub fn constant(dim: usize, degree: usize, coeffs: Vec<f64>) -> Self {
        assert_eq!(coeffs.len(), binomial(dim, degree));
        let nd = binomial(dim, degree + 1);
        FormField::new(dim, degree, move |_| coeffs.clone()).with_derivative(move |_| vec![0.0; nd])
    }

    pub fn scalar(dim: usize, f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        FormField::new(dim, 0, move |x| vec![f(x)])
    }

    /// A `ℝ/ℤ`-valued function given by a local real lift; differences are
    /// taken modulo integers.
    pub fn angle(dim: usize, f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        let mut form = FormField::scalar(dim, f);
        form.circle_valued = true;
        form
    }

    pub fn as_circle_valued(mut self) -> Self {
        assert_eq!(self.degree, 0);
        self.circle_valued = true;
        self
    }

    /// Constant coefficient `c` on the single basis element `dx_I`.
    pub fn monomial(dim: usize, indices: &[usize], c: f64) -> Self {
        let (sorted, sign) = sort_with_sign(indices).expect("repeated index in monomial");
        let mut coeffs = vec![0.0; binomial(dim, sorted.len())];
        coeffs[subset_index(dim, &sorted)] = c * sign as f64;
        FormField::constant(dim, sorted.len(), coeffs)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_circle_valued(&self) -> bool {
        self.circle_valued
    }

    pub fn has_analytic_derivative(&self) -> bool {
        self.deriv.is_some()
    }

    pub fn coefficients(&self, x: &[f64]) -> Vec<f64> {
        (self.coeff)(x)
    }

    /// `ω_x(t_1, …, t_r)`.
    pub fn evaluate(&self, x: &[f64], tangents: &[Vec<f64>]) -> f64 {
        assert_eq!(tangents.len(), self.degree, "wrong number of tangent vectors");
        let c = (self.coeff)(x);
        if self.degree == 0 {
            return c[0];
        }
        let mut total = 0.0;
        for (k, set) in shared_subsets(self.dim, self.degree).iter().enumerate() {
            if c[k] == 0.0 {
                continue;
            }
            total += c[k] * minor(tangents, set);
        }
        total
    }

    /// `dω`. Uses the analytic derivative when present, otherwise fourth-order
    /// central differences. The result knows `d(dω) = 0`.
    pub fn exterior_derivative(&self) -> FormField {
        let dim = self.dim;
        let degree = self.degree;
        let n_out = binomial(dim, degree + 1);
        let nn = binomial(dim, degree + 2);
        let coeff: CoeffFn = match &self.deriv {
            Some(d) => d.clone(),
            None => {
                let f = self.coeff.clone();
                let wrapped = self.circle_valued;
                let targets = subsets(dim, degree + 1);
                Arc::new(move |x: &[f64]| {
                    let partials: Vec<Vec<f64>> = (0..dim).map(|axis| central_difference(&*f, x, axis, wrapped)).collect();
                    targets
                        .iter()
                        .map(|j| {
                            let mut s = 0.0;
                            for (k, &axis) in j.iter().enumerate() {
                                let mut rest = j.clone();
                                rest.remove(k);
                                let idx = subset_index(dim, &rest);
                                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                                s += sign * partials[axis][idx];
                            }
                            s
                        })
                        .collect()
                })
            }
        };
        FormField {
            dim,
            degree: degree + 1,
            circle_valued: false,
            coeff: Arc::new(move |x| if n_out == 0 { Vec::new() } else { coeff(x) }),
            deriv: Some(Arc::new(move |_| vec![0.0; nn])),
        }
    }

    fn combine(&self, other: &FormField, a: f64, b: f64) -> FormField {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        assert_eq!(self.degree, other.degree, "degree mismatch");
        let (f, g) = (self.coeff.clone(), other.coeff.clone());
        let coeff: CoeffFn = Arc::new(move |x| {
            let (u, v) = (f(x), g(x));
            u.iter().zip(&v).map(|(p, q)| a * p + b * q).collect()
        });
        let deriv = match (&self.deriv, &other.deriv) {
            (Some(df), Some(dg)) => {
                let (df, dg) = (df.clone(), dg.clone());
                let d: CoeffFn = Arc::new(move |x| {
                    let (u, v) = (df(x), dg(x));
                    u.iter().zip(&v).map(|(p, q)| a * p + b * q).collect()
                });
                Some(d)
            }
            _ => None,
        };
        FormField { dim: self.dim, degree: self.degree, circle_valued: self.circle_valued || other.circle_valued, coeff, deriv }
    }

    pub fn add(&self, other: &FormField) -> FormField {
        self.combine(other, 1.0, 1.0)
    }

    pub fn sub(&self, other: &FormField) -> FormField {
        self.combine(other, 1.0, -1.0)
    }

    pub fn scale(&self, s: f64) -> FormField {
        self.combine(&FormField::zero(self.dim, self.degree), s, 0.0)
    }

    pub fn neg(&self) -> FormField {
        self.scale(-1.0)
    }

    /// `α ∧ β`.
    pub fn wedge(&self, other: &FormField) -> FormField {
        assert_eq!(self.dim, other.dim);
        let dim = self.dim;
        let (p, q) = (self.degree, other.degree);
        let (f, g) = (self.coeff.clone(), other.coeff.clone());
        let left = subsets(dim, p);
        let right = subsets(dim, q);
        let mut table: Vec<(usize, usize, usize, f64)> = Vec::new();
        for (i, a) in left.iter().enumerate() {
            for (j, b) in right.iter().enumerate() {
                let mut joined = a.clone();
                joined.extend_from_slice(b);
                if let Some((sorted, sign)) = sort_with_sign(&joined) {
                    table.push((i, j, subset_index(dim, &sorted), sign as f64));
                }
            }
        }
        let n = binomial(dim, p + q);
        FormField::new(dim, p + q, move |x| {
            let (u, v) = (f(x), g(x));
            let mut out = vec![0.0; n];
            for &(i, j, k, s) in &table {
                out[k] += s * u[i] * v[j];
            }
            out
        })
    }

    /// Pull back along `map: ℝᵐ → ℝⁿ`. The Jacobian is taken by central
    /// differences unless supplied (as rows `∂F_i/∂x_j`).
    pub fn pullback(&self, src_dim: usize, map: MapFn, jacobian: Option<JacobianFn>) -> FormField {
        let degree = self.degree;
        let dim = self.dim;
        let f = self.coeff.clone();
        let target_sets = subsets(dim, degree);
        let source_sets = subsets(src_dim, degree);
        let map2 = map.clone();
        let jac = move |x: &[f64]| -> Vec<Vec<f64>> {
            match &jacobian {
                Some(j) => j(x),
                None => {
                    let cols: Vec<Vec<f64>> = (0..src_dim).map(|a| central_difference(&*map, x, a, false)).collect();
                    (0..dim).map(|i| (0..src_dim).map(|a| cols[a][i]).collect()).collect()
                }
            }
        };
        let mut out = FormField::new(src_dim, degree, move |x| {
            let y = map2(x);
            let c = f(&y);
            if degree == 0 {
                return c;
            }
            let jm = jac(x);
            source_sets
                .iter()
                .map(|j| {
                    let mut s = 0.0;
                    for (k, i) in target_sets.iter().enumerate() {
                        if c[k] == 0.0 {
                            continue;
                        }
                        let mut m: Vec<Vec<f64>> = i.iter().map(|&r| j.iter().map(|&col| jm[r][col]).collect()).collect();
                        s += c[k] * determinant(&mut m);
                    }
                    s
                })
                .collect()
        });
        out.circle_valued = self.circle_valued;
        out
    }

    /// Pull back along the affine map `x ↦ M x + b` (`M` given as rows).
    pub fn pullback_affine(&self, matrix: Vec<Vec<f64>>, offset: Vec<f64>) -> FormField {
        let src_dim = matrix.first().map(|r| r.len()).unwrap_or(0);
        let m2 = matrix.clone();
        let map: MapFn = Arc::new(move |x| m2.iter().zip(&offset).map(|(row, b)| row.iter().zip(x).map(|(a, xi)| a * xi).sum::<f64>() + b).collect());
        let jac = Arc::new(move |_: &[f64]| matrix.clone());
        self.pullback(src_dim, map, Some(jac))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_indexing_roundtrip() {
        for n in 1..6 {
            for k in 0..=n {
                for (i, s) in subsets(n, k).iter().enumerate() {
                    assert_eq!(subset_index(n, s), i);
                }
            }
        }
    }

    #[test]
    fn evaluate_is_antisymmetric_and_multilinear() {
        let w = FormField::new(3, 2, |x| vec![x[0] + 1.0, x[1] * x[2], 2.0]);
        let x = [0.3, -0.2, 0.7];
        let t1 = vec![1.0, 2.0, -1.0];
        let t2 = vec![0.5, -0.3, 0.2];
        let a = w.evaluate(&x, &[t1.clone(), t2.clone()]);
        let b = w.evaluate(&x, &[t2.clone(), t1.clone()]);
        assert!((a + b).abs() < 1e-12);
        let t3: Vec<f64> = t1.iter().map(|v| 3.0 * v).collect();
        let c = w.evaluate(&x, &[t3, t2.clone()]);
        assert!((c - 3.0 * a).abs() < 1e-12);
    }

    #[test]
    fn finite_difference_derivative_matches_analytic() {
        // ω = sin(x) y dz  =>  dω = cos(x) y dx∧dz + sin(x) dy∧dz
        let w = FormField::new(3, 1, |x| vec![0.0, 0.0, x[0].sin() * x[1]]);
        let dw = w.exterior_derivative();
        let x = [0.4, 1.3, -0.5];
        let c = dw.coefficients(&x);
        // order: (0,1), (0,2), (1,2)
        assert!(c[0].abs() < 1e-10);
        assert!((c[1] - 0.4f64.cos() * 1.3).abs() < 1e-10);
        assert!((c[2] - 0.4f64.sin()).abs() < 1e-10);
        let ddw = dw.exterior_derivative();
        assert!(ddw.coefficients(&x).iter().all(|v| v.abs() < 1e-14));
    }

    #[test]
    fn angle_derivative_ignores_branch_jumps() {
        let g = FormField::angle(2, |x| x[1].atan2(x[0]) / (2.0 * std::f64::consts::PI));
        let dg = g.exterior_derivative();
        // Across the branch cut at angle π.
        let x = [-1.0, 1e-4];
        let c = dg.coefficients(&x);
        let r2 = x[0] * x[0] + x[1] * x[1];
        let expect = [-x[1] / r2 / (2.0 * std::f64::consts::PI), x[0] / r2 / (2.0 * std::f64::consts::PI)];
        assert!((c[0] - expect[0]).abs() < 1e-8 && (c[1] - expect[1]).abs() < 1e-8);
    }

    #[test]
    fn wedge_and_pullback() {
        let dx = FormField::monomial(2, &[0], 1.0);
        let dy = FormField::monomial(2, &[1], 1.0);
        let area = dx.wedge(&dy);
        assert_eq!(area.coefficients(&[0.0, 0.0]), vec![1.0]);
        let back = dy.wedge(&dx);
        assert_eq!(back.coefficients(&[0.0, 0.0]), vec![-1.0]);
        // Pull back dx∧dy along (s,t) ↦ (2s, 3t + s): determinant 6.
        let pb = area.pullback_affine(vec![vec![2.0, 0.0], vec![1.0, 3.0]], vec![0.0, 0.0]);
        assert!((pb.coefficients(&[0.1, 0.2])[0] - 6.0).abs() < 1e-12);
        let pb_fd = area.pullback(2, Arc::new(|x: &[f64]| vec![2.0 * x[0], 3.0 * x[1] + x[0]]), None);
        assert!((pb_fd.coefficients(&[0.1, 0.2])[0] - 6.0).abs() < 1e-9);
    }
}
