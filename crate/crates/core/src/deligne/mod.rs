//! Deligne cochains `(g, ω¹, …, ωᵖ)` over a finite cover.
//!
//! Component `r` is a Čech `(p - r)`-cochain of `r`-forms; component 0 holds
//! `ℝ/ℤ`-valued functions. A cocycle satisfies, for `r = 1..=p`,
//!
//! ```text
//! δω^r + (-1)^(p+1-r) dω^(r-1) = 0,        δg ≡ 0 mod ℤ.
//! ```
//!
//! For a line bundle (`p = 1`) this reads `A_j - A_i = d g_ij`.

pub mod builtin;
mod class;
pub mod json;

pub use class::{characteristic_class, IntegerCochain};

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::circle::wrap;
use crate::error::{Error, Result};
use crate::form::{sort_with_sign, subsets, FormField, MapFn};
use crate::simplicial::{ChartId, Cover, Geometry, OverlapSamples};

pub type EntryFn = Arc<dyn Fn(&[ChartId]) -> Option<FormField> + Send + Sync>;

/// What a lookup returns for an overlap the cochain does not define.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Fill {
    Zero,
    Strict,
}

/// A Čech cochain with values in forms, defined on increasing chart tuples and
/// extended by antisymmetry.
#[derive(Clone)]
pub struct CechCochain {
    cech_degree: usize,
    form_degree: usize,
    dim: usize,
    fill: Fill,
    entries: EntryFn,
}

impl std::fmt::Debug for CechCochain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "CechCochain(q={}, r={}, dim={})", self.cech_degree, self.form_degree, self.dim)
    }
}

impl CechCochain {
    /// `entries` is consulted with strictly increasing tuples only.
    pub fn from_fn(
        cech_degree: usize,
        form_degree: usize,
        dim: usize,
        fill: Fill,
        entries: impl Fn(&[ChartId]) -> Option<FormField> + Send + Sync + 'static,
    ) -> Self {
        CechCochain { cech_degree, form_degree, dim, fill, entries: Arc::new(entries) }
    }

    pub fn tabulated(cech_degree: usize, form_degree: usize, dim: usize, fill: Fill, table: BTreeMap<Vec<ChartId>, FormField>) -> Self {
        CechCochain::from_fn(cech_degree, form_degree, dim, fill, move |t| table.get(t).cloned())
    }

    pub fn zero(cech_degree: usize, form_degree: usize, dim: usize) -> Self {
        CechCochain::from_fn(cech_degree, form_degree, dim, Fill::Zero, |_| None)
    }

    pub fn cech_degree(&self) -> usize {
        self.cech_degree
    }

    pub fn form_degree(&self) -> usize {
        self.form_degree
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn zero_form(&self) -> FormField {
        let z = FormField::zero(self.dim, self.form_degree);
        if self.form_degree == 0 {
            z.as_circle_valued()
        } else {
            z
        }
    }

    /// The value on an arbitrary tuple: repeated charts give zero, a
    /// transposition flips the sign.
    pub fn value(&self, tuple: &[ChartId]) -> Result<FormField> {
        if tuple.len() != self.cech_degree + 1 {
            return Err(Error::Structure(format!("tuple {tuple:?} has length {}, expected {}", tuple.len(), self.cech_degree + 1)));
        }
        let Some((sorted, sign)) = sort_with_sign(tuple) else {
            return Ok(self.zero_form());
        };
        match (self.entries)(&sorted) {
            Some(f) => Ok(if sign < 0 { f.neg() } else { f }),
            None => match self.fill {
                Fill::Zero => Ok(self.zero_form()),
                Fill::Strict => Err(Error::MissingOverlap(sorted)),
            },
        }
    }

    fn map(&self, fill: Fill, f: impl Fn(FormField) -> FormField + Send + Sync + 'static) -> CechCochain {
        let inner = self.entries.clone();
        CechCochain::from_fn(self.cech_degree, self.form_degree, self.dim, fill, move |t| inner(t).map(&f))
    }

    pub fn neg(&self) -> CechCochain {
        self.map(self.fill, |f| f.neg())
    }

    pub fn add(&self, other: &CechCochain) -> Result<CechCochain> {
        if (self.cech_degree, self.form_degree, self.dim) != (other.cech_degree, other.form_degree, other.dim) {
            return Err(Error::Structure(format!("cannot add {self:?} and {other:?}")));
        }
        let (a, b) = (self.clone(), other.clone());
        let fill = if self.fill == Fill::Strict || other.fill == Fill::Strict { Fill::Strict } else { Fill::Zero };
        Ok(CechCochain::from_fn(self.cech_degree, self.form_degree, self.dim, fill, move |t| match ((a.entries)(t), (b.entries)(t)) {
            (None, None) => None,
            (Some(x), None) | (None, Some(x)) => Some(x),
            (Some(x), Some(y)) => Some(x.add(&y)),
        }))
    }

    /// Čech differential `(δc)_{i₀…i_{q+1}} = Σₖ (-1)ᵏ c_{…îₖ…}`. Missing
    /// entries follow this cochain's fill rule.
    pub fn delta(&self) -> CechCochain {
        let c = self.clone();
        CechCochain::from_fn(self.cech_degree + 1, self.form_degree, self.dim, Fill::Zero, move |t| {
            let mut acc: Option<FormField> = None;
            for k in 0..t.len() {
                let mut rest = t.to_vec();
                rest.remove(k);
                let term = c.value(&rest).ok()?;
                let term = if k % 2 == 0 { term } else { term.neg() };
                acc = Some(match acc {
                    None => term,
                    Some(a) => a.add(&term),
                });
            }
            acc
        })
    }

    /// Entrywise exterior derivative.
    pub fn d(&self) -> CechCochain {
        let inner = self.entries.clone();
        CechCochain {
            cech_degree: self.cech_degree,
            form_degree: self.form_degree + 1,
            dim: self.dim,
            fill: self.fill,
            entries: Arc::new(move |t| inner(t).map(|f| f.exterior_derivative())),
        }
    }

    /// Pull back along `map: ℝ^src_dim → ℝ^dim`, sending source chart `i` to
    /// target chart `charts[i]`.
    pub fn pullback(&self, src_dim: usize, map: MapFn, charts: Arc<Vec<ChartId>>) -> CechCochain {
        let inner = self.clone();
        CechCochain::from_fn(self.cech_degree, self.form_degree, src_dim, self.fill, move |t| {
            let target: Vec<ChartId> = t.iter().map(|&i| charts[i]).collect();
            let f = inner.value(&target).ok()?;
            Some(f.pullback(src_dim, map.clone(), None))
        })
    }
}

/// Local data `(g, ω¹, …, ωᵖ)` of a degree-`p` Deligne class.
#[derive(Clone, Debug)]
pub struct DeligneCochain {
    degree: usize,
    charts: usize,
    components: Vec<CechCochain>,
    exact: Option<Arc<ExactTable>>,
}

/// Discrete data on the exact backend: rational angles for `g`, all forms zero.
pub type ExactTable = BTreeMap<Vec<ChartId>, num_rational::Rational64>;

impl DeligneCochain {
    pub fn new(charts: usize, components: Vec<CechCochain>) -> Result<Self> {
        let p = components.len().checked_sub(1).ok_or_else(|| Error::Structure("no components".into()))?;
        let dim = components[0].dim;
        for (r, c) in components.iter().enumerate() {
            if c.form_degree != r || c.cech_degree != p - r || c.dim != dim {
                return Err(Error::Structure(format!("component {r} has shape {c:?}, expected Čech degree {} and form degree {r}", p - r)));
            }
        }
        Ok(DeligneCochain { degree: p, charts, components, exact: None })
    }

    pub fn trivial(degree: usize, charts: usize, dim: usize) -> Self {
        let components = (0..=degree).map(|r| CechCochain::zero(degree - r, r, dim)).collect();
        DeligneCochain { degree, charts, components, exact: None }
    }

    /// `[1, 0, …, 0, ρ]` for a global `p`-form `ρ`.
    pub fn from_global_form(rho: FormField, charts: usize) -> Self {
        let p = rho.degree();
        let dim = rho.dim();
        let mut out = DeligneCochain::trivial(p, charts, dim);
        out.components[p] = CechCochain::from_fn(0, p, dim, Fill::Zero, move |_| Some(rho.clone()));
        out
    }

    /// Discrete data with rational `g` values and vanishing forms.
    pub fn exact(degree: usize, charts: usize, dim: usize, table: ExactTable) -> Self {
        let floats: BTreeMap<Vec<ChartId>, FormField> = table
            .iter()
            .map(|(k, v)| {
                let a = *v.numer() as f64 / *v.denom() as f64;
                (k.clone(), FormField::constant(dim, 0, vec![a]).as_circle_valued())
            })
            .collect();
        let mut out = DeligneCochain::trivial(degree, charts, dim);
        out.components[0] = CechCochain::tabulated(degree, 0, dim, Fill::Zero, floats);
        out.exact = Some(Arc::new(table));
        out
    }

    pub fn exact_table(&self) -> Option<&ExactTable> {
        self.exact.as_deref()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn charts(&self) -> usize {
        self.charts
    }

    pub fn dim(&self) -> usize {
        self.components[0].dim
    }

    pub fn component(&self, r: usize) -> &CechCochain {
        &self.components[r]
    }

    pub fn g(&self) -> &CechCochain {
        &self.components[0]
    }

    pub fn add(&self, other: &DeligneCochain) -> Result<DeligneCochain> {
        if self.degree != other.degree || self.charts != other.charts {
            return Err(Error::Structure("Deligne cochains of different shape".into()));
        }
        let components = self.components.iter().zip(&other.components).map(|(a, b)| a.add(b)).collect::<Result<Vec<_>>>()?;
        let exact = match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => {
                let mut t: ExactTable = (**a).clone();
                for (k, v) in b.iter() {
                    *t.entry(k.clone()).or_default() += v;
                }
                Some(Arc::new(t))
            }
            _ => None,
        };
        Ok(DeligneCochain { degree: self.degree, charts: self.charts, components, exact })
    }

    pub fn neg(&self) -> DeligneCochain {
        DeligneCochain {
            degree: self.degree,
            charts: self.charts,
            components: self.components.iter().map(CechCochain::neg).collect(),
            exact: self.exact.as_ref().map(|t| Arc::new(t.iter().map(|(k, v)| (k.clone(), -v)).collect())),
        }
    }

    /// Pull back along a smooth map whose chart `i` lands in chart `charts[i]`
    /// of this cochain's cover.
    pub fn pullback(&self, src_dim: usize, map: MapFn, charts: Vec<ChartId>) -> Result<DeligneCochain> {
        if let Some(bad) = charts.iter().find(|&&c| c >= self.charts) {
            return Err(Error::Structure(format!("chart map refers to chart {bad}, cover has {}", self.charts)));
        }
        let n = charts.len();
        let charts = Arc::new(charts);
        Ok(DeligneCochain {
            degree: self.degree,
            charts: n,
            components: self.components.iter().map(|c| c.pullback(src_dim, map.clone(), charts.clone())).collect(),
            exact: None,
        })
    }
}

/// `D(η)` for data `η` shaped like a degree-`(p-1)` cochain:
/// `D(η)^r = δη^r + (-1)^(p-r) dη^(r-1)`. Always a cocycle.
pub fn coboundary(eta: &DeligneCochain) -> DeligneCochain {
    let p = eta.degree + 1;
    let dim = eta.dim();
    let components = (0..=p)
        .map(|r| {
            let delta = if r < p { Some(eta.components[r].delta()) } else { None };
            let deriv = if r >= 1 {
                let d = eta.components[r - 1].d();
                Some(if (p - r).is_multiple_of(2) { d } else { d.neg() })
            } else {
                None
            };
            match (delta, deriv) {
                (Some(a), Some(b)) => a.add(&b).expect("shapes agree by construction"),
                (Some(a), None) | (None, Some(a)) => a,
                (None, None) => CechCochain::zero(p - r, r, dim),
            }
        })
        .collect();
    DeligneCochain { degree: p, charts: eta.charts, components, exact: None }
}

/// Largest residual of one rung of the cocycle condition.
#[derive(Clone, Debug, Serialize)]
pub struct RungResidual {
    pub rung: usize,
    pub max: f64,
    pub worst_tuple: Option<Vec<ChartId>>,
    pub evaluations: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidualReport {
    pub rungs: Vec<RungResidual>,
}

impl ResidualReport {
    pub fn max(&self) -> f64 {
        self.rungs.iter().map(|r| r.max).fold(0.0, f64::max)
    }
}

fn frames(basis: &[Vec<f64>], r: usize) -> Vec<Vec<Vec<f64>>> {
    subsets(basis.len(), r).into_iter().map(|s| s.iter().map(|&i| basis[i].clone()).collect()).collect()
}

/// Residuals of every rung of the total differential: rung 0 is `δg mod ℤ`,
/// rung `r` is `δω^r + (-1)^(p+1-r) dω^(r-1)`, evaluated on tangent frames at
/// the sample points of each overlap of the right length.
pub fn deligne_differential(xi: &DeligneCochain, geometry: &Geometry, samples: &OverlapSamples, per_overlap: usize) -> Result<ResidualReport> {
    let p = xi.degree;
    let mut rungs = Vec::new();
    for r in 0..=p {
        let lhs = xi.components[r].delta();
        let rhs = if r >= 1 {
            let d = xi.components[r - 1].d();
            Some(if (p + 1 - r).is_multiple_of(2) { d } else { d.neg() })
        } else {
            None
        };
        let tuples: Vec<&Vec<ChartId>> = samples.nerve(p + 2 - r).collect();
        let per_tuple: Vec<Result<(f64, usize)>> = tuples
            .par_iter()
            .map(|t| {
                // Each lookup goes through the strict path so missing overlaps surface.
                for k in 0..t.len() {
                    let mut rest = t.to_vec();
                    rest.remove(k);
                    xi.components[r].value(&rest)?;
                }
                if r >= 1 {
                    xi.components[r - 1].value(t)?;
                }
                let a = lhs.value(t)?;
                let b = match &rhs {
                    Some(c) => Some(c.value(t)?),
                    None => None,
                };
                let mut worst = 0.0f64;
                let mut count = 0;
                for x in samples.get(t).iter().take(per_overlap) {
                    if r == 0 {
                        worst = worst.max(wrap(a.evaluate(x, &[])).abs());
                        count += 1;
                        continue;
                    }
                    for fr in frames(&geometry.tangent_basis(x), r) {
                        let v = a.evaluate(x, &fr) + b.as_ref().map_or(0.0, |b| b.evaluate(x, &fr));
                        worst = worst.max(v.abs());
                        count += 1;
                    }
                }
                Ok((worst, count))
            })
            .collect();
        let mut rung = RungResidual { rung: r, max: 0.0, worst_tuple: None, evaluations: 0 };
        for (t, res) in tuples.iter().zip(per_tuple) {
            let (worst, count) = res?;
            rung.evaluations += count;
            if worst > rung.max || rung.worst_tuple.is_none() {
                if worst > rung.max {
                    rung.max = worst;
                }
                rung.worst_tuple = Some((*t).clone());
            }
        }
        rungs.push(rung);
    }
    Ok(ResidualReport { rungs })
}

#[derive(Clone, Debug, Serialize)]
pub struct CocycleReport {
    pub passed: bool,
    pub tolerance: f64,
    pub residuals: ResidualReport,
}

/// True iff every rung residual is within `tol`. Failures are reported, not
/// raised; only malformed data is an error.
pub fn is_cocycle(xi: &DeligneCochain, geometry: &Geometry, samples: &OverlapSamples, per_overlap: usize, tol: f64) -> Result<CocycleReport> {
    let residuals = deligne_differential(xi, geometry, samples, per_overlap)?;
    Ok(CocycleReport { passed: residuals.max() <= tol, tolerance: tol, residuals })
}

/// The curvature `dωᵖ`, chart by chart, with its largest disagreement on
/// pairwise overlaps.
#[derive(Clone, Debug)]
pub struct Curvature {
    pub local: CechCochain,
    pub form: FormField,
    pub globality: f64,
}

impl Curvature {
    pub fn is_global(&self, tol: f64) -> bool {
        self.globality <= tol
    }
}

pub fn curvature(xi: &DeligneCochain, cover: &Cover, geometry: &Geometry, samples: &OverlapSamples, per_overlap: usize) -> Result<Curvature> {
    let p = xi.degree;
    let local = xi.components[p].d();
    let mut globality = 0.0f64;
    for t in samples.nerve(2) {
        let a = local.value(&t[..1])?;
        let b = local.value(&t[1..])?;
        for x in samples.get(t).iter().take(per_overlap) {
            for fr in frames(&geometry.tangent_basis(x), p + 1) {
                globality = globality.max((a.evaluate(x, &fr) - b.evaluate(x, &fr)).abs());
            }
        }
    }
    let glue = local.clone();
    let cover = cover.clone();
    let dim = xi.dim();
    let n = crate::form::binomial(dim, p + 1);
    let nn = crate::form::binomial(dim, p + 2);
    let form = FormField::new(dim, p + 1, move |x| {
        let chart = cover.charts_at(x).first().copied().unwrap_or(0);
        glue.value(&[chart]).map(|f| f.coefficients(x)).unwrap_or_else(|_| vec![0.0; n])
    })
    .with_derivative(move |_| vec![0.0; nn]);
    Ok(Curvature { local, form, globality })
}

#[cfg(test)]
mod tests;
