//! Cochain exchange format.
//!
//! Either a named built-in,
//!
//! ```json
//! {"builtin": {"name": "monopole", "n": 1, "cover": "two_chart"}}
//! ```
//!
//! or explicit tables keyed by chart tuples:
//!
//! ```json
//! {"degree": 2, "backend": "float", "charts": 9, "dim": 2,
//!  "g": {"0,1": {"fn": "const", "angle": "1/3"}},
//!  "omega_2": {"0": {"fn": "constant", "coeffs": [0.25]}}}
//! ```
//!
//! Tuple keys must be strictly increasing. On the exact backend every `g` entry
//! must be a rational constant and no forms may be given.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::builtin::{azimuth, flat_3form, flat_gerbe, monopole_potential, monopole_tetrahedral, monopole_two_chart};
use super::{CechCochain, DeligneCochain, Fill};
use crate::circle::CircleValue;
use crate::error::{Error, Result};
use crate::form::{binomial, FormField};
use crate::simplicial::meshes::{tetrahedral_cover, torus_cover, two_chart_sphere_cover};
use crate::simplicial::{ChartId, Cover, Simplex};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SphereCover {
    #[default]
    TwoChart,
    Tetrahedral,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum BuiltinCochain {
    Monopole {
        n: i64,
        #[serde(default)]
        cover: SphereCover,
    },
    FlatGerbe {
        b: f64,
    },
    #[serde(rename = "flat_3form")]
    Flat3Form {
        c: f64,
    },
}

impl BuiltinCochain {
    pub fn cochain(&self) -> Result<DeligneCochain> {
        match *self {
            BuiltinCochain::Monopole { n, cover: SphereCover::TwoChart } => Ok(monopole_two_chart(n)),
            BuiltinCochain::Monopole { n, cover: SphereCover::Tetrahedral } => Ok(monopole_tetrahedral(n)),
            BuiltinCochain::FlatGerbe { b } => Ok(flat_gerbe(b)),
            BuiltinCochain::Flat3Form { c } => Ok(flat_3form(c)),
        }
    }

    /// The cover the built-in is defined on.
    pub fn cover(&self) -> Result<Cover> {
        match self {
            BuiltinCochain::Monopole { cover: SphereCover::TwoChart, .. } => Ok(two_chart_sphere_cover()),
            BuiltinCochain::Monopole { cover: SphereCover::Tetrahedral, .. } => Ok(tetrahedral_cover()),
            BuiltinCochain::FlatGerbe { .. } => Ok(torus_cover(2)),
            BuiltinCochain::Flat3Form { .. } => Ok(torus_cover(3)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "fn", rename_all = "snake_case", deny_unknown_fields)]
pub enum FormSpec {
    /// Constant circle value, written `"p/q"` or as a decimal.
    Const {
        angle: String,
    },
    Constant {
        coeffs: Vec<f64>,
    },
    Azimuth {
        scale: f64,
    },
    MonopoleNorth {
        n: i64,
    },
    MonopoleSouth {
        n: i64,
    },
    Zero,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    #[default]
    Float,
    Exact,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CochainDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<BuiltinCochain>,
    #[serde(default)]
    pub degree: Option<usize>,
    #[serde(default)]
    pub backend: Backend,
    #[serde(default)]
    pub charts: Option<usize>,
    #[serde(default)]
    pub dim: Option<usize>,
    #[serde(default)]
    pub g: BTreeMap<String, FormSpec>,
    #[serde(default)]
    pub omega_1: BTreeMap<String, FormSpec>,
    #[serde(default)]
    pub omega_2: BTreeMap<String, FormSpec>,
    #[serde(default)]
    pub omega_3: BTreeMap<String, FormSpec>,
}

fn parse_angle(s: &str) -> Result<CircleValue> {
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| Error::Parse(format!("bad angle {s:?}")))?;
        let q: i64 = q.trim().parse().map_err(|_| Error::Parse(format!("bad angle {s:?}")))?;
        if q == 0 {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        Ok(CircleValue::exact(p, q))
    } else {
        let v: f64 = s.trim().parse().map_err(|_| Error::Parse(format!("bad angle {s:?}")))?;
        Ok(CircleValue::float(v))
    }
}

fn tuple_key(key: &str, len: usize, charts: usize) -> Result<Vec<ChartId>> {
    let s = Simplex::parse_key(key)?;
    if s.vertices().len() != len {
        return Err(Error::Parse(format!("tuple {key:?} should have {len} charts")));
    }
    if let Some(c) = s.vertices().iter().find(|&&c| c >= charts) {
        return Err(Error::Parse(format!("tuple {key:?} names chart {c}, only {charts} exist")));
    }
    Ok(s.vertices().to_vec())
}

fn build_form(spec: &FormSpec, dim: usize, degree: usize) -> Result<FormField> {
    let check_dim = |need: usize| {
        if dim != need {
            Err(Error::Parse(format!("{spec:?} needs ambient dimension {need}, cochain has {dim}")))
        } else {
            Ok(())
        }
    };
    let form = match spec {
        FormSpec::Const { angle } => {
            if degree != 0 {
                return Err(Error::Parse("const angles are only valid for g".into()));
            }
            FormField::constant(dim, 0, vec![parse_angle(angle)?.angle()]).as_circle_valued()
        }
        FormSpec::Constant { coeffs } => {
            if coeffs.len() != binomial(dim, degree) {
                return Err(Error::Parse(format!("constant {degree}-form on dimension {dim} needs {} coefficients", binomial(dim, degree))));
            }
            let f = FormField::constant(dim, degree, coeffs.clone());
            if degree == 0 {
                f.as_circle_valued()
            } else {
                f
            }
        }
        FormSpec::Azimuth { scale } => {
            check_dim(3)?;
            azimuth(*scale)
        }
        FormSpec::MonopoleNorth { n } => {
            check_dim(3)?;
            monopole_potential(*n, true)
        }
        FormSpec::MonopoleSouth { n } => {
            check_dim(3)?;
            monopole_potential(*n, false)
        }
        FormSpec::Zero => FormField::zero(dim, degree),
    };
    if form.degree() != degree {
        return Err(Error::Parse(format!("{spec:?} has degree {}, expected {degree}", form.degree())));
    }
    Ok(form)
}

impl CochainDoc {
    pub fn into_cochain(self) -> Result<DeligneCochain> {
        if let Some(b) = &self.builtin {
            return b.cochain();
        }
        let degree = self.degree.ok_or_else(|| Error::Parse("missing field `degree`".into()))?;
        let charts = self.charts.ok_or_else(|| Error::Parse("missing field `charts`".into()))?;
        let dim = self.dim.ok_or_else(|| Error::Parse("missing field `dim`".into()))?;
        if !(1..=3).contains(&degree) {
            return Err(Error::Parse(format!("degree {degree} unsupported (1, 2 or 3)")));
        }
        let omegas = [&self.omega_1, &self.omega_2, &self.omega_3];
        if omegas.iter().skip(degree).any(|m| !m.is_empty()) {
            return Err(Error::Parse(format!("forms above degree {degree} given")));
        }
        if self.backend == Backend::Exact {
            if omegas.iter().any(|m| !m.is_empty()) {
                return Err(Error::Parse("the exact backend takes no forms".into()));
            }
            let mut table = BTreeMap::new();
            for (k, spec) in &self.g {
                let t = tuple_key(k, degree + 1, charts)?;
                let FormSpec::Const { angle } = spec else {
                    return Err(Error::Parse(format!("exact backend: g[{k}] must be a rational constant")));
                };
                let v = parse_angle(angle)?.as_rational().ok_or_else(|| Error::Parse(format!("exact backend: g[{k}] = {angle} is not rational")))?;
                table.insert(t, v);
            }
            return Ok(DeligneCochain::exact(degree, charts, dim, table));
        }
        let mut components = Vec::new();
        for r in 0..=degree {
            let src = if r == 0 { &self.g } else { omegas[r - 1] };
            let mut table = BTreeMap::new();
            for (k, spec) in src {
                table.insert(tuple_key(k, degree - r + 1, charts)?, build_form(spec, dim, r)?);
            }
            components.push(CechCochain::tabulated(degree - r, r, dim, Fill::Zero, table));
        }
        DeligneCochain::new(charts, components)
    }
}

pub fn parse_cochain(text: &str) -> Result<DeligneCochain> {
    let doc: CochainDoc = serde_json::from_str(text)?;
    doc.into_cochain()
}
