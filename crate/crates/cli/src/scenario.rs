//! Scenario files: one task per file.
//!
//! ```json
//! {"seed": 7, "tolerance": 1e-6,
//!  "task": {"kind": "holonomy",
//!           "cochain": {"builtin": {"name": "monopole", "n": 1}},
//!           "cycle": {"type": "equator"},
//!           "expected": "1/2"}}
//! ```
//!
//! Inputs reuse the exchange formats of the library: cochains, meshes, finite
//! models, triangulations, connections and gauge transformations.

use serde::{Deserialize, Serialize};

use deligne_toolkit::chern_simons::json::{ConnectionDoc, GaugeDoc};
use deligne_toolkit::chern_simons::CsConvention;
use deligne_toolkit::deligne::json::CochainDoc;
use deligne_toolkit::multiplicative::json::{FiniteModelDoc, TriangulationDoc};
use deligne_toolkit::simplicial::json::MeshDoc;
use deligne_toolkit::simplicial::{Cover, Geometry};

use crate::error::CliError;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub seed: u64,
    /// Overrides the task's default tolerance.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    pub task: Task,
}

/// A test cycle for the holonomy task.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum CycleDoc {
    /// Equator of the UV sphere.
    Equator {
        #[serde(default = "n_phi")]
        n_phi: usize,
        #[serde(default = "n_theta")]
        n_theta: usize,
    },
    /// Latitude ring `r` of the UV sphere, `0 < r < n_theta`.
    Ring {
        r: usize,
        #[serde(default = "n_phi")]
        n_phi: usize,
        #[serde(default = "n_theta")]
        n_theta: usize,
    },
    /// The fundamental class of the `n^dim` Kuhn grid.
    Torus {
        dim: usize,
        #[serde(default = "three")]
        n: usize,
    },
    Mesh {
        mesh: MeshDoc,
    },
}

/// One C-field gauge element: a shift of the connection by a `su(2)` 1-form and
/// optionally a constant integral 3-form curvature.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaugeElementDoc {
    pub alpha: ConnectionDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curvature: Option<Vec<f64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Task {
    CheckCocycle {
        cochain: CochainDoc,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cover: Option<Cover>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        geometry: Option<Geometry>,
        /// Random points drawn to populate the overlaps.
        #[serde(default = "pool")]
        pool: usize,
        #[serde(default = "per_overlap")]
        per_overlap: usize,
    },
    Holonomy {
        cochain: CochainDoc,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cover: Option<Cover>,
        cycle: CycleDoc,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expected: Option<String>,
        /// Barycentric subdivisions applied to the cycle first.
        #[serde(default)]
        subdivisions: usize,
        /// Include the per-simplex amplitude table.
        #[serde(default)]
        amplitudes: bool,
    },
    Transgress {
        /// A degree-3 cochain on `S¹ × T^base` over the product cover.
        cochain: CochainDoc,
        #[serde(default = "two")]
        base: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expected: Option<String>,
        /// Sample points for the curvature diagram.
        #[serde(default = "hundred")]
        points: usize,
    },
    Dw {
        triangulation: TriangulationDoc,
        model: FiniteModelDoc,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expected: Option<String>,
        /// Also sum over all colorings without gauge fixing.
        #[serde(default)]
        brute_force: bool,
    },
    Triple {
        model: FiniteModelDoc,
    },
    Cs {
        connection: ConnectionDoc,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        gauge: Option<GaugeDoc>,
        #[serde(default = "one")]
        level: i64,
        #[serde(default)]
        convention: CsConvention,
        #[serde(default = "cs_grid")]
        grid: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expected: Option<f64>,
    },
    Cfield {
        connection: ConnectionDoc,
        /// Constant coefficients of the 3-form `c`; zero when absent.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        form: Option<Vec<f64>>,
        elements: Vec<GaugeElementDoc>,
        #[serde(default = "one")]
        level: i64,
        #[serde(default = "cfield_grid")]
        grid: usize,
    },
    Suite {
        /// Suite names; empty runs every suite.
        #[serde(default)]
        names: Vec<String>,
        /// Further scenario files, relative to this one, run as part of the suite.
        #[serde(default)]
        fixtures: Vec<String>,
    },
}

impl Task {
    pub fn kind(&self) -> &'static str {
        match self {
            Task::CheckCocycle { .. } => "check-cocycle",
            Task::Holonomy { .. } => "holonomy",
            Task::Transgress { .. } => "transgress",
            Task::Dw { .. } => "dw",
            Task::Triple { .. } => "triple",
            Task::Cs { .. } => "cs",
            Task::Cfield { .. } => "cfield",
            Task::Suite { .. } => "suite",
        }
    }

    /// Tolerance used when the scenario does not set one. Exact tasks have none.
    pub fn default_tolerance(&self) -> Option<f64> {
        match self {
            Task::CheckCocycle { .. } => Some(1e-8),
            Task::Holonomy { .. } | Task::Transgress { .. } => Some(1e-6),
            Task::Dw { .. } | Task::Triple { .. } | Task::Suite { .. } => None,
            Task::Cs { .. } => Some(1e-3),
            Task::Cfield { .. } => Some(1e-4),
        }
    }
}

fn n_phi() -> usize {
    16
}
fn n_theta() -> usize {
    8
}
fn one() -> i64 {
    1
}
fn two() -> usize {
    2
}
fn three() -> usize {
    3
}
fn hundred() -> usize {
    100
}
fn pool() -> usize {
    40_000
}
fn per_overlap() -> usize {
    50
}
fn cs_grid() -> usize {
    deligne_toolkit::chern_simons::DEFAULT_GRID
}
fn cfield_grid() -> usize {
    20
}

/// Parse a scenario, reporting the position and field path of schema errors.
pub fn parse_scenario(text: &str, origin: &str) -> Result<Scenario, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let scenario: Scenario = serde_path_to_error::deserialize(de).map_err(|e| {
        let field = e.path().to_string();
        let inner = e.into_inner();
        let mut message = inner.to_string();
        if let Some(i) = message.rfind(" at line ") {
            message.truncate(i);
        }
        CliError::Schema { path: origin.to_string(), line: inner.line(), column: inner.column(), field, message }
    })?;
    if let Some(t) = scenario.tolerance {
        if !(t > 0.0 && t.is_finite()) {
            return Err(CliError::Invalid(format!("tolerance must be positive, got {t}")));
        }
    }
    Ok(scenario)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_filled() {
        let s = parse_scenario(
            r#"{"task": {"kind": "holonomy", "cochain": {"builtin": {"name": "monopole", "n": 1}}, "cycle": {"type": "equator"}}}"#,
            "t",
        )
        .unwrap();
        assert_eq!(s.seed, 0);
        let Task::Holonomy { cycle: CycleDoc::Equator { n_phi, n_theta }, subdivisions, .. } = s.task else { panic!("wrong task") };
        assert_eq!((n_phi, n_theta, subdivisions), (16, 8, 0));
    }

    #[test]
    fn schema_errors_name_the_field() {
        let err = parse_scenario("{\"task\": {\"kind\": \"dw\",\n \"triangulation\": {\"type\": \"torus\", \"dim\": \"x\"}}}", "s.json").unwrap_err();
        let CliError::Schema { line, field, .. } = &err else { panic!("{err}") };
        assert_eq!(*line, 2);
        assert!(field.starts_with("task"), "{field}");
        assert!(err.to_string().contains("expected usize"), "{err}");
        assert!(parse_scenario(r#"{"task": {"kind": "dw", "bogus": 1}}"#, "s").is_err());
        assert!(parse_scenario(r#"{"task": {"kind": "nope"}}"#, "s").is_err());
        assert!(matches!(parse_scenario(r#"{"tolerance": -1, "task": {"kind": "suite"}}"#, "s"), Err(CliError::Invalid(_))));
    }
}
