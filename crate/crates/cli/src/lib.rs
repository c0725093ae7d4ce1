//! Scenario runner for `deligne-toolkit`.
//!
//! A scenario file names one task and its inputs. Running it yields a
//! [`Report`]: an echo of the parsed inputs, one entry per check, and an
//! overall verdict. Exit codes: 0 when every check passes, 2 when a check
//! fails, 1 when the scenario cannot be run at all.

pub mod error;
pub mod report;
pub mod scenario;
pub mod suites;
mod tasks;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

pub use error::CliError;
pub use report::{Check, Report};
pub use scenario::{parse_scenario, Scenario, Task};

use suites::{run_suite, SuiteConfig, SUITES};

/// Command-line overrides.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub tolerance: Option<f64>,
    pub seed: Option<u64>,
    /// Attach wall-clock timings to the report. Reports with timings are not
    /// reproducible byte for byte.
    pub timings: bool,
}

pub const EXIT_PASS: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_FAIL: i32 = 2;

pub fn exit_code(result: &Result<Report, CliError>) -> i32 {
    match result {
        Ok(r) if r.passed => EXIT_PASS,
        Ok(_) => EXIT_FAIL,
        Err(_) => EXIT_ERROR,
    }
}

pub fn run_file(path: &Path, opts: &RunOptions) -> Result<Report, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })?;
    let scenario = parse_scenario(&text, &path.display().to_string())?;
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("."));
    run_scenario(&scenario, &dir, opts)
}

/// Run a parsed scenario. Fixture paths are resolved against `dir`.
pub fn run_scenario(scenario: &Scenario, dir: &Path, opts: &RunOptions) -> Result<Report, CliError> {
    if let Some(t) = opts.tolerance {
        if !(t > 0.0 && t.is_finite()) {
            return Err(CliError::Invalid(format!("tolerance must be positive, got {t}")));
        }
    }
    let seed = opts.seed.unwrap_or(scenario.seed);
    let task = &scenario.task;
    let tolerance = opts.tolerance.or(scenario.tolerance).or(task.default_tolerance());
    let tol = tolerance.unwrap_or(0.0);
    let mut timings = BTreeMap::new();
    let start = Instant::now();
    let checks = match task {
        Task::CheckCocycle { cochain, cover, geometry, pool, per_overlap } => {
            tasks::check_cocycle(cochain, cover, geometry, *pool, *per_overlap, seed, tol)?
        }
        Task::Holonomy { cochain, cover, cycle, expected, subdivisions, amplitudes } => {
            tasks::holonomy_task(cochain, cover, cycle, expected, *subdivisions, *amplitudes, tol)?
        }
        Task::Transgress { cochain, base, expected, points } => tasks::transgress_task(cochain, *base, expected, *points, seed, tol)?,
        Task::Dw { triangulation, model, expected, brute_force } => tasks::dw_task(triangulation, model, expected, *brute_force)?,
        Task::Triple { model } => tasks::triple_task(model)?,
        Task::Cs { connection, gauge, level, convention, grid, expected } => {
            tasks::cs_task(connection, gauge, *level, *convention, *grid, *expected, tol)?
        }
        Task::Cfield { connection, form, elements, level, grid } => tasks::cfield_task(connection, form, elements, *level, *grid, tol)?,
        Task::Suite { names, fixtures } => {
            let names: Vec<String> = if names.is_empty() { SUITES.iter().map(|s| s.to_string()).collect() } else { names.clone() };
            if let Some(bad) = names.iter().find(|n| !SUITES.contains(&n.as_str())) {
                return Err(CliError::UnknownSuite(bad.clone()));
            }
            let cfg = SuiteConfig::new(seed);
            let mut checks = Vec::new();
            for name in &names {
                let t = Instant::now();
                checks.extend(run_suite(name, &cfg)?);
                timings.insert(name.clone(), t.elapsed().as_secs_f64());
            }
            for f in fixtures {
                let t = Instant::now();
                let path = dir.join(f);
                let text = std::fs::read_to_string(&path).map_err(|source| CliError::Read { path: path.clone(), source })?;
                let sub = parse_scenario(&text, &path.display().to_string())?;
                if matches!(sub.task, Task::Suite { .. }) {
                    return Err(CliError::Invalid(format!("fixture {f} is itself a suite")));
                }
                let inner = run_scenario(&sub, path.parent().unwrap_or(dir), &RunOptions { timings: false, ..opts.clone() })?;
                checks.extend(inner.checks.into_iter().map(|c| c.prefixed(&format!("fixture:{f}"))));
                timings.insert(format!("fixture:{f}"), t.elapsed().as_secs_f64());
            }
            checks
        }
    };
    timings.insert("total".into(), start.elapsed().as_secs_f64());
    let input = serde_json::to_value(task).expect("scenarios serialize");
    let mut report = Report::new(task.kind(), seed, tolerance, input, checks);
    if opts.timings {
        report.timings = Some(timings);
    }
    Ok(report)
}
