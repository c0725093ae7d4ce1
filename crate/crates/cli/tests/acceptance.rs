//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits non-zero
//! when any criterion fails.

use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use deligne_cli::suites::{self, SuiteConfig};
use deligne_cli::{run_scenario, Check, RunOptions, Scenario, Task};
use deligne_toolkit::chern_simons::PURE_GAUGE_RATIO;
use deligne_toolkit::deligne::builtin::{monopole_potential, monopole_two_chart};
use deligne_toolkit::holonomy::{holonomy, integrate_chain, HolonomyOptions};
use deligne_toolkit::simplicial::meshes::{hemisphere_subordination, UvSphere};
use deligne_toolkit::CircleValue;

const SEED: u64 = 2024;

struct Outcome {
    passed: bool,
    summary: String,
}

impl Outcome {
    fn new(passed: bool, summary: impl Into<String>) -> Self {
        Outcome { passed, summary: summary.into() }
    }
}

type Criterion = fn() -> Outcome;

/// Every check passed and every deviation is within `tol`.
fn within(checks: &[Check], tol: f64) -> (bool, f64) {
    let worst = checks.iter().filter_map(|c| c.deviation).fold(0.0, f64::max);
    (!checks.is_empty() && checks.iter().all(|c| c.passed) && worst <= tol, worst)
}

fn failing(checks: &[Check]) -> Vec<&str> {
    checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect()
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn config() -> SuiteConfig {
    SuiteConfig::new(SEED)
}

fn holonomy_correctness() -> Outcome {
    let sphere = UvSphere::new(16, 8).expect("sphere mesh");
    let triangles = sphere.complex.count(2);
    let equator = sphere.equator().expect("equator");
    let north = sphere.north_hemisphere().expect("hemisphere");
    let sub = hemisphere_subordination(&sphere.complex);
    let mut ok = triangles >= 128;
    let (mut worst, mut slowest) = (0.0f64, Duration::ZERO);
    for n in 0..=3 {
        let (hol, took) = timed(|| holonomy(&monopole_two_chart(n), &equator, &sub, &HolonomyOptions::default()));
        let Ok(hol) = hol else { return Outcome::new(false, format!("n={n}: holonomy failed")) };
        // Stokes oracle: the flux through the northern hemisphere.
        let flux = integrate_chain(&north, north.chain(), &monopole_potential(n, true).exterior_derivative(), 8);
        let sign = CircleValue::float(n as f64 / 2.0);
        let dev = hol.value.distance(&sign).max(hol.value.distance(&CircleValue::float(flux)));
        worst = worst.max(dev);
        slowest = slowest.max(took);
        ok &= dev <= 1e-6 && took < Duration::from_secs(1);
    }
    Outcome::new(ok, format!("{triangles} triangles, worst {worst:.1e} (tol 1e-6), slowest {:.3} s (limit 1 s)", slowest.as_secs_f64()))
}

fn representative_invariance() -> Outcome {
    let cfg = config();
    let (checks, took) = timed(|| suites::representative_invariance(&cfg));
    let checks = checks.expect("invariance suite");
    let (ok, worst) = within(&checks, 1e-6);
    let ok = ok && cfg.coboundaries == 20 && checks.len() == 6 && took < Duration::from_secs(30);
    Outcome::new(
        ok,
        format!(
            "3 cocycles x {} coboundaries + subdivision, worst {worst:.1e} (tol 1e-6), {:.1} s (limit 30 s)",
            cfg.coboundaries,
            took.as_secs_f64()
        ),
    )
}

fn character_property() -> Outcome {
    let checks = suites::character_property(&config()).expect("character suite");
    let (ok, worst) = within(&checks, 1e-5);
    Outcome::new(ok && checks.len() == 10, format!("{} chains, worst {worst:.1e} (tol 1e-5)", checks.len()))
}

fn transgression_diagram() -> Outcome {
    let cfg = config();
    let checks = suites::transgression(&cfg).expect("transgression suite");
    let pick = |prefix: &str| -> Vec<Check> { checks.iter().filter(|c| c.name.starts_with(prefix)).cloned().collect() };
    let (diagram, flat) = (pick("diagram/"), pick("flat/"));
    let (d_ok, d_worst) = within(&diagram, 1e-6);
    let (f_ok, f_worst) = within(&flat, 1e-12);
    // Both sides must be non-trivial for the comparison to mean anything.
    let scale = diagram.iter().filter_map(|c| c.detail.get("curvature_scale")?.as_f64()).fold(f64::INFINITY, f64::min);
    let ok = d_ok && f_ok && scale > 1e-2 && flat.len() == 4 && cfg.diagram_points == 100 && checks.iter().all(|c| c.passed);
    Outcome::new(
        ok,
        format!(
            "diagram worst {d_worst:.1e} at {} points (tol 1e-6, curvature scale {scale:.2}), flat sweep of {} worst {f_worst:.1e}",
            cfg.diagram_points,
            flat.len()
        ),
    )
}

fn finite_exactness() -> Outcome {
    let (checks, took) = timed(|| suites::finite_exactness(&config()));
    let checks = checks.expect("finite suite");
    let ok = checks.iter().all(|c| c.passed) && took < Duration::from_secs(60);
    Outcome::new(ok, format!("{} exact checks, failing {:?}, {:.1} s (limit 60 s)", checks.len(), failing(&checks), took.as_secs_f64()))
}

fn multiplicativity() -> Outcome {
    let checks = suites::multiplicativity(&config()).expect("multiplicativity suite");
    let groups = ["psi/Z2", "psi/Z3", "psi/Z4"].iter().all(|n| checks.iter().any(|c| c.name == *n && c.passed));
    let detected = checks.iter().any(|c| c.name == "psi/perturbed-detected" && c.passed);
    Outcome::new(groups && detected && checks.iter().all(|c| c.passed), format!("Z2, Z3, Z4 exact: {groups}, perturbed detected: {detected}"))
}

fn chern_weil_integrality() -> Outcome {
    let cfg = config();
    let (checks, took) = timed(|| suites::chern_weil_integrality(&cfg));
    let checks = checks.expect("chern-weil suite");
    let (ok, worst) = within(&checks, 1e-4);
    let ok = ok && checks.len() == 9 && cfg.flux_grid == 64 && took < Duration::from_secs(60);
    Outcome::new(ok, format!("9 pairs on {0}^2 x {0}^2, worst {worst:.1e} (tol 1e-4), {1:.1} s (limit 60 s)", cfg.flux_grid, took.as_secs_f64()))
}

fn gauge_shift() -> Outcome {
    let checks = suites::gauge_shift(&config()).expect("gauge suite");
    // Level-1 calibration: the unit bump on the zero background fixes ρ.
    let calibration = checks.iter().find(|c| c.name == "shift/zero/w=1").and_then(|c| {
        let shift: f64 = c.value.as_ref()?.parse().ok()?;
        let degree = c.detail.get("degree_oracle")?.as_f64()?;
        Some((shift / degree).round() as i64)
    });
    let (ok, worst) = within(&checks, 1e-3);
    let shifts = checks.iter().filter(|c| c.name.starts_with("shift/")).count();
    let ok = ok && calibration == Some(PURE_GAUGE_RATIO) && shifts == 8;
    Outcome::new(
        ok,
        format!("ρ = {calibration:?} (documented {PURE_GAUGE_RATIO}), deg in {{-1,0,1,2}} x 2 backgrounds, worst {worst:.1e} (tol 1e-3)"),
    )
}

fn path_vs_explicit() -> Outcome {
    let checks = suites::path_vs_explicit(&config()).expect("path suite");
    let (ok, worst) = within(&checks, 1e-4);
    Outcome::new(ok && checks.len() == 5, format!("{} connections, worst {worst:.1e} (tol 1e-4)", checks.len()))
}

fn cfield_equivalence() -> Outcome {
    let checks = suites::cfield_equivalence(&config()).expect("cfield suite");
    let (ok, worst) = within(&checks, 1e-4);
    let cycles = checks.iter().filter_map(|c| Some(c.detail.get("cycles")?.as_array()?.len())).min().unwrap_or(0);
    Outcome::new(ok && checks.len() == 3 && cycles >= 5, format!("3 gauge elements x {cycles} cycles, worst {worst:.1e} (tol 1e-4)"))
}

fn determinism() -> Outcome {
    let scenario = Scenario { seed: SEED, tolerance: None, task: Task::Suite { names: Vec::new(), fixtures: Vec::new() } };
    let run = || run_scenario(&scenario, Path::new("."), &RunOptions::default()).expect("suite run").to_json();
    let (first, second) = (run(), run());
    Outcome::new(first == second, format!("two full-suite reports, {} bytes, identical: {}", first.len(), first == second))
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 11] = [
        ("holonomy correctness", holonomy_correctness),
        ("subdivision and representative invariance", representative_invariance),
        ("differential-character property", character_property),
        ("transgression diagram", transgression_diagram),
        ("finite-group exactness", finite_exactness),
        ("multiplicativity", multiplicativity),
        ("Chern-Weil integrality", chern_weil_integrality),
        ("CS gauge shift", gauge_shift),
        ("CS path vs explicit", path_vs_explicit),
        ("C-field gauge equivalence", cfield_equivalence),
        ("determinism", determinism),
    ];
    let mut all = true;
    for (i, (name, criterion)) in criteria.iter().enumerate() {
        let outcome = criterion();
        all &= outcome.passed;
        println!("{} {:>2} {name}: {}", if outcome.passed { "PASS" } else { "FAIL" }, i + 1, outcome.summary);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
