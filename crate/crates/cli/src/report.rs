//! Reports: one JSON document per run, with an optional CSV rendering of the
//! checks.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

use crate::error::CliError;

/// Outcome of one check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deviation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub detail: Value,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool) -> Self {
        Check { name: name.into(), passed, value: None, expected: None, deviation: None, tolerance: None, detail: Value::Null }
    }

    /// Passes when `deviation <= tolerance`.
    pub fn within(name: impl Into<String>, deviation: f64, tolerance: f64) -> Self {
        Check { deviation: Some(deviation), tolerance: Some(tolerance), ..Check::new(name, deviation <= tolerance) }
    }

    pub fn value(mut self, v: impl Into<String>) -> Self {
        self.value = Some(v.into());
        self
    }

    pub fn expected(mut self, v: impl Into<String>) -> Self {
        self.expected = Some(v.into());
        self
    }

    pub fn detail(mut self, d: impl Serialize) -> Self {
        self.detail = serde_json::to_value(d).unwrap_or(Value::Null);
        self
    }

    pub fn prefixed(mut self, prefix: &str) -> Self {
        self.name = format!("{prefix}/{}", self.name);
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub task: String,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    pub input: Value,
    pub checks: Vec<Check>,
    pub passed: bool,
    /// Wall-clock seconds per stage, present only when requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
}

impl Report {
    pub fn new(task: &str, seed: u64, tolerance: Option<f64>, input: Value, checks: Vec<Check>) -> Self {
        let passed = checks.iter().all(|c| c.passed);
        Report { task: task.to_string(), seed, tolerance, input, checks, passed, timings: None }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["task", "check", "passed", "value", "expected", "deviation", "tolerance"])?;
        let num = |v: Option<f64>| v.map(|x| format!("{x:e}")).unwrap_or_default();
        for c in &self.checks {
            w.write_record([
                self.task.as_str(),
                &c.name,
                if c.passed { "true" } else { "false" },
                c.value.as_deref().unwrap_or(""),
                c.expected.as_deref().unwrap_or(""),
                &num(c.deviation),
                &num(c.tolerance),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_flag_follows_the_checks() {
        let r = Report::new("x", 0, None, Value::Null, vec![Check::within("a", 0.1, 1.0), Check::within("b", 2.0, 1.0)]);
        assert!(!r.passed);
        let csv = r.to_csv().unwrap();
        assert_eq!(csv.lines().count(), 3);
        assert!(csv.lines().nth(2).unwrap().starts_with("x,b,false"));
    }

    #[test]
    fn empty_fields_are_omitted() {
        let json = serde_json::to_string(&Check::new("a", true)).unwrap();
        assert_eq!(json, r#"{"name":"a","passed":true}"#);
    }
}
