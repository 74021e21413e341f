//! Machine-readable reports.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

use crate::config::ExperimentConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// Largest observed value at most the tolerance.
    AtMost,
    /// Smallest observed value at least the tolerance.
    AtLeast,
}

/// One contract checked over a number of samples.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    /// Identity or bound the check is about.
    pub reference: String,
    pub comparison: Comparison,
    pub value: f64,
    pub tolerance: f64,
    pub samples: usize,
    pub passed: bool,
}

fn worst(values: &[f64], cmp: Comparison) -> f64 {
    if values.iter().any(|x| x.is_nan()) {
        return f64::NAN;
    }
    match cmp {
        Comparison::AtMost => values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        Comparison::AtLeast => values.iter().copied().fold(f64::INFINITY, f64::min),
    }
}

impl Check {
    pub fn new(name: &str, reference: &str, cmp: Comparison, values: &[f64], tolerance: f64) -> Self {
        let value = worst(values, cmp);
        let passed = !values.is_empty()
            && match cmp {
                Comparison::AtMost => value <= tolerance,
                Comparison::AtLeast => value >= tolerance,
            };
        Self { name: name.into(), reference: reference.into(), comparison: cmp, value, tolerance, samples: values.len(), passed }
    }

    pub fn at_most(name: &str, reference: &str, values: &[f64], tolerance: f64) -> Self {
        Self::new(name, reference, Comparison::AtMost, values, tolerance)
    }

    pub fn at_least(name: &str, reference: &str, values: &[f64], tolerance: f64) -> Self {
        Self::new(name, reference, Comparison::AtLeast, values, tolerance)
    }

    /// An exact predicate: the value is the number of violations.
    pub fn holds(name: &str, reference: &str, outcomes: &[bool]) -> Self {
        let failures = outcomes.iter().filter(|&&b| !b).count() as f64;
        let mut c = Self::new(name, reference, Comparison::AtMost, &[failures], 0.0);
        c.samples = outcomes.len();
        c.passed = !outcomes.is_empty() && failures == 0.0;
        c
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<Check>,
    /// Reported quantities that are not contracts.
    pub observations: BTreeMap<String, Value>,
}

impl SuiteReport {
    pub fn new(suite: &str, checks: Vec<Check>, observations: BTreeMap<String, Value>) -> Self {
        Self { suite: suite.into(), passed: checks.iter().all(|c| c.passed), checks, observations }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub passed: bool,
    /// `suite/check` names of failed checks.
    pub failures: Vec<String>,
    pub suites: Vec<SuiteReport>,
    pub config: ExperimentConfig,
}

impl Report {
    pub fn new(command: &str, config: &ExperimentConfig, suites: Vec<SuiteReport>) -> Self {
        let failures: Vec<String> = suites
            .iter()
            .flat_map(|s| s.checks.iter().filter(|c| !c.passed).map(move |c| format!("{}/{}", s.suite, c.name)))
            .collect();
        // where the files go is not part of the result
        let config = ExperimentConfig { output_dir: None, ..config.clone() };
        Self { command: command.into(), passed: failures.is_empty(), failures, suites, config }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nan_fails() {
        assert!(!Check::at_most("x", "r", &[1e-20, f64::NAN], 1.0).passed);
        assert!(!Check::at_least("x", "r", &[], 1.0).passed);
        assert!(Check::at_least("x", "r", &[2.0, 3.0], 1.0).passed);
        let h = Check::holds("x", "r", &[true, false, true]);
        assert_eq!((h.value, h.samples, h.passed), (1.0, 3, false));
    }
}
