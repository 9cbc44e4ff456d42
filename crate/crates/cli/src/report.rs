//! Run reports: stable JSON schema, metrics with 17 significant digits.

use std::collections::BTreeMap;

use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::config::{Comparison, Experiment};

pub const SCHEMA: u32 = 1;

/// A float written as `{:.16e}` (17 significant digits); non-finite values
/// become `null`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw =
            RawValue::from_string(format!("{:.16e}", self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub metric: String,
    pub comparison: Comparison,
    pub threshold: Num,
    /// `None` when the run stopped before producing the metric.
    pub value: Option<Num>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub experiment: Experiment,
    /// The effective configuration, tolerances included; feeding it back as a
    /// config reproduces the run.
    pub config: serde_json::Value,
    pub pass: bool,
    /// Numerical failure (non-finite state) that ended the run early.
    pub error: Option<String>,
    pub metrics: BTreeMap<String, Num>,
    pub checks: Vec<Check>,
    pub details: BTreeMap<String, Vec<Num>>,
    /// Artifact file names, relative to the output directory.
    pub artifacts: Vec<String>,
    pub timings: BTreeMap<String, Num>,
}

/// Metric collection that refuses duplicates.
#[derive(Debug, Default)]
pub struct Metrics(BTreeMap<String, f64>);

impl Metrics {
    pub fn set(&mut self, name: &str, value: f64) {
        let prev = self.0.insert(name.to_string(), value);
        assert!(prev.is_none(), "metric `{name}` recorded twice");
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.0.get(name).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &f64)> {
        self.0.iter()
    }
}

/// Evaluate every declared tolerance; a missing or non-finite metric fails.
pub fn evaluate(metrics: &Metrics, tolerances: &[(&'static str, Comparison, f64)]) -> Vec<Check> {
    tolerances
        .iter()
        .map(|&(name, comparison, threshold)| {
            let value = metrics.get(name);
            Check {
                metric: name.to_string(),
                comparison,
                threshold: Num(threshold),
                value: value.map(Num),
                pass: value.is_some_and(|v| v.is_finite() && comparison.holds(v, threshold)),
            }
        })
        .collect()
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
