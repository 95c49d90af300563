//! Machine-readable check reports shared by the numeric suites.

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Schema tag of [`SuiteReport`] JSON.
pub const CHECK_SCHEMA: &str = "taumod.checks/1";

/// Outcome of one numeric check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    /// Stable name, e.g. `lemma2-homogeneity`.
    pub check: String,
    pub inputs: Value,
    pub expected: Value,
    pub observed: Value,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Orientation and normalization choices the numbers depend on.
    pub convention: String,
}

impl CheckReport {
    pub fn new(
        check: impl Into<String>,
        inputs: Value,
        expected: Value,
        observed: Value,
        residual: f64,
        tolerance: f64,
        convention: impl Into<String>,
    ) -> Self {
        CheckReport {
            check: check.into(),
            inputs,
            expected,
            observed,
            residual,
            tolerance,
            // NaN never passes
            passed: residual <= tolerance,
            convention: convention.into(),
        }
    }
}

/// A batch of checks with an overall verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema: String,
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<CheckReport>,
}

impl SuiteReport {
    pub fn new(suite: impl Into<String>, checks: Vec<CheckReport>) -> Self {
        SuiteReport {
            schema: CHECK_SCHEMA.into(),
            suite: suite.into(),
            passed: checks.iter().all(|c| c.passed),
            checks,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckReport> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn nan_fails() {
        let r = CheckReport::new("x", json!({}), json!(0), json!(0), f64::NAN, 1.0, "");
        assert!(!r.passed);
        let s = SuiteReport::new("s", vec![r]);
        assert!(!s.passed);
        assert_eq!(serde_json::to_value(&s).unwrap()["schema"], CHECK_SCHEMA);
    }
}
