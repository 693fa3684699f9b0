//! Suite reports. The JSON serialization is deterministic for a fixed
//! configuration and seed: wall-clock timings are reported on stderr by the
//! CLI, never inside the JSON document.

use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub mode: &'static str,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip)]
    pub millis: u128,
}

impl CheckResult {
    pub fn pass(name: impl Into<String>, mode: &'static str) -> Self {
        CheckResult {
            name: name.into(),
            mode,
            status: "pass",
            detail: None,
            millis: 0,
        }
    }

    pub fn fail(name: impl Into<String>, mode: &'static str, detail: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            mode,
            status: "fail",
            detail: Some(detail.into()),
            millis: 0,
        }
    }

    pub fn of(name: impl Into<String>, mode: &'static str, ok: bool, detail: &str) -> Self {
        if ok {
            CheckResult::pass(name, mode)
        } else {
            CheckResult::fail(name, mode, detail)
        }
    }

    pub fn passed(&self) -> bool {
        self.status == "pass"
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub suite: String,
    pub group: String,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

impl SuiteReport {
    pub fn new(suite: &str, group: &str, seed: u64, checks: Vec<CheckResult>) -> Self {
        let passed = checks.iter().all(|c| c.passed());
        SuiteReport {
            schema_version: SCHEMA_VERSION,
            suite: suite.into(),
            group: group.into(),
            seed,
            checks,
            passed,
        }
    }
}
