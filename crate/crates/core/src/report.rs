//! Structured pass/fail verdicts.

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub id: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, id: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(CheckResult {
            id: id.into(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// One line per failure, for assertion messages.
    pub fn summary(&self) -> String {
        let failed: Vec<String> = self
            .failures()
            .map(|c| format!("{}: {}", c.id, c.detail))
            .collect();
        if failed.is_empty() {
            format!("{} checks passed", self.checks.len())
        } else {
            failed.join("\n")
        }
    }
}
