//! Pass/fail records shared by every verification battery.

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), pass, detail: detail.into() }
    }

    pub fn text_line(&self) -> String {
        let tag = if self.pass { "PASS" } else { "FAIL" };
        if self.detail.is_empty() {
            format!("{tag} {}", self.name)
        } else {
            format!("{tag} {} :: {}", self.name, self.detail)
        }
    }
}

/// A named battery of checks.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub details: Vec<serde_json::Value>,
}

impl SuiteReport {
    pub fn new(suite: impl Into<String>, seed: u64) -> Self {
        Self { suite: suite.into(), seed, checks: vec![], details: vec![] }
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, cs: impl IntoIterator<Item = Check>) {
        self.checks.extend(cs);
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.pass).count()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.pass)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("suite {} (seed {})\n", self.suite, self.seed);
        for c in &self.checks {
            s.push_str(&c.text_line());
            s.push('\n');
        }
        s.push_str(&format!("{} checks, {} failed\n", self.checks.len(), self.failures()));
        s
    }
}
