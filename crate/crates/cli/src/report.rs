use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: Value,
    pub result: Value,
    pub checks: Vec<Check>,
    pub ok: bool,
}

impl Report {
    pub fn new(command: Value) -> Report {
        Report { command, result: Value::Null, checks: Vec::new(), ok: true }
    }

    pub fn check(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.ok &= pass;
        self.checks.push(Check { name: name.into(), pass, detail: detail.into() });
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn summary(&self) -> String {
        let passed = self.checks.iter().filter(|c| c.pass).count();
        let mut s = format!("{passed}/{} checks passed", self.checks.len());
        for c in self.checks.iter().filter(|c| !c.pass) {
            s.push_str(&format!("\n  FAIL {}: {}", c.name, c.detail));
        }
        s
    }
}
