//! Command reports: named checks with witnesses, scalar facts, text lines
//! and an optional bundle value, rendered as text or JSON.

use std::fmt::Write as _;

use ccalg::io::{element_record, to_json, Workspace};
use ccalg::{CheckReport, LambdaExpr};
use serde_json::{json, Map, Value};

pub struct Check {
    pub name: String,
    pub passed: bool,
    pub failures: usize,
    pub witness: Option<(String, Vec<usize>, LambdaExpr)>,
    names: Vec<String>,
}

impl Check {
    /// `names` labels the coordinates of residuals.
    pub fn from_report(rep: &CheckReport, names: &[String]) -> Self {
        Check {
            name: rep.name.clone(),
            passed: rep.passed(),
            failures: rep.failures.len(),
            witness: rep.first_failure().map(|w| (w.label.clone(), w.tuple.clone(), w.residual.clone())),
            names: names.to_vec(),
        }
    }

    pub fn flag(name: impl Into<String>, passed: bool) -> Self {
        Check { name: name.into(), passed, failures: usize::from(!passed), witness: None, names: Vec::new() }
    }
}

pub struct Report {
    pub command: String,
    pub checks: Vec<Check>,
    pub facts: Vec<(String, Value)>,
    pub lines: Vec<String>,
    pub value: Option<Workspace>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report { command: command.to_string(), checks: Vec::new(), facts: Vec::new(), lines: Vec::new(), value: None }
    }

    pub fn check(&mut self, rep: &CheckReport, names: &[String]) {
        self.checks.push(Check::from_report(rep, names));
    }

    pub fn fact(&mut self, name: &str, v: impl Into<Value>) {
        self.facts.push((name.to_string(), v.into()));
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        for c in &self.checks {
            if c.passed {
                let _ = writeln!(out, "{}: PASS", c.name);
                continue;
            }
            let _ = write!(out, "{}: FAIL", c.name);
            if let Some((label, tuple, residual)) = &c.witness {
                let args: Vec<String> = tuple.iter().map(|i| (i + 1).to_string()).collect();
                let _ = write!(out, " ({label} at ({}): residual {})", args.join(", "), residual.display_with(&c.names));
                if c.failures > 1 {
                    let _ = write!(out, " [{} failing tuples]", c.failures);
                }
            }
            out.push('\n');
        }
        for (k, v) in &self.facts {
            let shown = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            let _ = writeln!(out, "{k} = {shown}");
        }
        for l in &self.lines {
            let _ = writeln!(out, "{l}");
        }
        let _ = writeln!(out, "result: {}", if self.passed() { "PASS" } else { "FAIL" });
        out
    }

    pub fn json(&self) -> Value {
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| {
                let witness = c.witness.as_ref().map(|(label, tuple, residual)| {
                    json!({
                        "label": label,
                        "args": tuple.iter().map(|i| i + 1).collect::<Vec<_>>(),
                        "residual": element_record(residual, &c.names),
                    })
                });
                json!({ "name": c.name, "passed": c.passed, "failures": c.failures, "witness": witness })
            })
            .collect();
        let facts: Map<String, Value> = self.facts.iter().cloned().collect();
        let mut doc = json!({
            "command": self.command,
            "passed": self.passed(),
            "checks": checks,
            "facts": facts,
        });
        if let Some(ws) = &self.value {
            doc["value"] = to_json(ws);
        }
        doc
    }
}
