//! Command reports: named checks with details, warnings and a data payload.

use serde_json::{json, Value};

use cosegal_core::homotopy::{ChainCheck, CosegalReport, KInjectivityEntry};
use cosegal_core::precat::Report as Violations;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub theorem: String,
    pub ok: bool,
    pub detail: Value,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommandReport {
    pub command: String,
    pub checks: Vec<Check>,
    pub warnings: Vec<String>,
    pub data: Value,
}

impl CommandReport {
    pub fn new(command: &str) -> CommandReport {
        CommandReport { command: command.to_string(), checks: Vec::new(), warnings: Vec::new(), data: json!({}) }
    }

    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn check(&mut self, theorem: &str, ok: bool, detail: Value) {
        self.checks.push(Check { theorem: theorem.to_string(), ok, detail });
    }

    /// A check that passes iff `v` has no violations; the violations become the detail.
    pub fn violations(&mut self, theorem: &str, v: &Violations) {
        self.check(theorem, v.is_ok(), json!({ "violations": violations_json(v) }));
    }

    pub fn set(&mut self, key: &str, v: Value) {
        self.data[key] = v;
    }

    pub fn to_json(&self) -> Value {
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| json!({ "theorem": c.theorem, "ok": c.ok, "detail": c.detail }))
            .collect();
        json!({
            "command": self.command,
            "ok": self.ok(),
            "checks": checks,
            "warnings": self.warnings,
            "data": self.data,
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{}: {}\n", self.command, if self.ok() { "ok" } else { "FAILED" });
        for c in &self.checks {
            let detail = match &c.detail {
                Value::Object(m) if m.is_empty() => String::new(),
                Value::Null => String::new(),
                d => format!(" {}", d),
            };
            s.push_str(&format!("{} theorem: {}{}\n", if c.ok { "PASS" } else { "FAIL" }, c.theorem, detail));
        }
        for w in &self.warnings {
            s.push_str(&format!("warning: {}\n", w));
        }
        s
    }
}

pub fn violations_json(v: &Violations) -> Vec<Value> {
    v.violations
        .iter()
        .map(|x| json!({ "kind": x.kind, "location": x.location, "lhs": x.lhs, "rhs": x.rhs }))
        .collect()
}

pub fn chain_check_json(objects: &[String], c: &ChainCheck) -> Value {
    json!({
        "chain": cosegal_core::shapes::chain_to_string(objects, &c.chain),
        "check": c.check,
        "verdict": c.verdict,
        "witness-dims": [c.dims.0, c.dims.1],
    })
}

pub fn cosegal_json(objects: &[String], r: &CosegalReport) -> Vec<Value> {
    r.entries.iter().map(|c| chain_check_json(objects, c)).collect()
}

pub fn k_entry_json(objects: &[String], e: &KInjectivityEntry) -> Value {
    json!({
        "chain": cosegal_core::shapes::chain_to_string(objects, &e.chain),
        "trivial-fibration": e.predicate,
        "lifts-against-generators": e.lifting,
        "witness-dims": [e.dims.0, e.dims.1],
    })
}
