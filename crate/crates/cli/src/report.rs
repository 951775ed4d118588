use std::time::Instant;

use serde_json::{json, Value};

pub const SCHEMA_VERSION: u32 = 1;

/// Outcome of one named check.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    /// Items examined (residuals, pairs, entries).
    pub count: usize,
    pub failures: usize,
    pub detail: Value,
    pub millis: Option<u128>,
}

impl Check {
    pub fn new(name: &str, count: usize, failures: usize, detail: Value) -> Self {
        Check { name: name.into(), pass: failures == 0, count, failures, detail, millis: None }
    }

    /// A check that could not be completed; counts as one failure.
    pub fn errored(name: &str, err: impl std::fmt::Display) -> Self {
        Check { name: name.into(), pass: false, count: 0, failures: 1, detail: json!({"error": err.to_string()}), millis: None }
    }
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub command: String,
    pub params: Value,
    pub checks: Vec<Check>,
    timings: bool,
}

impl VerificationReport {
    pub fn new(command: &str, params: Value, timings: bool) -> Self {
        VerificationReport { command: command.into(), params, checks: Vec::new(), timings }
    }

    /// Runs `f`, recording its time unless timings are off.
    pub fn run(&mut self, name: &str, f: impl FnOnce() -> attenuated_core::Result<Check>) {
        let t = Instant::now();
        let mut c = f().unwrap_or_else(|e| Check::errored(name, e));
        if self.timings {
            c.millis = Some(t.elapsed().as_millis());
        }
        self.checks.push(c);
    }

    pub fn passes(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema_version": SCHEMA_VERSION,
            "tool": format!("attenuated {}", env!("CARGO_PKG_VERSION")),
            "command": self.command,
            "params": self.params,
            "pass": self.passes(),
            "checks": self.checks.iter().map(|c| {
                let mut v = json!({
                    "name": c.name,
                    "status": if c.pass { "pass" } else { "fail" },
                    "count": c.count,
                    "failures": c.failures,
                    "detail": c.detail,
                });
                if let Some(ms) = c.millis {
                    v["millis"] = json!(ms);
                }
                v
            }).collect::<Vec<_>>(),
        })
    }

    /// `name,status,count,failures[,millis]`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from(if self.timings { "name,status,count,failures,millis\n" } else { "name,status,count,failures\n" });
        for c in &self.checks {
            s.push_str(&format!("{},{},{},{}", c.name, if c.pass { "pass" } else { "fail" }, c.count, c.failures));
            if let Some(ms) = c.millis {
                s.push_str(&format!(",{ms}"));
            }
            s.push('\n');
        }
        s
    }
}
