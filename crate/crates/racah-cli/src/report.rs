//! Machine-readable report schema and the human-readable table printer.
//!
//! JSON determinism contract: identical flags produce byte-identical JSON
//! except for the trailing wall_time_ms field. Maps are BTreeMaps (sorted
//! keys) and struct fields of `Check` are declared in alphabetical order
//! so that a parse -> serialize round trip through a generic JSON value
//! reproduces the bytes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub residual: f64,
    pub tolerance: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub parameters: BTreeMap<String, serde_json::Value>,
    pub checks: Vec<Check>,
    pub adopted_conventions: BTreeMap<String, String>,
    pub wall_time_ms: u128,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            parameters: BTreeMap::new(),
            checks: Vec::new(),
            adopted_conventions: BTreeMap::new(),
            wall_time_ms: 0,
        }
    }

    pub fn param_f64(&mut self, key: &str, value: f64) {
        self.parameters.insert(
            key.to_string(),
            serde_json::Number::from_f64(value)
                .map(serde_json::Value::Number)
                .unwrap_or(serde_json::Value::Null),
        );
    }

    pub fn param_usize(&mut self, key: &str, value: usize) {
        self.parameters
            .insert(key.to_string(), serde_json::Value::from(value));
    }

    pub fn param_str(&mut self, key: &str, value: &str) {
        self.parameters
            .insert(key.to_string(), serde_json::Value::from(value));
    }

    pub fn convention(&mut self, key: &str, value: &str) {
        self.adopted_conventions
            .insert(key.to_string(), value.to_string());
    }

    pub fn check(&mut self, name: &str, residual: f64, tolerance: f64) {
        self.checks.push(Check {
            name: name.to_string(),
            pass: residual <= tolerance,
            residual,
            tolerance,
        });
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// Human-readable table on stdout.
    pub fn print_table(&self) {
        println!("command: {}", self.command);
        let params: Vec<String> = self
            .parameters
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        println!("parameters: {}", params.join(" "));
        println!(
            "{:<34} {:>13} {:>10}  status",
            "check", "residual", "tolerance"
        );
        for c in &self.checks {
            println!(
                "{:<34} {:>13.4e} {:>10.1e}  {}",
                c.name,
                c.residual,
                c.tolerance,
                if c.pass { "pass" } else { "FAIL" }
            );
        }
        for (k, v) in &self.adopted_conventions {
            println!("note: {k}: {v}");
        }
        println!(
            "result: {} ({} checks, {} ms)",
            if self.all_pass() { "PASS" } else { "FAIL" },
            self.checks.len(),
            self.wall_time_ms
        );
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// Checks table as RFC-4180 CSV with a header row.
    pub fn checks_csv(&self) -> String {
        let mut out = String::from("name,residual,tolerance,pass\r\n");
        for c in &self.checks {
            out.push_str(&format!(
                "{},{},{},{}\r\n",
                csv_field(&c.name),
                c.residual,
                c.tolerance,
                c.pass
            ));
        }
        out
    }
}

/// Quote a CSV field if it contains a comma, quote or newline.
fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') || s.contains('\r') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
