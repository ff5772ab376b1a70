//! Machine-readable reports: JSON with 17-significant-digit numbers and
//! RFC 4180 CSV datasets.
//!
//! Reports are byte-identical across runs with the same config and seed:
//! key order is fixed and wall times stay out of the document unless
//! explicitly requested.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Duration;

/// One executed check.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub residual: f64,
    pub tolerance: f64,
    pub note: Option<String>,
    pub wall: Duration,
}

impl Check {
    pub fn new(name: &str, residual: f64, tolerance: f64, wall: Duration) -> Self {
        Self {
            name: name.to_string(),
            passed: residual.is_finite() && residual <= tolerance,
            residual,
            tolerance,
            note: None,
            wall,
        }
    }

    pub fn with_note(mut self, note: String) -> Self {
        self.note = Some(note);
        self
    }
}

/// A command's full report.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub config_lines: Vec<(String, String)>,
    pub checks: Vec<Check>,
    pub timings: bool,
}

impl Report {
    pub fn new(command: &str, timings: bool) -> Self {
        Self {
            command: command.to_string(),
            config_lines: Vec::new(),
            checks: Vec::new(),
            timings,
        }
    }

    pub fn config(&mut self, key: &str, value: String) {
        self.config_lines.push((key.to_string(), value));
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Serializes the report with deterministic formatting.
    pub fn to_json(&self) -> String {
        let mut s = String::new();
        s.push_str("{\n");
        let _ = writeln!(s, "  \"command\": {},", json_string(&self.command));
        s.push_str("  \"config\": {\n");
        for (i, (k, v)) in self.config_lines.iter().enumerate() {
            let comma = if i + 1 == self.config_lines.len() {
                ""
            } else {
                ","
            };
            let _ = writeln!(s, "    {}: {}{}", json_string(k), v, comma);
        }
        s.push_str("  },\n");
        s.push_str("  \"checks\": [\n");
        for (i, c) in self.checks.iter().enumerate() {
            let comma = if i + 1 == self.checks.len() { "" } else { "," };
            let mut line = format!(
                "    {{\"name\": {}, \"status\": {}, \"residual\": {}, \"tolerance\": {}",
                json_string(&c.name),
                json_string(if c.passed { "pass" } else { "fail" }),
                json_number(c.residual),
                json_number(c.tolerance),
            );
            if let Some(note) = &c.note {
                let _ = write!(line, ", \"note\": {}", json_string(note));
            }
            if self.timings {
                let _ = write!(line, ", \"wall_ms\": {}", c.wall.as_millis());
            }
            let _ = writeln!(s, "{line}}}{comma}");
        }
        s.push_str("  ],\n");
        let _ = writeln!(
            s,
            "  \"passed\": {}",
            if self.all_passed() { "true" } else { "false" }
        );
        s.push_str("}\n");
        s
    }

    /// Writes the JSON document and prints one line per check.
    pub fn emit(&self, out: Option<&Path>) -> std::io::Result<()> {
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            println!(
                "{status} {} residual={:.3e} tolerance={:.3e}{}",
                c.name,
                c.residual,
                c.tolerance,
                c.note
                    .as_ref()
                    .map(|n| format!(" ({n})"))
                    .unwrap_or_default()
            );
        }
        if let Some(path) = out {
            if let Some(parent) = path.parent() {
                if !parent.as_os_str().is_empty() {
                    fs::create_dir_all(parent)?;
                }
            }
            fs::write(path, self.to_json())?;
            eprintln!("report written to {}", path.display());
        }
        Ok(())
    }
}

/// A number with 17 significant digits, or `null` when not finite.
pub fn json_number(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        "null".to_string()
    }
}

fn json_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Writes an RFC 4180 CSV dataset (CRLF line endings, numeric cells with
/// 17 significant digits).
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<f64>]) -> std::io::Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    let mut s = String::new();
    s.push_str(&header.join(","));
    s.push_str("\r\n");
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| json_number(*v)).collect();
        s.push_str(&cells.join(","));
        s.push_str("\r\n");
    }
    fs::write(path, s)
}
