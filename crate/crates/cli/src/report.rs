//! Report assembly and output in JSON, text and CSV.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::scenario::{Scenario, Tolerances};

pub const TOOL: &str = "hopf-lab";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub summary: String,
    pub metrics: BTreeMap<String, Value>,
    pub tables: Vec<Table>,
}

impl CheckResult {
    pub fn new(name: &str) -> Self {
        Self {
            name: name.to_string(),
            passed: true,
            summary: String::new(),
            metrics: BTreeMap::new(),
            tables: Vec::new(),
        }
    }

    pub fn metric(&mut self, key: &str, value: impl Into<Value>) {
        self.metrics.insert(key.to_string(), value.into());
    }

    pub fn fail(&mut self, why: impl Into<String>) {
        self.passed = false;
        let why = why.into();
        if self.summary.is_empty() {
            self.summary = why;
        } else {
            self.summary = format!("{}; {why}", self.summary);
        }
    }

    /// A numeric metric, or `None` if absent or not a number.
    pub fn number(&self, key: &str) -> Option<f64> {
        self.metrics.get(key)?.as_f64()
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub scenario: String,
    pub description: String,
    pub space: String,
    pub object: String,
    pub seed: u64,
    pub fd_step: f64,
    pub tolerances: Tolerances,
    pub config: BTreeMap<String, String>,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_seconds: Option<f64>,
}

impl Report {
    pub fn new(s: &Scenario, checks: Vec<CheckResult>) -> Self {
        let passed = checks.iter().all(|c| c.passed);
        let kind = match s.space.curvature() {
            hopf_core::space_forms::Curvature::Projective => "CP",
            hopf_core::space_forms::Curvature::Hyperbolic => "CH",
        };
        Self {
            tool: TOOL.to_string(),
            version: VERSION.to_string(),
            scenario: s.name.clone(),
            description: s.description.clone(),
            space: format!("{kind}^{}", s.space.n()),
            object: s.object.kind().to_string(),
            seed: s.seed,
            fd_step: s.fd_step,
            tolerances: s.tol.clone(),
            config: s.echo.clone(),
            checks,
            passed,
            runtime_seconds: None,
        }
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.tool, self.version);
        let _ = writeln!(out, "scenario: {} ({})", self.scenario, self.description);
        let _ = writeln!(
            out,
            "space: {}  object: {}  seed: {}  fd_step: {:e}",
            self.space, self.object, self.seed, self.fd_step
        );
        if let Some(t) = self.runtime_seconds {
            let _ = writeln!(out, "runtime: {t:.3} s");
        }
        for c in &self.checks {
            let _ = writeln!(
                out,
                "\n[{}] {}: {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.summary
            );
            for (k, v) in &c.metrics {
                let _ = writeln!(out, "  {k} = {}", cell(v));
            }
            for t in &c.tables {
                if t.rows.len() <= 12 {
                    let _ = writeln!(out, "  table {}:", t.name);
                    let _ = writeln!(out, "    {}", t.columns.join("  "));
                    for r in &t.rows {
                        let cells: Vec<String> = r.iter().map(cell).collect();
                        let _ = writeln!(out, "    {}", cells.join("  "));
                    }
                } else {
                    let _ = writeln!(out, "  table {}: {} rows (see CSV)", t.name, t.rows.len());
                }
            }
        }
        let _ = writeln!(
            out,
            "\nresult: {}",
            if self.passed { "PASS" } else { "FAIL" }
        );
        out
    }

    /// Writes `report.json`, `report.txt` and one CSV per table.
    pub fn write_to(&self, dir: &Path) -> std::io::Result<Vec<std::path::PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        let json = dir.join("report.json");
        std::fs::write(&json, self.to_json())?;
        written.push(json);
        let txt = dir.join("report.txt");
        std::fs::write(&txt, self.to_text())?;
        written.push(txt);
        for c in &self.checks {
            for t in &c.tables {
                let path = dir.join(format!("{}_{}.csv", c.name, t.name));
                let mut w = csv::Writer::from_path(&path)?;
                w.write_record(&t.columns)?;
                for r in &t.rows {
                    w.write_record(r.iter().map(cell))?;
                }
                w.flush()?;
                written.push(path);
            }
        }
        Ok(written)
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// JSON number, or null for non-finite values.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

pub fn opt(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

pub fn list(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}
