//! Scenario runner for the `hopf-core` laboratory: configuration parsing,
//! bundled scenarios, checks and reports.

pub mod canned;
pub mod charts;
pub mod checks;
pub mod config;
pub mod expr;
pub mod report;
pub mod scenario;

use std::path::{Path, PathBuf};

use config::{Config, ConfigError};
use report::Report;
use scenario::{FileSource, Overrides, Scenario};

/// Exit status: every check passed.
pub const EXIT_PASS: i32 = 0;
/// Exit status: at least one check failed.
pub const EXIT_FAIL: i32 = 1;
/// Exit status: usage, parse or validation error.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug)]
pub enum LoadError {
    Io(String),
    Config { origin: String, error: ConfigError },
}

impl std::fmt::Display for LoadError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LoadError::Io(m) => f.write_str(m),
            LoadError::Config { origin, error } => write!(f, "{origin}: {error}"),
        }
    }
}

impl std::error::Error for LoadError {}

/// Loads a scenario from a file path, or from the bundled set when no such
/// file exists and `spec` names a bundled scenario.
pub fn load(spec: &str, ov: &Overrides) -> Result<Scenario, LoadError> {
    let path = Path::new(spec);
    let (text, files, origin) = if path.is_file() {
        let text =
            std::fs::read_to_string(path).map_err(|e| LoadError::Io(format!("{spec}: {e}")))?;
        let dir = path
            .parent()
            .map_or_else(|| PathBuf::from("."), Path::to_path_buf);
        (text, FileSource::Dir(dir), spec.to_string())
    } else if let Some(text) = canned::scenario(spec) {
        (
            text.to_string(),
            FileSource::Embedded,
            format!("<bundled {spec}>"),
        )
    } else {
        return Err(LoadError::Io(format!(
            "{spec}: no such file and no bundled scenario of that name"
        )));
    };
    let err = |error| LoadError::Config {
        origin: origin.clone(),
        error,
    };
    let cfg = Config::parse(&text).map_err(err)?;
    Scenario::from_config(&cfg, &files, ov).map_err(err)
}

/// Runs every check of the scenario in order.
pub fn run_scenario(s: &Scenario) -> Report {
    let results = s.checks.iter().map(|&k| checks::run_check(s, k)).collect();
    Report::new(s, results)
}

/// `(name, description)` of the bundled scenarios followed by the `.cfg`
/// files in `dir`, sorted by file name.
pub fn list_scenarios(dir: Option<&Path>) -> Result<Vec<(String, String)>, String> {
    let mut out: Vec<(String, String)> = canned::SCENARIOS
        .iter()
        .map(|(name, text)| (name.to_string(), describe(text)))
        .collect();
    if let Some(dir) = dir {
        let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
            .map_err(|e| format!("{}: {e}", dir.display()))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "cfg"))
            .collect();
        paths.sort();
        for p in paths {
            let text = std::fs::read_to_string(&p).map_err(|e| format!("{}: {e}", p.display()))?;
            out.push((p.display().to_string(), describe(&text)));
        }
    }
    Ok(out)
}

fn describe(text: &str) -> String {
    match Config::parse(text) {
        Ok(cfg) => cfg
            .entry("scenario", "description")
            .map(|e| e.value.clone())
            .unwrap_or_default(),
        Err(e) => format!("(unparsable: {e})"),
    }
}
