//! Scenario runner for the wwgm engine: configuration, invariant suites,
//! evolution and contraction runs, and their output files.

pub mod commands;
pub mod config;
pub mod output;
pub mod rng;
pub mod suites;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use crate::commands::execute;
use crate::config::ScenarioConfig;
use crate::output::{checks_csv, file_entries, report_text, sha256_hex, write_text, FileEntry, OutputError};

#[derive(Serialize)]
struct Inputs<'a> {
    config_path: Option<String>,
    config_sha256: String,
    resolved: &'a BTreeMap<String, String>,
}

#[derive(Serialize)]
struct Manifest<'a> {
    command: &'a str,
    status: &'a str,
    seed: u64,
    versions: BTreeMap<&'a str, &'a str>,
    inputs: Inputs<'a>,
    threads: usize,
    wall_time_s: f64,
    files: Vec<FileEntry>,
}

/// Result of a completed run; `passed` decides the exit status.
#[derive(Debug)]
pub struct RunSummary {
    pub passed: bool,
    pub report: PathBuf,
    pub manifest: PathBuf,
}

/// Executes `cfg`, then writes `checks.csv`, `report.txt` and `manifest.json` into the output directory.
pub fn run(cfg: &ScenarioConfig, config_text: &str, config_path: Option<&Path>) -> Result<RunSummary, OutputError> {
    let start = Instant::now();
    let outcome = execute(cfg);
    let dir = &cfg.output_dir;
    let mut files = outcome.files.clone();
    if !outcome.checks.is_empty() {
        files.push(write_text(dir, "checks.csv", &checks_csv(&outcome.checks))?);
    }
    let report = write_text(dir, "report.txt", &report_text(cfg.command.name(), &outcome.checks, &outcome.notes, outcome.error.as_deref()))?;
    files.push(report.clone());
    let passed = outcome.passed();
    let manifest = Manifest {
        command: cfg.command.name(),
        status: output::status(passed),
        seed: cfg.seed,
        versions: BTreeMap::from([("wwgm", wwgm::VERSION), ("wwgm-cli", env!("CARGO_PKG_VERSION"))]),
        inputs: Inputs {
            config_path: config_path.map(|p| p.display().to_string()),
            config_sha256: sha256_hex(config_text.as_bytes()),
            resolved: &cfg.resolved,
        },
        threads: rayon::current_num_threads(),
        wall_time_s: start.elapsed().as_secs_f64(),
        files: file_entries(dir, &files)?,
    };
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    let manifest = write_text(dir, "manifest.json", &(json + "\n"))?;
    Ok(RunSummary { passed, report, manifest })
}
