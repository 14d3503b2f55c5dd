//! Output files: CSV tables, plot data, the text report and the manifest.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;
use wwgm::dynamics::{Tracked, Trajectory};
use wwgm::star_numeric::{write_binary, write_csv, GridError};

use crate::suites::Check;

#[derive(Debug, Error)]
pub enum OutputError {
    #[error("trajectory has no snapshots")]
    EmptyTrajectory,
    #[error("stride must be positive")]
    ZeroStride,
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Grid(#[from] GridError),
}

fn io(path: &Path) -> impl FnOnce(std::io::Error) -> OutputError + '_ {
    move |source| OutputError::Io { path: path.to_path_buf(), source }
}

/// Writes `contents` to `dir/name`, creating `dir`, and returns the path.
pub fn write_text(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, OutputError> {
    fs::create_dir_all(dir).map_err(io(dir))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(io(&path))?;
    Ok(path)
}

/// Snapshot index of time `t` on a fixed step `dt`.
pub fn step_index(t: f64, dt: f64) -> usize {
    (t / dt).round() as usize
}

/// Indices `0, stride, 2 stride, ...` plus the last one.
pub fn select(len: usize, stride: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..len).step_by(stride.max(1)).collect();
    if len > 0 && idx.last() != Some(&(len - 1)) {
        idx.push(len - 1);
    }
    idx
}

/// `t,x,p,trace,purity` rows.
pub fn expectations_csv<'a>(rows: impl IntoIterator<Item = &'a Tracked>) -> String {
    let mut out = String::from("t,x,p,trace,purity\n");
    for r in rows {
        out.push_str(&format!("{:.12e},{:.12e},{:.12e},{:.12e},{:.12e}\n", r.t, r.x, r.p, r.trace, r.purity));
    }
    out
}

/// Binary snapshots `snapshot_<step>.bin` and `expectations.csv` for every stored snapshot.
pub fn write_trajectory(traj: &Trajectory, dt: f64, dir: &Path) -> Result<Vec<PathBuf>, OutputError> {
    if traj.snapshots.is_empty() {
        return Err(OutputError::EmptyTrajectory);
    }
    fs::create_dir_all(dir).map_err(io(dir))?;
    let mut files = Vec::new();
    for (t, f) in traj.times.iter().zip(&traj.snapshots) {
        let path = dir.join(format!("snapshot_{:06}.bin", step_index(*t, dt)));
        write_binary(f, &path)?;
        files.push(path);
    }
    files.push(write_text(dir, "expectations.csv", &expectations_csv(&traj.tracked))?);
    Ok(files)
}

/// One `p,x,re,im` CSV per selected snapshot, named by zero-padded step index, plus
/// `expectations.csv` with one row per selected snapshot. A stride beyond the
/// trajectory length keeps the first and last snapshots only.
pub fn emit_plot_data(traj: &Trajectory, dt: f64, stride: usize, dir: &Path) -> Result<Vec<PathBuf>, OutputError> {
    if traj.snapshots.is_empty() {
        return Err(OutputError::EmptyTrajectory);
    }
    if stride == 0 {
        return Err(OutputError::ZeroStride);
    }
    fs::create_dir_all(dir).map_err(io(dir))?;
    let idx = select(traj.snapshots.len(), stride);
    let mut files = Vec::new();
    for &i in &idx {
        let path = dir.join(format!("snapshot_{:06}.csv", step_index(traj.times[i], dt)));
        write_csv(&traj.snapshots[i], &path)?;
        files.push(path);
    }
    let rows: Vec<&Tracked> = idx.iter().map(|&i| &traj.tracked[i]).collect();
    files.push(write_text(dir, "expectations.csv", &expectations_csv(rows))?);
    Ok(files)
}

/// `suite,check,value,bound,status` rows.
pub fn checks_csv(checks: &[Check]) -> String {
    let mut out = String::from("suite,check,value,bound,status\n");
    for c in checks {
        let name = c.name.replace('"', "'");
        out.push_str(&format!("{},\"{}\",{:.6e},\"{}\",{}\n", c.suite, name, c.value, c.bound, status(c.pass)));
    }
    out
}

pub fn status(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Human-readable summary; contains nothing that varies between identical runs.
pub fn report_text(command: &str, checks: &[Check], notes: &[String], error: Option<&str>) -> String {
    let failed: Vec<&Check> = checks.iter().filter(|c| !c.pass).collect();
    let ok = failed.is_empty() && error.is_none();
    let mut out = format!("wwgm {command}: {}\n", status(ok));
    out.push_str(&format!("checks: {} passed, {} failed\n", checks.len() - failed.len(), failed.len()));
    for n in notes {
        out.push_str(&format!("{n}\n"));
    }
    if !checks.is_empty() {
        out.push('\n');
    }
    for c in checks {
        out.push_str(&format!("{} [{}] {} = {:.6e} ({})\n", status(c.pass), c.suite, c.name, c.value, c.bound));
    }
    if let Some(e) = error {
        out.push_str(&format!("\nERROR: {e}\n"));
    }
    if !failed.is_empty() {
        out.push_str("\nFailures:\n");
        for c in failed {
            let detail = if c.detail.is_empty() { String::new() } else { format!(": {}", c.detail) };
            out.push_str(&format!("  [{}] {}{}\n", c.suite, c.name, detail));
        }
    }
    out
}

#[derive(Debug, Serialize)]
pub struct FileEntry {
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Hashes every file, with paths relative to `root`.
pub fn file_entries(root: &Path, files: &[PathBuf]) -> Result<Vec<FileEntry>, OutputError> {
    files
        .iter()
        .map(|p| {
            let bytes = fs::read(p).map_err(io(p))?;
            let rel = p.strip_prefix(root).unwrap_or(p);
            Ok(FileEntry { path: rel.display().to_string(), sha256: sha256_hex(&bytes), bytes: bytes.len() as u64 })
        })
        .collect()
}
