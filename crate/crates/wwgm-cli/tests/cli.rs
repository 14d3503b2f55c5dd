use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use wwgm::dynamics::{Picture, Tracked, Trajectory};
use wwgm::gaussian_core::{coherent_wigner, PhasePoint};
use wwgm::star_numeric::{sample, GridSpec};
use wwgm_cli::commands::r_squared;
use wwgm_cli::output::{emit_plot_data, sha256_hex, OutputError};

fn wwgm(args: &[&str], dir: &Path, config: &str, env: &[(&str, &str)]) -> Output {
    let cfg = dir.join("scenario.cfg");
    fs::write(&cfg, config).unwrap();
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_wwgm"));
    cmd.args(args).arg("--config").arg(&cfg).arg("--out").arg(dir.join("out")).env_remove("WWGM_THREADS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join("out").join(name)).unwrap()
}

fn column(csv: &str, idx: usize) -> Vec<f64> {
    csv.lines().skip(1).map(|l| l.split(',').nth(idx).unwrap().parse().unwrap()).collect()
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    for text in ["grid.Q = 1\n", "grid.N = 100\n", "evolution.dt = 0.3\n", "no equals sign\n", "command = evolve\n"] {
        let out = wwgm(&["verify"], dir.path(), text, &[]);
        assert_eq!(out.status.code(), Some(2), "{text}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("config error"));
    }
    let out = wwgm(&["verify"], dir.path(), "", &[("WWGM_THREADS", "zero")]);
    assert_eq!(out.status.code(), Some(2));
    let missing = Command::new(env!("CARGO_BIN_EXE_wwgm")).args(["verify", "--config", "/nonexistent/file"]).output().unwrap();
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn harmonic_period_return_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "evolution.t_end = 2pi\nevolution.dt = 0.002pi\nevolution.stride = 250\n";
    let out = wwgm(&["evolve"], dir.path(), cfg, &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let report = read(dir.path(), "report.txt");
    let line = report.lines().find(|l| l.contains("period return error")).unwrap();
    assert!(line.starts_with("PASS"));
    let value: f64 = line.split(" = ").nth(1).unwrap().split(' ').next().unwrap().parse().unwrap();
    assert!(value < 1e-3);
    assert_eq!(column(&read(dir.path(), "trajectory/expectations.csv"), 0).len(), 5);
}

#[test]
fn manifest_lists_every_file_with_its_hash() {
    let dir = tempfile::tempdir().unwrap();
    let out = wwgm(&["evolve", "--seed", "17"], dir.path(), "evolution.t_end = 0.1\nevolution.stride = 50\n", &[]);
    assert_eq!(out.status.code(), Some(0));
    let root = dir.path().join("out");
    let m: serde_json::Value = serde_json::from_str(&read(dir.path(), "manifest.json")).unwrap();
    assert_eq!(m["seed"], 17);
    assert_eq!(m["command"], "evolve");
    assert_eq!(m["inputs"]["resolved"]["evolution.t_end"], "0.1");
    assert!(m["wall_time_s"].as_f64().unwrap() >= 0.0);
    let files = m["files"].as_array().unwrap();
    let listed: Vec<&str> = files.iter().map(|f| f["path"].as_str().unwrap()).collect();
    for name in ["report.txt", "checks.csv", "trajectory/expectations.csv", "trajectory/snapshot_000000.bin", "trajectory/snapshot_000100.bin"] {
        assert!(listed.contains(&name), "{name} missing from {listed:?}");
    }
    for f in files {
        let bytes = fs::read(root.join(f["path"].as_str().unwrap())).unwrap();
        assert_eq!(f["sha256"], sha256_hex(&bytes));
        assert_eq!(f["bytes"], bytes.len() as u64);
    }
}

#[test]
fn free_particle_plot_data_is_affine_in_time() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "hamiltonian.potential = 0\nevolution.picture = schrodinger\nevolution.stride = 100\nplot.stride = 2\n";
    let out = wwgm(&["report"], dir.path(), cfg, &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let exp = read(dir.path(), "plot/expectations.csv");
    let (t, x) = (column(&exp, 0), column(&exp, 1));
    assert_eq!(t.len(), 6);
    assert!(r_squared(&t, &x) > 0.999999);
    for step in ["000000", "000200", "000800", "001000"] {
        let csv = read(dir.path(), &format!("plot/snapshot_{step}.csv"));
        assert!(csv.starts_with("p,x,re,im\n"));
        assert_eq!(csv.lines().count(), 1 + 128 * 128);
    }
}

fn one_snapshot_trajectory() -> Trajectory {
    let f = sample(&coherent_wigner(&PhasePoint::d1(0.1, 0.0)), GridSpec::new(32, 6.0).unwrap()).unwrap();
    let row = Tracked { t: 0.0, x: 0.0, p: 0.2, trace: 1.0, purity: 1.0 };
    Trajectory { picture: Picture::Liouville, times: vec![0.0], snapshots: vec![f], tracked: vec![row] }
}

#[test]
fn plot_data_degenerate_cases() {
    let dir = tempfile::tempdir().unwrap();
    let single = one_snapshot_trajectory();
    let files = emit_plot_data(&single, 0.01, 1, dir.path()).unwrap();
    assert_eq!(files.len(), 2);
    assert_eq!(fs::read_to_string(dir.path().join("expectations.csv")).unwrap().lines().count(), 2);

    let mut long = one_snapshot_trajectory();
    for i in 1..5 {
        long.times.push(i as f64 * 0.5);
        long.snapshots.push(long.snapshots[0].clone());
        long.tracked.push(Tracked { t: i as f64 * 0.5, ..long.tracked[0] });
    }
    let sub = dir.path().join("long");
    let files = emit_plot_data(&long, 0.01, 1000, &sub).unwrap();
    let names: Vec<String> = files.iter().map(|p| p.file_name().unwrap().to_string_lossy().into_owned()).collect();
    assert_eq!(names, ["snapshot_000000.csv", "snapshot_000200.csv", "expectations.csv"]);

    let empty = Trajectory { picture: Picture::Liouville, times: vec![], snapshots: vec![], tracked: vec![] };
    assert!(matches!(emit_plot_data(&empty, 0.01, 1, dir.path()), Err(OutputError::EmptyTrajectory)));
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let err = emit_plot_data(&single, 0.01, 1, &blocker.join("sub")).unwrap_err();
    assert!(err.to_string().contains("file"), "{err}");
}

#[test]
fn contract_reports_fourth_order_bracket_convergence() {
    let dir = tempfile::tempdir().unwrap();
    let out = wwgm(&["contract"], dir.path(), "contraction.k_list = 4,8,16,32\n", &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let csv = read(dir.path(), "contract_bracket.csv");
    assert!(csv.starts_with("k,error,fitted_slope_so_far\n"));
    let slope: f64 = csv.lines().last().unwrap().split(',').nth(2).unwrap().parse().unwrap();
    assert!((slope + 4.0).abs() < 0.1, "{slope}");
    let summary: serde_json::Value = serde_json::from_str(&read(dir.path(), "contract_summary.json")).unwrap();
    assert!(summary.as_array().unwrap().iter().all(|t| t["pass"] == true));
}

#[test]
fn koopman_modulus_follows_liouville_transport() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "hamiltonian.potential = 0,0,0.5,0,0.02\ngrid.L = 12\nevolution.t_end = 0.5\nevolution.dt = 4e-4\n";
    let out = wwgm(&["koopman"], dir.path(), cfg, &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn failing_checks_exit_with_one_and_are_enumerated() {
    let dir = tempfile::tempdir().unwrap();
    let out = wwgm(&["verify"], dir.path(), "verify.suites = weyl_algebra\n", &[]);
    assert_eq!(out.status.code(), Some(1));
    let report = read(dir.path(), "report.txt");
    assert!(report.starts_with("wwgm verify: FAIL\n"));
    assert!(report.contains("Failures:\n  [weyl_algebra] left_right_59"));
    let ok = wwgm(&["verify"], dir.path(), "verify.suites = gaussian_core\n", &[]);
    assert_eq!(ok.status.code(), Some(0));
}

#[test]
fn numerical_failure_is_reported_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = wwgm(&["evolve"], dir.path(), "grid.L = 3\ngrid.N = 32\n", &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(read(dir.path(), "report.txt").contains("ERROR: "));
}
