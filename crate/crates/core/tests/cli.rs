use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_voronoi-search"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("experiment.cfg");
    fs::write(&path, text).unwrap();
    path.display().to_string()
}

fn read(path: impl AsRef<Path>) -> String {
    fs::read_to_string(path).unwrap()
}

#[test]
fn one_step_two_robot_run_writes_two_trajectory_rows() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "[robots]\nn_robots = 2\n[strategy]\nmax_steps = 1\n");
    let out = tmp.path().join("out");
    let result = cli(&["run", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(result.status.code(), Some(0), "{}", String::from_utf8_lossy(&result.stderr));

    let trajectory = read(out.join("runs/2.inf.50_CDS_s0_trajectory.csv"));
    assert!(!trajectory.contains('\r'));
    let lines: Vec<&str> = trajectory.lines().collect();
    assert_eq!(lines[0], "step,robot,x,y");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("1,0,") && lines[2].starts_with("1,1,"));

    let history = read(out.join("runs/2.inf.50_CDS_s0_history.csv"));
    assert_eq!(history.lines().next(), Some("step,avg_uncertainty,searches_cumulative"));
    assert_eq!(history.lines().count(), 3);
    assert!(history.lines().nth(1).unwrap().starts_with("0,1,0"));
}

#[test]
fn summary_uses_case_labels() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        "[sensor]\nrange = 2\n[robots]\nn_robots = 5\nspeed = 0.5\n[strategy]\nkind = CDS, SDS\nmax_steps = 4\n",
    );
    let out = tmp.path().join("sweep");
    let result = cli(&["sweep", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(result.status.code(), Some(0));

    let summary = read(out.join("summary.csv"));
    let rows: Vec<Vec<&str>> = summary.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(
        summary.lines().next(),
        Some("case_label,strategy,seed,steps,searches,elapsed_equivalent,terminated_by")
    );
    assert_eq!(rows.len(), 2);
    for row in &rows {
        assert_eq!(row[0], "5.2.50");
        assert_eq!(row[3], "4");
        assert_eq!(row[6], "max_steps");
    }
    assert_eq!(rows[0][1], "CDS");
    assert_eq!(rows[0][4], rows[0][5]);
    assert_eq!(rows[1][1], "SDS");
    assert_eq!(rows[1][5], rows[1][3]);
    assert!(read(out.join("aggregate.csv")).starts_with("case_label,strategy,runs,failed,"));
}

#[test]
fn seed_and_strategy_flags_override_the_config() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "[sensor]\nrange = 3\n[strategy]\nmax_steps = 2\n");
    let out = tmp.path().join("o");
    let result = cli(&[
        "run", "--config", &cfg, "--out", out.to_str().unwrap(), "--seed", "7", "--strategy", "tgs",
    ]);
    assert_eq!(result.status.code(), Some(0));
    assert!(out.join("runs/5.3.50_TGS_s7_trajectory.csv").exists());
}

#[test]
fn output_dir_comes_from_config_when_not_given() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path().join("from_config");
    let cfg = write_config(
        tmp.path(),
        &format!("[strategy]\nmax_steps = 1\n[output]\ndir = {}\n", dir.display()),
    );
    assert_eq!(cli(&["run", "--config", &cfg]).status.code(), Some(0));
    assert!(dir.join("summary.csv").exists());
}

#[test]
fn validation_errors_exit_with_one() {
    let tmp = TempDir::new().unwrap();
    for text in [
        "[robots]\nn_robots = 0\n",
        "[robots]\nwheels = 3\n",
        "speed = 1\n",
        "[sensor]\nk = 1.5\n",
        "[strategy]\nkind = VGS\n",
    ] {
        let cfg = write_config(tmp.path(), text);
        let out = tmp.path().join("x");
        let result = cli(&["run", "--config", &cfg, "--out", out.to_str().unwrap()]);
        assert_eq!(result.status.code(), Some(1), "config {text:?}");
        assert!(!result.stderr.is_empty());
    }
    assert_eq!(cli(&["run"]).status.code(), Some(1));
    assert_eq!(cli(&["launch", "--config", "x"]).status.code(), Some(1));
    assert_eq!(cli(&["run", "--config", "x", "--strategy", "BFS"]).status.code(), Some(1));
}

#[test]
fn runtime_errors_exit_with_two() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "[strategy]\nmax_steps = 1\n");
    let missing = tmp.path().join("absent.cfg");
    assert_eq!(cli(&["run", "--config", missing.to_str().unwrap()]).status.code(), Some(2));

    let blocker = tmp.path().join("file");
    fs::write(&blocker, "").unwrap();
    let out = blocker.join("out");
    assert_eq!(cli(&["sweep", "--config", &cfg, "--out", out.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn failed_sweep_cells_are_reported_but_not_fatal() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "[strategy]\nkind = CDS, VGS\nmax_steps = 2\n");
    let out = tmp.path().join("o");
    let result = cli(&["sweep", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(result.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&result.stderr).contains("VGS"));
    let summary = read(out.join("summary.csv"));
    assert!(summary.lines().any(|l| l == "5.inf.50,VGS,0,,,,failed"));
}

#[test]
fn repeated_sweeps_are_byte_identical() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        "[sensor]\nrange = 2\n[strategy]\nkind = RS, CDS\nseeds = 3, 4\nmax_steps = 30\n",
    );
    let dirs = [tmp.path().join("a"), tmp.path().join("b")];
    for d in &dirs {
        assert_eq!(cli(&["sweep", "--config", &cfg, "--out", d.to_str().unwrap()]).status.code(), Some(0));
    }
    for name in ["summary.csv", "aggregate.csv", "runs/5.2.50_RS_s4_trajectory.csv"] {
        assert_eq!(fs::read(dirs[0].join(name)).unwrap(), fs::read(dirs[1].join(name)).unwrap());
    }
}
