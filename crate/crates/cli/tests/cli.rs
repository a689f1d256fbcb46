//! End-to-end runs of the compiled binary: exit codes, file layout,
//! determinism and float round-tripping.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use splinecdr_cli::csv::fmt_float;

const BIN: &str = env!("CARGO_BIN_EXE_splinecdr");

fn write_config(dir: &Path, body: &str) -> std::path::PathBuf {
    let path = dir.join("run.cfg");
    fs::write(&path, body).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no exit code")
}

const GAUSSIAN_SMALL: &str = "preset = gaussian\nL = 2.4\nD = 0.05\nV = 1\nA = 0\nN = 121\nrho = 0.002\nt_end = 0.1\nsnapshot_times = 0.05, 0.1\n";

#[test]
fn solve_writes_expected_files_and_reports_them() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), GAUSSIAN_SMALL);
    let out_dir = dir.path().join("out");
    let out = run(&["solve", "--config", cfg.to_str().unwrap(), "--out", out_dir.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));

    for name in ["solution-0.05.csv", "solution-0.1.csv", "summary.csv"] {
        assert!(out_dir.join(name).is_file(), "missing {name}");
        assert!(
            String::from_utf8_lossy(&out.stdout).contains(name),
            "stdout does not mention {name}"
        );
    }
    let summary = fs::read_to_string(out_dir.join("summary.csv")).unwrap();
    assert_eq!(summary.lines().next(), Some("t,linf,l2,linf_rel"));
    assert_eq!(summary.lines().count(), 3);
}

#[test]
fn repeated_solves_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), GAUSSIAN_SMALL);
    let out_dir = dir.path().join("out");
    let args = ["solve", "--config", cfg.to_str().unwrap(), "--out", out_dir.to_str().unwrap()];

    assert_eq!(code(&run(&args)), 0);
    let first: Vec<(String, Vec<u8>)> = ["solution-0.05.csv", "solution-0.1.csv", "summary.csv"]
        .iter()
        .map(|n| (n.to_string(), fs::read(out_dir.join(n)).unwrap()))
        .collect();

    assert_eq!(code(&run(&args)), 0);
    for (name, bytes) in first {
        assert_eq!(
            fs::read(out_dir.join(&name)).unwrap(),
            bytes,
            "{name} changed between runs"
        );
    }
}

#[test]
fn emitted_floats_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), GAUSSIAN_SMALL);
    let out_dir = dir.path().join("out");
    assert_eq!(
        code(&run(&["solve", "--config", cfg.to_str().unwrap(), "--out", out_dir.to_str().unwrap()])),
        0
    );
    let text = fs::read_to_string(out_dir.join("solution-0.1.csv")).unwrap();
    let mut checked = 0;
    for line in text.lines().skip(1) {
        for cell in line.split(',').take(5) {
            if cell.is_empty() {
                continue;
            }
            let v: f64 = cell.parse().unwrap();
            assert_eq!(fmt_float(v), cell, "cell does not round-trip");
            checked += 1;
        }
    }
    assert!(checked > 1000, "only {checked} cells checked");
}

#[test]
fn check_exit_codes_follow_the_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let monotone = write_config(
        dir.path(),
        "preset = gaussian\nL = 2.4\nD = 0.001\nV = 1\nA = 0\nN = 4801\nrho = 0.0005\nt_end = 1.0\n",
    );
    let out = run(&["check", "--config", monotone.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("verdict: monotone"), "{stdout}");
    assert!(stdout.contains("rho1 = "), "{stdout}");
    assert!(stdout.contains("rho2 = "), "{stdout}");
    assert!(stdout.contains("rho_max (1/A) = "), "{stdout}");
    for name in ["alpha", "beta", "gamma"] {
        assert!(stdout.contains(&format!("{name} = ")), "{stdout}");
    }

    let refused = dir.path().join("refused.cfg");
    fs::write(
        &refused,
        "preset = gaussian\nL = 2.4\nD = 0.001\nV = 1\nA = 0\nN = 4801\nrho = 0.00001\nt_end = 1.0\n",
    )
    .unwrap();
    let out = run(&["check", "--config", refused.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stdout).contains("verdict: not monotone"));
}

#[test]
fn config_errors_exit_one_with_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let broken = write_config(
        dir.path(),
        "preset = gaussian\nL = -2.4\nD = 0.001\nV = 1\nA = 0\nN = 121\nrho = 0.001\nt_end = 0.1\n",
    );
    let out = run(&["check", "--config", broken.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 2"), "{stderr}");

    let out = run(&["check", "--config", dir.path().join("nope.cfg").to_str().unwrap()]);
    assert_eq!(code(&out), 1);

    let out = run(&["frobnicate", "--config", broken.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
}

#[test]
fn strict_refusal_exits_two_and_permissive_proceeds() {
    let dir = tempfile::tempdir().unwrap();
    // rho far below both thresholds at this resolution.
    let cfg = write_config(
        dir.path(),
        "preset = gaussian\nL = 2.4\nD = 0.05\nV = 1\nA = 0\nN = 121\nrho = 0.0000001\nt_end = 0.0000002\n",
    );
    let out_dir = dir.path().join("out");
    let out = run(&["solve", "--config", cfg.to_str().unwrap(), "--out", out_dir.to_str().unwrap()]);
    assert_eq!(code(&out), 2, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(!out_dir.join("summary.csv").exists());

    let out = run(&[
        "solve",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
        "--permissive",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out_dir.join("summary.csv").is_file());
}

#[test]
fn numeric_overflow_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "preset = gaussian\nL = 2.4\nD = 0.001\nV = 1\nA = 0\nN = 121\nrho = 1e-308\nt_end = 2e-308\n",
    );
    let out = run(&[
        "solve",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().join("out").to_str().unwrap(),
        "--permissive",
    ]);
    assert_eq!(code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("non-finite"));
}

#[test]
fn convergence_level_count_and_numbering() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "preset = manufactured_sine\nL = 1.0\nD = 0.01\nV = 1\nA = 0\nN = 41\nrho = 0.02\nt_end = 0.2\nstrict_monotone = false\n",
    );
    let out_dir = dir.path().join("out");
    let out = run(&[
        "convergence",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
        "--levels",
        "2",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(out_dir.join("convergence.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "level,h,rho,linf,l2,order_linf");
    assert_eq!(lines.len(), 5);
    let levels: Vec<&str> = lines[1..].iter().map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(levels, vec!["0", "1", "2", "3"]);
    // First row of each sweep has no order.
    assert!(lines[1].ends_with(','), "{}", lines[1]);
    assert!(lines[3].ends_with(','), "{}", lines[3]);

    let out = run(&[
        "convergence",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
        "--levels",
        "1",
    ]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("at least 2"));
}

#[test]
fn compare_separates_central_oscillation_from_monotone_run() {
    let dir = tempfile::tempdir().unwrap();
    // Cell Peclet 10 with an initial profile only ~3 cells wide.
    let cfg = write_config(
        dir.path(),
        "preset = gaussian\nL = 2.4\nD = 0.0001\nV = 0.1\nA = 0\nN = 241\nmu_fraction = 0.95\nrho = 0.05\nt_end = 2.5\n",
    );
    let out_dir = dir.path().join("out");
    let out = run(&["compare", "--config", cfg.to_str().unwrap(), "--out", out_dir.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));

    let text = fs::read_to_string(out_dir.join("compare.csv")).unwrap();
    let mut rows = std::collections::HashMap::new();
    for line in text.lines().skip(1) {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells.len(), 6, "{line}");
        rows.insert(cells[0].to_string(), cells[4].parse::<f64>().unwrap());
    }
    let peak = 28.209479177387816;
    assert!(rows["implicit_central"] < -1e-3 * peak, "central min_u = {}", rows["implicit_central"]);
    assert!(rows["spline_monotone"] >= -1e-10 * peak, "spline min_u = {}", rows["spline_monotone"]);
    assert!(rows["implicit_upwind"] >= -1e-10 * peak, "upwind min_u = {}", rows["implicit_upwind"]);
}
