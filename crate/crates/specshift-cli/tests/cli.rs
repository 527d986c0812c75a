//! End-to-end checks of the `specshift` binary: artifact emission, the
//! byte-identical fixed-clock reports, and the exit-status contract.

use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_specshift"))
}

fn read(path: &Path) -> Vec<u8> {
    std::fs::read(path).unwrap_or_else(|e| panic!("missing {}: {e}", path.display()))
}

#[test]
fn fixed_clock_reports_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let out1 = tmp.path().join("run1");
    let out2 = tmp.path().join("run2");
    for out in [&out1, &out2] {
        let status = bin()
            .args([
                "trace-identity",
                "--cases",
                "3",
                "--seed",
                "11",
                "--fixed-clock",
                "--out",
            ])
            .arg(out)
            .status()
            .expect("spawn specshift");
        assert!(status.success(), "suite run failed");
    }
    assert_eq!(
        read(&out1.join("report.json")),
        read(&out2.join("report.json")),
        "fixed-clock reports differ"
    );
    assert_eq!(
        read(&out1.join("xi_grid.csv")),
        read(&out2.join("xi_grid.csv"))
    );
}

#[test]
fn dyadic_run_succeeds_without_out_dir() {
    let output = bin()
        .args(["dyadic", "--cases", "2", "--seed", "3"])
        .output()
        .expect("spawn specshift");
    assert!(output.status.success());
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("dyadic:"), "missing summary line");
    assert!(!stdout.contains("FAIL"));
}

#[test]
fn impossible_tolerance_exits_nonzero() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg_path = tmp.path().join("cfg.json");
    let mut cfg =
        specshift_cli::config::ExperimentConfig::default_for(specshift_cli::config::Suite::TraceIdentity);
    cfg.cases = 2;
    cfg.rel_tol = 1e-300;
    cfg.abs_floor = 1e-300;
    cfg.save(&cfg_path).unwrap();
    let output = bin()
        .args(["trace-identity", "--config"])
        .arg(&cfg_path)
        .output()
        .expect("spawn specshift");
    assert_eq!(output.status.code(), Some(1), "tolerance failure must exit 1");
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(
        stderr.contains("first failing record"),
        "stderr must identify the first failing record, got: {stderr}"
    );
}

#[test]
fn suite_mismatch_is_a_usage_error() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg_path = tmp.path().join("cfg.json");
    let cfg = specshift_cli::config::ExperimentConfig::default_for(specshift_cli::config::Suite::Dyadic);
    cfg.save(&cfg_path).unwrap();
    let output = bin()
        .args(["berg", "--config"])
        .arg(&cfg_path)
        .output()
        .expect("spawn specshift");
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn berg_emits_diagnostics_csv() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let status = bin()
        .args(["berg", "--cases", "1", "--dim", "16", "--out"])
        .arg(&out)
        .status()
        .expect("spawn specshift");
    assert!(status.success());
    let csv = String::from_utf8(read(&out.join("berg_diagnostics.csv"))).unwrap();
    let mut lines = csv.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("seed,case,n,op,p,approx_error"));
    assert!(lines.count() >= 8, "expected one row per (level, op, p)");
}

#[test]
fn mu_convergence_emits_csv() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let status = bin()
        .args([
            "mu-convergence",
            "--cases",
            "1",
            "--dim",
            "12",
            "--out",
        ])
        .arg(&out)
        .status()
        .expect("spawn specshift");
    assert!(status.success(), "mu-convergence at small ambient dim");
    let csv = String::from_utf8(read(&out.join("mu_convergence.csv"))).unwrap();
    assert!(csv.lines().next().unwrap().starts_with("seed,case,basis,n"));
    assert!(csv.contains("standard"));
    assert!(csv.contains("seeded-random"));
}
