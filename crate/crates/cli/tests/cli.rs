use std::path::Path;
use std::process::{Command, Output};

use ecsusy_cli::VerificationReport;

fn ecsusy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ecsusy"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(dir: &Path, command: &str) -> VerificationReport {
    let text = std::fs::read_to_string(dir.join(format!("{command}.json"))).unwrap();
    serde_json::from_str(&text).unwrap()
}

#[test]
fn defaults_pass_for_every_command() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    for command in [
        "verify-core",
        "verify-tables",
        "verify-deform",
        "shifted-ho",
    ] {
        let o = ecsusy(&[command, "--out", out]);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{command}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        let r = report(dir.path(), command);
        assert_eq!(r.command, command);
        assert!(r.summary.total > 0);
        assert_eq!(r.summary.total, r.summary.passed + r.summary.failed);
        assert_eq!(r.summary.total, r.checks.len());
    }
}

#[test]
fn report_goes_to_stdout_without_out_dir() {
    let o = ecsusy(&["verify-core", "--suites", "fock"]);
    assert_eq!(o.status.code(), Some(0));
    let r: VerificationReport = serde_json::from_slice(&o.stdout).unwrap();
    assert!(r.checks.iter().all(|c| c.id.starts_with("fock.")));
    assert!(String::from_utf8_lossy(&o.stderr).contains("verify-core:"));
}

#[test]
fn tolerance_below_machine_precision_fails() {
    let dir = tempfile::tempdir().unwrap();
    let o = ecsusy(&[
        "verify-core",
        "--tolerance",
        "1e-16",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let r = report(dir.path(), "verify-core");
    assert!(r.summary.failed > 0);
    let failing = r.checks.iter().find(|c| !c.pass).unwrap();
    assert!(failing.residual > 1e-16 && failing.tolerance == 1e-16);
    assert!(String::from_utf8_lossy(&o.stderr).contains("FAIL "));
}

#[test]
fn config_invariant_violation_is_a_usage_error() {
    let o = ecsusy(&["verify-core", "--dim", "3", "--m-max", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("4 m_max + 8"));
    assert!(o.stdout.is_empty());
}

#[test]
fn empty_or_unknown_suite_selection_is_a_usage_error() {
    assert_eq!(
        ecsusy(&["shifted-ho", "--suites", ""]).status.code(),
        Some(2)
    );
    assert_eq!(
        ecsusy(&["verify-tables", "--suites", "fock"]).status.code(),
        Some(2)
    );
    assert_eq!(
        ecsusy(&["verify-core", "--no-such-flag"]).status.code(),
        Some(2)
    );
}

#[test]
fn config_file_then_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        "dim = 48\nm_max = 9\nsuites = [\"fock\"]\n[tolerances]\ncommutator = 1e-9\n",
    )
    .unwrap();
    let out = dir.path().join("out");
    let o = ecsusy(&[
        "verify-core",
        "--config",
        cfg.to_str().unwrap(),
        "--dim",
        "52",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let r = report(&out, "verify-core");
    assert_eq!(r.config.dim, 52);
    assert_eq!(r.config.m_max, 9);
    assert_eq!(r.config.tolerances.commutator, 1e-9);
    assert!(r
        .checks
        .iter()
        .all(|c| c.tolerance == 1e-9 || !c.id.starts_with("fock.ccr")));

    std::fs::write(&cfg, "dim = \"big\"\n").unwrap();
    assert_eq!(
        ecsusy(&["verify-core", "--config", cfg.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn csv_has_one_row_per_grid_point() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("grid.toml");
    std::fs::write(&cfg, "[grid]\npoints = 1501\nn_max = 4\nm_max = 1\n").unwrap();
    let out = dir.path().join("out");
    let o = ecsusy(&[
        "shifted-ho",
        "--config",
        cfg.to_str().unwrap(),
        "--alpha",
        "0.25",
        "--suites",
        "family",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    for family in ["phi", "psi"] {
        for n in 0..=4 {
            let shift = if family == "phi" { "0.25" } else { "-0.25" };
            let path = out.join(format!("{family}_{n}_0.25_{shift}.csv"));
            let mut rdr = csv::Reader::from_path(&path).unwrap();
            assert_eq!(rdr.headers().unwrap(), vec!["x", "re", "im"]);
            let rows: Vec<_> = rdr.records().map(Result::unwrap).collect();
            assert_eq!(rows.len(), 1501);
            let x0: f64 = rows[0][0].parse().unwrap();
            let x1: f64 = rows[1500][0].parse().unwrap();
            assert!((x0 + 12.0).abs() < 1e-12 && (x1 - 12.0).abs() < 1e-12);
        }
    }
}

#[test]
fn identical_configs_give_identical_reports() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let o = ecsusy(&[
            "verify-deform",
            "--seed",
            "11",
            "--out",
            dir.path().to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
    }
    let x = std::fs::read(a.path().join("verify-deform.json")).unwrap();
    let y = std::fs::read(b.path().join("verify-deform.json")).unwrap();
    assert_eq!(x, y);
}
