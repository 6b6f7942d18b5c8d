use std::process::{Command, Output};

fn cyclab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cyclab")).args(args).output().unwrap()
}

#[test]
fn compare_csv_header_and_rows() {
    let out = cyclab(&["compare", "--xlimit", "2000", "--truncation", "500", "--probe-budget", "0"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,count,excluded,li,predicted_center,predicted_lo,predicted_hi,ratio,envelope"));
    let xs: Vec<&str> = lines.map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(xs, ["10", "100", "1000", "2000"]);
}

#[test]
fn undefined_columns_are_na() {
    let out = cyclab(&["compare", "--xlimit", "1", "--truncation", "50", "--probe-budget", "0"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().nth(1), Some("1,0,0,NA,NA,NA,NA,NA,NA"));
}

#[test]
fn config_errors_exit_2() {
    for args in [
        &["count", "--curve", "0,0"][..],
        &["count", "--modulus", "4", "--residue", "2"],
        &["count", "--point", "1,2"],
        &["count", "--workers", "0"],
        &["count", "--config", "/nonexistent/cfg.json"],
    ] {
        assert_eq!(cyclab(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn capacity_errors_exit_3() {
    assert_eq!(cyclab(&["count", "--xlimit", "18446744073709551615"]).status.code(), Some(3));
    assert_eq!(cyclab(&["predict", "--truncation", "100000000000"]).status.code(), Some(3));
}

#[test]
fn config_file_then_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"curve": {"a": -1, "b": 0}, "x_limit": 500, "checkpoints": [100, 500]}"#).unwrap();
    let out = cyclab(&["count", "--config", cfg.to_str().unwrap()]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "x,count,excluded\n100,0,1\n500,0,1\n");
    let out = cyclab(&["count", "--config", cfg.to_str().unwrap(), "--curve=-16,16", "--checkpoints", "100"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "x,count,excluded\n100,22,2\n");
}

#[test]
fn json_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    let out = cyclab(&["count", "--xlimit", "1000", "--format", "json", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(v["rows"][2]["count"], 142);
}

#[test]
fn probe_flags_torsion_curve() {
    let out = cyclab(&["probe", "--curve=-1,0", "--probe-budget", "400"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().nth(1).unwrap().starts_with("2,400,"));
    assert!(text.lines().nth(1).unwrap().contains("non-surjective"));
}

#[test]
fn selftest_passes() {
    let out = cyclab(&["selftest"]);
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().lines().all(|l| l.starts_with("PASS")));
}
