use std::io::Write;
use std::process::{Command, Output, Stdio};

fn powersum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_powersum"))
        .args(args)
        .env_remove("POWERSUM_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn expand_prints_terms_and_length() {
    let o = powersum(&["expand", "--base", "2", "473"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "+2^9 -2^5 -2^3 +2^0 (length 4)");

    let o = powersum(&["expand", "--base", "9", "39797"]);
    assert!(stdout(&o).trim().ends_with("(length 13)"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(
        powersum(&["expand", "--base", "4", "10"]).status.code(),
        Some(2)
    );
    assert_eq!(
        powersum(&["sets", "--name", "S", "--frobnicate"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(powersum(&["sets", "--name", "U"]).status.code(), Some(2));
    assert_eq!(
        powersum(&["length", "--bases", "2,6", "5"]).status.code(),
        Some(2)
    );
    assert_eq!(
        powersum(&["obstruct", "--eq", "2^a - 5^b"]).status.code(),
        Some(2)
    );
}

#[test]
fn length_reports_witness() {
    let o = powersum(&["length", "--bases", "2,5", "19"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("19 over {2,5}: length 3"));

    let o = powersum(&["--output", "json", "length", "--bases", "2,7", "11"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["length"], 2);
    assert_eq!(v["exact"], true);
    assert_eq!(v["witness"].as_array().unwrap().len(), 2);
}

#[test]
fn lambda_values() {
    let o = powersum(&[
        "--output",
        "json",
        "lambda",
        "--bases",
        "2,21",
        "--h",
        "3",
        "--certify",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["value"], 26);
    assert_eq!(v["mode"], "fully-certified");

    let o = powersum(&["lambda", "--bases", "2,9", "--h", "1"]);
    assert!(stdout(&o).starts_with("lambda_{2,9}(1) = 1"));
}

#[test]
fn sets_and_census() {
    let o = powersum(&["sets", "--name", "intersection", "--max", "30"]);
    assert_eq!(stdout(&o).trim(), "3 5 9 15 19 21");

    let o = powersum(&[
        "--output",
        "json",
        "census",
        "--h",
        "2",
        "--odd-max",
        "101",
        "--jobs",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    for e in v["entries"].as_array().unwrap() {
        let expected = if e["n"] == 3 { 5 } else { 3 };
        assert_eq!(e["value"], expected, "{e}");
    }
}

#[test]
fn obstruct_output_replays() {
    let o = powersum(&[
        "--output",
        "json",
        "obstruct",
        "--eq",
        "2^a - 5^b = 19",
        "--max-modulus",
        "100",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["modulus"], 15);

    let mut child = Command::new(env!("CARGO_BIN_EXE_powersum"))
        .args(["replay", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(&o.stdout).unwrap();
    let r = child.wait_with_output().unwrap();
    assert_eq!(r.status.code(), Some(0));
    assert!(stdout(&r).starts_with("valid"));

    let mut forged = v.clone();
    forged["lhs_residues"].as_array_mut().unwrap().remove(0);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("forged.json");
    std::fs::write(&path, forged.to_string()).unwrap();
    let r = powersum(&["replay", path.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(1));
    assert!(stdout(&r).contains("invalid: residue mismatch"));
}

#[test]
fn obstruct_reports_solutions() {
    let o = powersum(&["obstruct", "--eq", "2^a - 7^b = 1", "--max-modulus", "50"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn cache_round_trip_and_stale_versions() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cache.json");
    let p = path.to_str().unwrap();

    let o = powersum(&["--cache", p, "table", "--bases", "2,5", "--max", "20"]);
    assert_eq!(o.status.code(), Some(0));
    let cache: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(cache["lengths"]["19"], 3);

    let o = powersum(&["--cache", p, "length", "--bases", "2,5", "19"]);
    assert!(stdout(&o).contains("(cached)"));

    let mut stale = cache.clone();
    stale["version"] = serde_json::json!(0);
    std::fs::write(&path, stale.to_string()).unwrap();
    let o = powersum(&["--cache", p, "length", "--bases", "2,5", "19"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).contains("(cached)"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("ignoring length cache"));
}

#[test]
fn cache_path_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("env-cache.json");
    let o = Command::new(env!("CARGO_BIN_EXE_powersum"))
        .args(["length", "--bases", "2,5", "7"])
        .env("POWERSUM_CACHE", &path)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(path.exists());
}

#[test]
fn verify_fast_tier_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = powersum(&[
        "verify",
        "--tier",
        "fast",
        "--report",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("0 fail, 2 documented-discrepancy"));

    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let claims = report["claims"].as_array().unwrap();
    let row19 = claims.iter().find(|c| c["id"] == "Table1.row19").unwrap();
    assert_eq!(row19["expected"], 3);
    assert_eq!(row19["status"], "pass");
    for c in claims.iter().filter(|c| c["status"] == "pass") {
        assert!(!c["evidence"].as_array().unwrap().is_empty(), "{}", c["id"]);
    }
}

#[test]
fn closed_form_agrees() {
    let o = powersum(&["closed-form", "--g", "3", "--max-value", "200"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).trim_end().ends_with("all agree"));
}

#[test]
fn fixed_cap_results_exit_three() {
    let o = powersum(&["length", "--bases", "2,5", "19", "--cap", "64"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("cap stable: false"));
}
