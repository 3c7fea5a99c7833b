use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn efa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_efa")).args(args).output().expect("run efa")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("efa-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn analyze_prints_exceptional_points() {
    let o = efa(&["analyze", fixture("example2.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("verdict: transcendental"));
    assert!(out.contains("f(0) = 0"));
    assert!(out.contains("f(1) = 1/2"));
    assert!(out.contains("f = 1/2 + (z - 1)^1 g(z)"));
    assert!(out.contains("0 failed"));
}

#[test]
fn polynomial_input_is_algebraic_everywhere() {
    let o = efa(&["analyze", fixture("polynomial.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verdict: polynomial"));
}

#[test]
fn invalid_inputs_name_the_clause() {
    for (name, clause) in [
        ("invalid/oracle_false.json", "(iii)"),
        ("invalid/short_initial.json", "(ii)"),
        ("invalid/inconsistent.json", "(ii)"),
        ("invalid/reducible_field.json", "(i)"),
    ] {
        let o = efa(&["analyze", fixture(name).to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "{name}");
        assert!(stderr(&o).contains(&format!("clause {clause}")), "{name}: {}", stderr(&o));
    }
    let o = efa(&["analyze", fixture("no_such_file.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn emitted_certificate_verifies() {
    let input = fixture("zm1exp.json");
    let report = scratch("zm1exp.report.json");
    let o = efa(&["analyze", input.to_str().unwrap(), "--emit-certificate", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = efa(&["analyze", input.to_str().unwrap(), "--verify", report.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(0), "{}", stdout(&v));
    assert!(!stdout(&v).contains("FAIL"));

    // A different input does not match the report.
    let other = efa(&["analyze", fixture("exp.json").to_str().unwrap(), "--verify", report.to_str().unwrap()]);
    assert_eq!(other.status.code(), Some(4));
}

#[test]
fn tampered_certificate_is_rejected() {
    let input = fixture("example2.json");
    let report = scratch("example2.report.json");
    let o = efa(&["analyze", input.to_str().unwrap(), "--emit-certificate", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&report).unwrap();
    // Claim f(1) = 1 instead of 1/2.
    let tampered = text.replacen("\"1/2\"", "\"1\"", 1);
    assert_ne!(tampered, text);
    std::fs::write(&report, tampered).unwrap();
    let v = efa(&["analyze", "--verify", report.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(4), "{}", stdout(&v));
    assert!(stdout(&v).contains("FAIL"));
}

#[test]
fn json_output_parses() {
    let o = efa(&["analyze", fixture("exp.json").to_str().unwrap(), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let report = efa_core::report::AnalysisReport::from_json(&stdout(&o)).unwrap();
    assert_eq!(report.verdict, "transcendental");
    assert_eq!(report.exceptional.len(), 1);
}

#[test]
fn subcommands() {
    let o = efa(&["min-op", fixture("example3_nonminimal.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("order 2"));

    let o = efa(&["min-inhom", fixture("example2.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("1/2 = "));
    assert!(stdout(&o).contains("transcendental, s = 2"));

    let o = efa(&["exceptional", fixture("example3.json").to_str().unwrap(), "--derivative", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("f^(1)(-1) = 0"));

    let o = efa(&["exceptional", fixture("example3.json").to_str().unwrap(), "--derivative", "5"]);
    assert_eq!(o.status.code(), Some(2));

    let o = efa(&["exceptional", fixture("zm1exp.json").to_str().unwrap(), "--fast"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("f(1) = 0"));
}
