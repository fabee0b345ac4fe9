//! End-to-end checks of the fencelab binary: reports, exit codes,
//! determinism and golden files.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fencelab"))
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn golden(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    std::fs::read_to_string(path).expect("golden file")
}

fn run(args: &[&str]) -> Output {
    bin()
        .args(args)
        .env("FENCELAB_SEED", "0")
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a report")
}

#[test]
fn validate_reports_components() {
    let out = run(&["validate", &fixture("segment_point.json")]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["status"], "ok");
    assert_eq!(v["result"]["arcs"], 1);
    assert_eq!(v["result"]["points"], 1);
}

#[test]
fn invalid_documents_exit_one_with_witness() {
    let out = run(&["validate", &fixture("crossing_invalid.json")]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["status"], "violation");
    assert!(v["result"]["violations"].is_array());
}

#[test]
fn usage_errors_exit_two() {
    let out = run(&["probe", "--center", "oops", "--r2", "1", &fixture("v_bump.json")]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["experiment", "comb-limit", "--n", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["probe", &fixture("v_bump.json")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn probe_classifies_the_unit_circle() {
    let out = run(&[
        "probe",
        "--center",
        "0,0",
        "--r2",
        "1",
        &fixture("v_bump.json"),
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    let kinds: Vec<&str> = v["result"]["events"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["kind"].as_str().unwrap())
        .collect();
    assert_eq!(kinds, ["Transversal", "TangentInside", "Transversal"]);
}

#[test]
fn spectrum_report_lists_exact_radii() {
    let out = run(&["spectrum", "--center", "0,0", &fixture("v_bump.json")]);
    let v = stdout_json(&out);
    let radii: Vec<&str> = v["result"]["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["r2"].as_str().unwrap())
        .collect();
    assert_eq!(radii, ["1/5", "1"]);
}

#[test]
fn pierce_report_carries_certificate() {
    let out = run(&[
        "pierce",
        "--center",
        "0,0",
        "--epsilon2",
        "81/100",
        &fixture("v_bump.json"),
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["result"]["r2"], "101/200");
    assert_eq!(
        v["result"]["certificate"]["boundary"].as_array().unwrap().len(),
        4
    );
}

#[test]
fn fan_basis_on_star() {
    let out = run(&[
        "fan-basis",
        "--epsilon2",
        "1/4",
        &fixture("star4.json"),
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["result"]["region"]["balls"].as_array().unwrap().len(), 5);
}

#[test]
fn pattern_pipes_into_realize() {
    let dir = std::env::temp_dir().join("fencelab-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let pattern_path = dir.join("pattern.json");
    let out = run(&["pattern", "--depth", "2", &fixture("v_bump.json")]);
    assert!(out.status.success());
    std::fs::write(&pattern_path, &out.stdout).unwrap();
    let out = run(&[
        "realize",
        pattern_path.to_str().unwrap(),
        "--root",
        "0,0,16,16",
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert!(v["result"]["realization"]["levels"].is_array());
}

#[test]
fn svg_render_counts_elements() {
    let out = run(&[
        "render",
        &fixture("v_bump.json"),
        "--center",
        "0,0",
        "--r2",
        "1",
    ]);
    assert!(out.status.success());
    let svg = String::from_utf8(out.stdout).unwrap();
    assert_eq!(svg.matches("<path d=").count(), 1);
    assert_eq!(svg.matches("class=\"event ").count(), 3);
    assert_eq!(svg.matches("<circle cx=").count(), 1); // the probe circle
    // isolated point fixture renders a frame plus one marker
    let out = run(&["render", &fixture("segment_point.json")]);
    let svg = String::from_utf8(out.stdout).unwrap();
    assert_eq!(svg.matches("class=\"isolated\"").count(), 1);
}

#[test]
fn reports_and_svg_are_byte_identical_across_runs() {
    for args in [
        vec!["spectrum", "--center", "0,0", &fixture("v_bump.json")],
        vec![
            "bends",
            "--center",
            "0,0",
            "--q2",
            "1/2",
            "--r2",
            "1",
            &fixture("v_bump.json"),
        ],
        vec!["experiment", "comb-limit", "--n", "6"],
        vec![
            "render",
            &fixture("v_bump.json"),
            "--center",
            "0,0",
            "--r2",
            "2/5",
        ],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "args {args:?}");
    }
}

#[test]
fn comb_limit_matches_golden_report() {
    let out = run(&["experiment", "comb-limit", "--n", "10"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), golden("comb_limit_n10.json"));
}

#[test]
fn render_matches_golden_svg() {
    let out = run(&[
        "render",
        &fixture("v_bump.json"),
        "--center",
        "0,0",
        "--r2",
        "1",
    ]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), golden("v_bump_probe.svg"));
}

#[test]
fn stdin_documents_work() {
    use std::io::Write;
    let doc = std::fs::read(fixture("v_bump.json")).unwrap();
    let mut child = bin()
        .args(["validate", "-"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.as_mut().unwrap().write_all(&doc).unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
}
