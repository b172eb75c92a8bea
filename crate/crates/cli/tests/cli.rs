use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn twistlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twistlab")).args(args).output().expect("binary runs")
}

fn with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_twistlab"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON report")
}

fn run_on(cmd: &str, file: &str) -> Output {
    let path = data(file);
    twistlab(&[cmd, "--input", path.to_str().unwrap()])
}

#[test]
fn dd_class_of_moore_space_is_nontrivial() {
    let out = run_on("dd-class", "moore_z2.json");
    assert_eq!(out.status.code(), Some(0));
    let r = json_of(&out);
    assert_eq!(r["verdict"], "nontrivial");
    assert_eq!(r["h3_orders"], serde_json::json!([2]));
    assert_eq!(r["rows"][1]["h3_class"], serde_json::json!([1]));
    assert_eq!(r["schema_version"], 1);
}

#[test]
fn zero_cochain_is_a_cocycle() {
    let out = run_on("check-cocycle", "zero.json");
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["is_cocycle"], true);
}

#[test]
fn spectrum_of_two_set_cover() {
    let out = run_on("spectrum", "two_set_cover_z2.json");
    assert_eq!(out.status.code(), Some(0));
    let r = json_of(&out);
    let dims: Vec<u64> = r["labels"].as_array().unwrap().iter().map(|e| e["dimension"].as_u64().unwrap()).collect();
    assert_eq!(dims, [1, 2, 1, 2]);
    assert_eq!(r["algebra_dimension"], 10);
    assert_eq!(r["sum_of_squares"], 10);
}

#[test]
fn tau_filter_restricts_spectrum() {
    let path = data("two_set_cover_z2.json");
    let out = twistlab(&["spectrum", "--input", path.to_str().unwrap(), "--tau", "1"]);
    let r = json_of(&out);
    assert_eq!(r["labels"].as_array().unwrap().len(), 2);
}

#[test]
fn reports_are_byte_identical() {
    for (cmd, file) in [
        ("dd-class", "moore_z2.json"),
        ("spectrum", "two_set_cover_z2.json"),
        ("verify-algebra", "two_set_cover_z2.json"),
        ("pipeline", "pipeline_moore_2sheet.json"),
        ("build-extension", "two_set_cover_z2.json"),
    ] {
        let a = run_on(cmd, file);
        let b = run_on(cmd, file);
        assert_eq!(a.status.code(), Some(0), "{cmd}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "{cmd}");
    }
}

#[test]
fn cohomology_regenerates_moore_example() {
    let out = run_on("cohomology", "moore_complex.json");
    assert_eq!(json_of(&out)["cyclic_orders"], serde_json::json!([2]));
    let path = data("moore_complex.json");
    let gen = twistlab(&["cohomology", "--input", path.to_str().unwrap(), "--generator", "0"]);
    let stored: Value = serde_json::from_str(&std::fs::read_to_string(data("moore_z2.json")).unwrap()).unwrap();
    assert_eq!(json_of(&gen), stored);
}

#[test]
fn integral_h3_of_moore_space() {
    let path = data("moore_complex.json");
    let out = twistlab(&["cohomology", "--input", path.to_str().unwrap(), "--degree", "3", "--integral"]);
    assert_eq!(json_of(&out)["cyclic_orders"], serde_json::json!([2]));
}

#[test]
fn pipeline_recovers_moore_class() {
    let out = run_on("pipeline", "pipeline_moore_2sheet.json");
    assert_eq!(out.status.code(), Some(0));
    let r = json_of(&out);
    assert_eq!(r["overlap_constant"], true);
    assert_eq!(r["report"]["verdict"], "nontrivial");
}

#[test]
fn verify_algebra_passes() {
    let out = run_on("verify-algebra", "two_set_cover_z2.json");
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["passed"], true);
}

#[test]
fn non_cocycle_exits_one() {
    let doc = r#"{"schema_version": 1, "group": [2],
        "cover": {"points": ["a"], "sets": {"U1": ["a"], "U2": ["a"]}},
        "cochain": {"degree": 2, "mode": "pointwise",
                    "values": [{"tuple": ["U1", "U1", "U2"], "point": "a", "elem": [1]}]}}"#;
    let out = with_stdin(&["check-cocycle"], doc);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_of(&out)["is_cocycle"], false);
}

#[test]
fn malformed_input_exits_two() {
    for doc in ["not json", r#"{"schema_version": 7}"#, r#"{"schema_version": 1, "cover": {"points": ["a"], "sets": {"U": ["b"]}}}"#] {
        let out = with_stdin(&["check-cocycle"], doc);
        assert_eq!(out.status.code(), Some(2), "{doc}");
        let err: Value = serde_json::from_slice(&out.stderr).unwrap();
        assert_eq!(err["error"]["kind"], "malformed");
    }
}

#[test]
fn text_format() {
    let path = data("moore_z2.json");
    let out = twistlab(&["dd-class", "--input", path.to_str().unwrap(), "--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("NONTRIVIAL"));
}

#[test]
fn selftest_passes() {
    let out = twistlab(&["selftest"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(json_of(&out)["passed"], true);
}
