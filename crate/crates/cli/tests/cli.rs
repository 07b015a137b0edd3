use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn uniclass(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uniclass")).args(args).output().expect("spawn uniclass")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = uniclass(&all);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)));
    (out.status.code().unwrap(), v)
}

fn matrix_file(name: &str, body: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn classify_identity_has_the_trivial_label() {
    let m = matrix_file("id4.txt", "4 4 2\n1 0 0 0\n0 1 0 0\n0 0 1 0\n0 0 0 1\n");
    let (code, v) = json(&["classify", "--space", "D4+", "--q", "2", "--matrix", m.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["space"], "D4+");
    assert_eq!(v["field"]["p"], 2);
    let r = &v["results"][0];
    assert_eq!(r["dickson"], 0);
    for key in ["jordan_c", "jordan_eps", "filtration", "phi", "component", "partition"] {
        assert!(r.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn classify_rejects_elements_outside_so() {
    let m = matrix_file("swap2.txt", "2 2 2\n0 1\n1 0\n");
    let out = uniclass(&["classify", "--space", "D2+", "--q", "2", "--matrix", m.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not in SO"));
}

#[test]
fn classify_rejects_wrong_dimension() {
    let m = matrix_file("id2.txt", "2 2 2\n1 0\n0 1\n");
    let out = uniclass(&["classify", "--space", "D4+", "--q", "2", "--matrix", m.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn pieces_of_d3_over_f2() {
    let (code, v) = json(&["pieces", "--space", "D3", "--q", "2"]);
    assert_eq!(code, 0);
    let r = &v["results"][0];
    assert_eq!(r["passed"], true);
    let mut observed: Vec<u64> = r["labels"].as_array().unwrap().iter().map(|l| l["observed"].as_u64().unwrap()).collect();
    observed.sort();
    assert_eq!(observed, vec![1, 3]);
}

#[test]
fn pieces_of_d4_plus_sum_to_the_unipotent_count() {
    let (code, v) = json(&["pieces", "--space", "D4+", "--q", "2", "--orbits"]);
    assert_eq!(code, 0);
    let r = &v["results"][0];
    let total: u64 = r["labels"].as_array().unwrap().iter().map(|l| l["observed"].as_u64().unwrap()).sum();
    assert_eq!(total, 16);
    assert_eq!(r["unipotents"], 16);
    assert_eq!(r["labels_constant_on_orbits"], true);
}

#[test]
fn labels_of_d6_minus_sum_to_q_power() {
    let (code, v) = json(&["labels", "--space", "D6-", "--q", "2"]);
    assert_eq!(code, 0);
    let total: u64 = v["results"].as_array().unwrap().iter().map(|l| l["card_piece_at_q"].as_str().unwrap().parse::<u64>().unwrap()).sum();
    assert_eq!(total, 4096);
}

#[test]
fn verify_counts_passes() {
    let (code, v) = json(&["verify", "--suite", "counts", "--dmax", "3", "--qlist", "2"]);
    assert_eq!(code, 0);
    assert!(v["field"].is_null());
    assert_eq!(v["results"][0]["passed"], true);
}

#[test]
fn verify_counts_catches_the_halved_index() {
    let (code, v) = json(&["verify", "--suite", "counts", "--dmax", "3", "--qlist", "2", "--mutation", "literal-t-minus-k"]);
    assert_eq!(code, 1);
    let c = &v["results"][0]["counterexamples"][0];
    assert!(c["s"].is_u64() && c["k"].is_u64() && c["q"].is_u64(), "{c}");
}

#[test]
fn verify_theorem17_catches_the_dropped_shift() {
    let (code, _) = json(&["verify", "--suite", "theorem17", "--dmax", "3", "--qlist", "2", "--mutation", "drop-lambda-shift"]);
    assert_eq!(code, 1);
}

#[test]
fn guard_is_enforced() {
    let out = uniclass(&["--guard", "10", "pieces", "--space", "D4+", "--q", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("guard"));
}

#[test]
fn bad_descriptor_is_a_usage_error() {
    assert_eq!(uniclass(&["labels", "--space", "E8", "--q", "2"]).status.code(), Some(2));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = ["--jobs", "2", "pieces", "--space", "D4-", "--q", "2", "--format", "json"];
    assert_eq!(uniclass(&args).stdout, uniclass(&args).stdout);
}

#[test]
fn csv_has_a_header_row() {
    let out = uniclass(&["labels", "--space", "D4+", "--q", "2", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().count() > 1);
}
