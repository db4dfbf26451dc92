//! End-to-end tests of the command-line interface: output strings, file
//! round trips, and the exit-code contract.

use std::path::Path;
use std::process::{Command, Output};

/// Run the binary with a whitespace-separated argument line. Every path
/// used in these tests comes from `tempfile`, so none contains spaces.
fn run(line: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_minshare"))
        .args(line.split_whitespace())
        .output()
        .expect("binary must run")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn write_file(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

const UNIFORM4: &str = r#"{
  "variables": ["X"],
  "entries": [
    { "tuple": ["a"], "num": 1, "den": 4 },
    { "tuple": ["b"], "num": 1, "den": 4 },
    { "tuple": ["c"], "num": 1, "den": 4 },
    { "tuple": ["d"], "num": 1, "den": 4 }
  ]
}"#;

/// The exact joint law of the two-party XOR scheme at p = 3/4.
const XOR2: &str = r#"{
  "variables": ["S", "V1", "V2"],
  "entries": [
    { "tuple": ["0", "0", "0"], "num": 9, "den": 16 },
    { "tuple": ["0", "1", "1"], "num": 3, "den": 16 },
    { "tuple": ["1", "0", "1"], "num": 3, "den": 16 },
    { "tuple": ["1", "1", "0"], "num": 1, "den": 16 }
  ]
}"#;

#[test]
fn entropy_of_a_uniform_four_point_law() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("uniform4.json");
    write_file(&file, UNIFORM4);
    let out = run(&format!("entropy {} --order 2", file.display()));
    assert!(out.status.success());
    assert_eq!(stdout(&out), "2.000000000000\n");
}

#[test]
fn conditional_min_entropy_prints_the_exact_rational() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("xor2.json");
    write_file(&file, XOR2);
    let args = format!(
        "entropy {} --joint --target S --given V2 --order inf",
        file.display()
    );
    let out = run(&args);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "0.415037499279 (3/4)\n");
}

#[test]
fn conditional_order_zero_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("xor2.json");
    write_file(&file, XOR2);
    let args = format!(
        "entropy {} --joint --target S --given V2 --order 0",
        file.display()
    );
    assert_eq!(run(&args).status.code(), Some(3));
}

#[test]
fn worst_case_measure_needs_order_inf() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("xor2.json");
    write_file(&file, XOR2);
    let base = format!("entropy {} --joint --target S --given V2", file.display());

    let out = run(&format!("{base} --order inf --measure worst"));
    assert!(out.status.success());
    assert_eq!(stdout(&out), "0.152003093445 (9/10)\n");

    let out = run(&format!("{base} --order 2 --measure worst"));
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn malformed_distribution_file_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("broken.json");
    write_file(&file, "{ not json");
    let out = run(&format!("entropy {} --order 1", file.display()));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn table_golden_two_two_two() {
    let out = run("table --t 2 --k 2 --n 2");
    assert!(out.status.success());
    assert_eq!(stdout(&out), "s,v1,v2\n0,0,0\n0,1,1\n1,1,1\n1,0,0\n");
}

#[test]
fn table_constant_polynomials_echo_the_secret() {
    let out = run("table --t 3 --k 1 --n 2");
    assert!(out.status.success());
    assert_eq!(stdout(&out), "s,v1,v2\n0,0,0\n1,1,1\n2,2,2\n");
}

#[test]
fn table_starts_with_the_all_zero_row() {
    let out = run("table --t 2 --k 2 --n 3");
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("s,v1,v2,v3"));
    assert_eq!(lines.next(), Some("0,0,0,0"));
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn table_rejects_a_composite_modulus() {
    let out = run("table --t 4 --k 2 --n 2");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn xor_share_combine_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let bundle = dir.path().join("bundle.json");
    let share = format!(
        "share --scheme pi1 --n 3 --p 3/4 --secret 1 --seed 7 --out {}",
        bundle.display()
    );
    assert!(run(&share).status.success());
    let out = run(&format!("combine {}", bundle.display()));
    assert!(out.status.success());
    assert_eq!(stdout(&out), "1\n");
}

#[test]
fn threshold_share_combines_from_any_two_parties() {
    let dir = tempfile::tempdir().unwrap();
    let bundle = dir.path().join("bundle.json");
    for secret in ["0", "2", "4"] {
        let share = format!(
            "share --scheme pi2 --t 5 --k 2 --n 3 --p 1/5 --secret {secret} --seed 13 --out {}",
            bundle.display()
        );
        assert!(run(&share).status.success());
        for parties in ["1,2", "1,3", "2,3"] {
            let out = run(&format!("combine {} --parties {parties}", bundle.display()));
            assert!(out.status.success());
            assert_eq!(stdout(&out), format!("{secret}\n"));
        }
    }
}

#[test]
fn forbidden_subset_exits_four() {
    let dir = tempfile::tempdir().unwrap();
    let structure = dir.path().join("structure.json");
    write_file(
        &structure,
        r#"{ "n": 3, "min_qualified": [[1, 2], [1, 3], [2, 3]] }"#,
    );
    let bundle = dir.path().join("bundle.json");
    let share = format!(
        "share --scheme general --structure {} --p 3/4 --secret 1 --seed 5 --out {}",
        structure.display(),
        bundle.display()
    );
    assert!(run(&share).status.success());

    let out = run(&format!("combine {} --parties 2", bundle.display()));
    assert_eq!(out.status.code(), Some(4));

    let out = run(&format!("combine {} --parties 1,3", bundle.display()));
    assert!(out.status.success());
    assert_eq!(stdout(&out), "1\n");
}

#[test]
fn combine_cross_checks_the_scheme_tag() {
    let dir = tempfile::tempdir().unwrap();
    let bundle = dir.path().join("bundle.json");
    let share = format!(
        "share --scheme pi1 --n 2 --p 3/4 --secret 0 --seed 3 --out {}",
        bundle.display()
    );
    assert!(run(&share).status.success());
    let out = run(&format!("combine {} --scheme pi2", bundle.display()));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn share_bundles_survive_the_json_round_trip() {
    // Deterministic: the same invocation reproduces the file exactly.
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first.json");
    let again = dir.path().join("again.json");
    for path in [&first, &again] {
        let share = format!(
            "share --scheme pi2 --t 5 --k 2 --n 4 --p 9/10 --secret 3 --seed 21 --out {}",
            path.display()
        );
        assert!(run(&share).status.success());
    }
    assert_eq!(
        std::fs::read(&first).unwrap(),
        std::fs::read(&again).unwrap()
    );
}

#[test]
fn verify_threshold_checks_pass() {
    let out = run("verify --scheme pi2 --t 2 --k 2 --n 3 --p 3/8 --checks t6,ideal,nonperfect");
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    assert!(text.contains("t6 pass"));
    assert!(text.contains("ideal pass"));
    assert!(text.contains("nonperfect pass"));
}

#[test]
fn verify_xor_ideality_fails_on_the_closing_party() {
    let out = run("verify --scheme pi1 --n 3 --p 3/4 --checks t5,ideal");
    assert_eq!(out.status.code(), Some(5));
    let text = stdout(&out);
    // The closing share's largest mass is (1 + (2p−1)³)/2 = 9/16 here, not
    // the two-term p² + (1−p)² = 5/8, so both the profile claim and
    // ideality fail on party 3.
    assert!(text.contains("ideal FAIL (party 3)"));
    assert!(text.contains("t5 FAIL"));
}

#[test]
fn verify_rejects_the_bias_boundary() {
    let out = run("verify --scheme pi1 --n 3 --p 1/2");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_writes_a_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let verify = format!(
        "verify --scheme pi1 --n 2 --p 3/4 --checks t3,t5,nonperfect --orders 1,inf --report {}",
        report.display()
    );
    assert_eq!(run(&verify).status.code(), Some(0));
    let text = std::fs::read_to_string(&report).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["scheme"], "pi1");
    assert_eq!(doc["checks"].as_array().unwrap().len(), 3);
    assert!(doc["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["pass"] == true));
}

#[test]
fn report_emits_security_and_ideality_json() {
    let out = run("report --scheme pi2 --t 2 --k 2 --n 2 --p 3/8 --orders 1,inf");
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["ideality"]["ideal"], true);
    assert_eq!(doc["security"].as_array().unwrap().len(), 2);
    // At order ∞ the scheme is exactly secure yet non-perfect.
    let inf = &doc["security"][1];
    assert_eq!(inf["order"], "inf");
    assert_eq!(inf["epsilon"], 0.0);
    assert_eq!(inf["perfect"], false);
}

#[test]
fn decimal_probability_is_rejected() {
    let out = run("share --scheme pi1 --n 2 --p 0.75 --secret 0 --seed 1");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn general_verify_checks_pass_on_a_chain_structure() {
    let dir = tempfile::tempdir().unwrap();
    let structure = dir.path().join("chain.json");
    write_file(
        &structure,
        r#"{ "n": 4, "min_qualified": [[1, 2], [2, 3], [3, 4]] }"#,
    );
    let verify = format!(
        "verify --scheme general --structure {} --p 2/3 --checks t3,t4,nonperfect",
        structure.display()
    );
    let out = run(&verify);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}
