use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn sev(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sev"))
        .args(args)
        .env_remove("SEV_SEED")
        .output()
        .expect("run sev")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn dim_reports_virtual_and_expected_dimension() {
    let out = sev(&["dim", "--system", "P3:d=9:6x4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["monomials"], 220);
    assert_eq!(v["conditions"], 224);
    assert_eq!(v["virtual_dim"], -5);
    assert_eq!(v["expected_dim"], -1);
}

#[test]
fn dim_reads_a_json_spec_from_stdin() {
    let spec = r#"{"space":[1,1],"degree":[2,2],"points":[{"mult":2,"count":3}]}"#;
    let mut child = Command::new(env!("CARGO_BIN_EXE_sev"))
        .args(["dim", "--spec", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(spec.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    assert_eq!(json(&out)["virtual_dim"], -1);
}

#[test]
fn malformed_input_exits_with_2() {
    let out = sev(&["dim", "--system", "P3:d=x"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn oracle_is_deterministic_and_reports_seed() {
    let a = sev(&["oracle", "--system", "P2:d=4:2x5", "--seed", "7"]);
    let b = sev(&["oracle", "--system", "P2:d=4:2x5", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["h0"], 1);
    assert_eq!(v["h1"], 1);
    assert_eq!(v["seed"], 7);
    let err = String::from_utf8_lossy(&a.stderr);
    assert!(err.contains("seed = 7") && err.contains("prime = 2147483647"));
}

#[test]
fn seed_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_sev"))
        .args(["oracle", "--system", "P2:d=4:2x5"])
        .env("SEV_SEED", "99")
        .output()
        .unwrap();
    assert_eq!(json(&out)["seed"], 99);
}

#[test]
fn oracle_exits_1_for_a_non_special_system() {
    let out = sev(&["oracle", "--system", "P2:d=4:2x4", "--cross-check"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["agreed"], true);
}

#[test]
fn bad_prime_is_an_input_error() {
    let out = sev(&["oracle", "--system", "P2:d=4:2x5", "--prime", "12"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn classify_plane_through_three_fat_points() {
    let out = sev(&["classify", "--system", "P3:d=4:3x3", "--variety", "plane"]);
    let v = json(&out);
    assert_eq!(v["is_sev"], true, "{v}");
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn classify_rational_normal_curve() {
    let out = sev(&["classify", "--system", "P4:d=3:2x7", "--variety", "rnc"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["alpha_max"], 2);
}

#[test]
fn classify_negative_exits_1() {
    let out = sev(&["classify", "--system", "P2:d=4:1x3", "--variety", "rnc"]);
    assert_eq!(out.status.code(), Some(1));
    let out = sev(&[
        "classify",
        "--system",
        "P3:d=9:6x4",
        "--variety",
        "quadric",
        "--c",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn mixed_configuration_is_unsupported() {
    let steps = r#"[{"variety":{"kind":"line","through_pair":[0,1]},"alpha":1},
                    {"variety":{"kind":"hypersurface","multidegree":[1],"point_mults":[[0,1]]},"alpha":1}]"#;
    let out = sev(&["classify", "--system", "P3:d=6:4x3", "--steps", steps]);
    assert_eq!(out.status.code(), Some(3), "{out:?}");
}

#[test]
fn h1check_quadric_reports_values() {
    let out = sev(&[
        "h1check",
        "--system",
        "P2:d=4:2x5",
        "--variety",
        "quadric",
        "--format",
        "json",
    ]);
    let v = json(&out);
    assert_eq!(v["values"]["h1(L|Y)"], 1);
    assert!(v["prime"].is_u64());
}

#[test]
fn scan_rnc_lists_both_exceptions() {
    let out = sev(&["scan", "rnc", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("space,multidegree,variety,h"));
    assert_eq!(lines.count(), 2, "{text}");
}

#[test]
fn scan_products_family_table_in_markdown() {
    let out = sev(&["scan", "products", "--format", "md"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("| space | multidegree | variety | h |"));
    assert!(text.contains("| P3xP4 | (2,2) | (1,1) | 19 |"));
}

#[test]
fn scan_products_rejects_five_factors() {
    let out = sev(&["scan", "products", "--t", "5"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_lemmas_and_tables_pass() {
    for suite in ["lemmas", "paper-tables"] {
        let out = sev(&["verify", suite]);
        assert_eq!(out.status.code(), Some(0), "{suite}");
        assert_eq!(json(&out)["passed"], true);
    }
}
