//! End-to-end CLI checks: verbs, exit codes, determinism, and schema
//! validation of every JSON output.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn schemas() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas")
}

fn nfold(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nfold"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn validator(schema_file: &str) -> jsonschema::Validator {
    let schema: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(schemas().join(schema_file)).unwrap(),
    )
    .unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

#[test]
fn validate_passes_and_fails_with_exit_codes() {
    let good = fixtures().join("nerve_z2.json");
    let out = nfold(&["validate", "--input", good.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let bad = fixtures().join("corrupted_nerve_z2.json");
    let out = nfold(&["validate", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    // report JSON validates against the report schema
    let out = nfold(&["validate", "--json", "--input", bad.to_str().unwrap()]);
    let rep: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(validator("report.schema.json").is_valid(&rep));
}

#[test]
fn missing_input_is_exit_2() {
    let out = nfold(&["validate"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    let v: serde_json::Value = serde_json::from_str(err.trim()).unwrap();
    assert_eq!(v["kind"], "input");
}

#[test]
fn qn_is_deterministic_and_kan_certified() {
    let input = fixtures().join("nerve_z2.json");
    let run = || stdout(&nfold(&["qn", "-n", "2", "--input", input.to_str().unwrap()]));
    let a = run();
    let b = run();
    assert_eq!(a, b, "byte-identical output for identical inputs");
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["kan-certified"], true);
    assert_eq!(v["nfold"], true);
    assert!(validator("multisset.schema.json").is_valid(&v));
}

#[test]
fn pi1_budget_exhaustion_is_exit_3() {
    // ∂Δ[2] has free fundamental group: direct π̂ must exhaust its budget
    let input = fixtures().join("boundary2_b5.json");
    let out = nfold(&[
        "pi1",
        "--dir",
        "1",
        "--budget",
        "200",
        "--input",
        input.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    let v: serde_json::Value = serde_json::from_str(err.trim()).unwrap();
    assert_eq!(v["kind"], "budget");
    // Q₂ of the same input terminates: every π̂ in the pipeline runs on a
    // décalage slice, which is homotopically trivial
    let out = nfold(&["qn", "-n", "2", "--input", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["kan-certified"], false);
}

#[test]
fn omega_of_q2_z2() {
    let input = fixtures().join("q2_z2.json");
    let out = nfold(&["omega", "-k", "1", "--input", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["order"], 2);
    let out2 = nfold(&["omega", "-k", "2", "--input", input.to_str().unwrap()]);
    let v2: serde_json::Value = serde_json::from_str(&stdout(&out2)).unwrap();
    assert_eq!(v2["order"], 1);
}

#[test]
fn check_wg_accepts_q2_and_rejects_constant() {
    let good = fixtures().join("q2_z2.json");
    let out = nfold(&["check-wg", "--input", good.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let bad = fixtures().join("constant_z2.json");
    let out = nfold(&["check-wg", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn check_hd_on_square_object() {
    let input = fixtures().join("hd_square.json");
    let out = nfold(&["check-hd", "--input", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let not_hd = fixtures().join("double_nerve_z2.json");
    let out = nfold(&["check-hd", "--input", not_hd.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn pipeline_ordsum_pi1_diag() {
    let input = fixtures().join("nerve_z2.json");
    let dir = tempfile::tempdir().unwrap();
    let or = dir.path().join("or2.json");
    let out = nfold(&[
        "ordsum",
        "-n",
        "2",
        "--bounds",
        "2,2",
        "--input",
        input.to_str().unwrap(),
        "--output",
        or.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&or).unwrap()).unwrap();
    assert!(validator("multisset.schema.json").is_valid(&v));
    // diagonal of the ordinal sum
    let out = nfold(&["diag", "--input", or.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    // fundamental groupoids in direction 2
    let out = nfold(&["pi1", "--dir", "2", "--input", or.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(validator("multisset.schema.json").is_valid(&v));
    // the fibrancy check on the ordinal sum
    let out = nfold(&["check-fibrant", "--input", or.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn nerve_and_decalage_of_groupoid_fixture() {
    let input = fixtures().join("groupoid_z3.json");
    let dir = tempfile::tempdir().unwrap();
    let nerve = dir.path().join("nerve.json");
    let out = nfold(&[
        "nerve",
        "--bound",
        "3",
        "--input",
        input.to_str().unwrap(),
        "--output",
        nerve.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = nfold(&["decalage", "--input", nerve.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(validator("multisset.schema.json").is_valid(&v));
}

#[test]
fn classify_and_zigzag() {
    let hd = fixtures().join("hd_square.json");
    let out = nfold(&["classify", "--json", "--input", hd.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["class"], "PhG");
    let q2 = fixtures().join("q2_z2.json");
    let out = nfold(&["classify", "--json", "--input", q2.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["class"], "Gpt-embedded");
    let out = nfold(&["zigzag", "--input", q2.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let out = nfold(&["discretize", "--input", q2.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn verify_lifts_on_z2() {
    let input = fixtures().join("nerve_z2.json");
    let out = nfold(&[
        "verify-lifts",
        "-n",
        "2",
        "--bounds",
        "2,2",
        "--input",
        input.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}

#[test]
fn check_identities() {
    let z2 = fixtures().join("nerve_z2.json");
    for ident in ["pi0-qn", "lores", "pkloop", "ttamsamani"] {
        let out = nfold(&["check-identity", ident, "--input", z2.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{ident}: {}", stdout(&out));
    }
    let out = nfold(&[
        "check-identity",
        "lnerve-b",
        "--kmax",
        "2",
        "--input",
        z2.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let z2_b8 = fixtures().join("nerve_z2_b8.json");
    let out = nfold(&[
        "check-identity",
        "lnuph",
        "-n",
        "3",
        "--input",
        z2_b8.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}
