use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};
use tempfile::NamedTempFile;

const LOCAL: &str = r#"{
  "model": {"kind": "local"},
  "algebras": {
    "A": {"class": "1/12"},
    "S": {"class": "0"},
    "Q": {"class": "1/4"},
    "Q3": {"class": "3/4"},
    "H": {"class": "1/2"},
    "E": {"class": "1/8"}
  }
}"#;

const GLOBAL: &str = r#"{
  "model": {"kind": "global", "places": [{"id": "v1"}, {"id": "v2"}, {"id": "inf", "real": true}]},
  "p": 2,
  "algebras": {
    "A": {"class": {"v1": "1/4", "v2": "3/4"}},
    "A3": {"class": {"v1": "3/4", "v2": "1/4"}}
  }
}"#;

// Z/2 x Z/2 with ind(1,0) = ind(0,1) = 2 but ind(1,1) = 8.
const BAD_A5: &str = r#"{
  "model": {"kind": "abstract", "p": 2, "exponents": [1, 1],
            "index_table": {"0,0": 1, "1,0": 2, "0,1": 2, "1,1": 8}}
}"#;

const BIQUATERNION: &str = r#"{
  "model": {"kind": "abstract", "p": 2, "exponents": [1, 1],
            "index_table": {"0,0": 1, "1,0": 2, "0,1": 2, "1,1": 4}},
  "algebras": {"B": {"class": [1, 1]}, "Q": {"class": [1, 0]}}
}"#;

fn model_file(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn run(model: Option<&str>, args: &[&str]) -> Output {
    let file = model.map(model_file);
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_flagmotive"));
    if let Some(f) = &file {
        cmd.arg("--model").arg(f.path());
    }
    cmd.args(args).output().unwrap()
}

fn ok_json(out: &Output) -> Value {
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn index_reports_primary_parts() {
    let v = ok_json(&run(Some(LOCAL), &["index", "A"]));
    assert_eq!(v["exponent"], 12);
    assert_eq!(v["index"], 12);
    assert_eq!(v["p_primary"]["2"]["class"], "3/4");
    assert_eq!(v["p_primary"]["3"]["class"], "1/3");

    let v = ok_json(&run(Some(LOCAL), &["index", "S"]));
    assert_eq!(
        (v["exponent"].clone(), v["index"].clone()),
        (json!(1), json!(1))
    );
    assert_eq!(v["p_primary"], json!({}));
}

#[test]
fn unknown_algebra_exits_2() {
    let out = run(Some(LOCAL), &["index", "B"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("\"B\""));
}

#[test]
fn reduce_profiles() {
    let v = ok_json(&run(Some(LOCAL), &["--p", "2", "reduce", "Q", "1", "Q"]));
    assert_eq!(v["mu_profile"], json!([2, 4, 4, 4]));
    assert_eq!(v["reduced_index"], 2);
    assert_eq!(v["gcd"], v["min"]);

    let v = ok_json(&run(Some(LOCAL), &["--p", "2", "reduce", "H", "1", "Q"]));
    assert_eq!(v["reduced_index"], 1);

    assert_eq!(
        run(Some(LOCAL), &["--p", "2", "reduce", "Q", "3", "Q"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn iso_runs_both_paths() {
    let v = ok_json(&run(Some(GLOBAL), &["iso", "2@A", "2@A3"]));
    assert_eq!(v["isomorphic"], true);
    assert_eq!(v["oracle_agrees"], true);

    let v = ok_json(&run(Some(LOCAL), &["--p", "2", "iso", "1@Q", "2@Q"]));
    assert_eq!(v["isomorphic"], false);
    assert_eq!(v["oracle_agrees"], true);
    assert_eq!(v["x"]["upper"]["level"], 0);
    assert_eq!(v["y"]["upper"]["level"], 1);

    // isotropic at p = 2: both upper motives are Tate
    let v = ok_json(&run(Some(LOCAL), &["--p", "2", "iso", "4@A", "0,4,12@A"]));
    assert_eq!(v["isomorphic"], true);
    assert_eq!(v["x"]["upper"]["kind"], "tate");
}

#[test]
fn malformed_flagspec_exits_2() {
    for spec in ["1Q", "@Q", "1,x@Q", "5@Q"] {
        let out = run(Some(LOCAL), &["--p", "2", "iso", spec, "2@Q"]);
        assert_eq!(out.status.code(), Some(2), "{spec}");
    }
}

#[test]
fn enumerate_and_dichotomy() {
    let v = ok_json(&run(Some(LOCAL), &["--p", "2", "enumerate", "E"]));
    assert_eq!(v["count"], 4);
    assert_eq!(v["motives"][0]["kind"], "tate");

    let v = ok_json(&run(Some(LOCAL), &["--p", "2", "dichotomy", "Q", "Q3"]));
    assert_eq!(v["result"], "equal");
    let v = ok_json(&run(Some(LOCAL), &["--p", "2", "dichotomy", "S", "Q"]));
    assert_eq!(v["result"], "disjoint");
}

#[test]
fn missing_prime_exits_2() {
    assert_eq!(run(Some(LOCAL), &["enumerate", "E"]).status.code(), Some(2));
    assert_eq!(
        run(Some(LOCAL), &["--p", "4", "enumerate", "E"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn abstract_model_uses_its_prime() {
    let v = ok_json(&run(Some(BIQUATERNION), &["index", "B"]));
    assert_eq!(v["exponent"], 2);
    assert_eq!(v["index"], 4);
    let v = ok_json(&run(Some(BIQUATERNION), &["dichotomy", "B", "Q"]));
    assert_eq!(v["result"], "disjoint");
}

#[test]
fn invalid_table_lists_witnesses() {
    let out = run(Some(BAD_A5), &["check"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("witness: A5"), "{stderr}");
    assert!(stderr.contains("[[0, 1], [1, 0]]"), "{stderr}");
}

#[test]
fn bad_documents_exit_2() {
    let cases = [
        "not json",
        r#"{"model": {"kind": "martian"}}"#,
        r#"{"model": {"kind": "local"}, "algebras": {"A": {"class": "1/0"}}}"#,
        r#"{"model": {"kind": "local"}, "algebras": {"A": {"class": "1/4", "degree": 6}}}"#,
        r#"{"model": {"kind": "global", "places": [{"id": "v1"}, {"id": "v2"}]},
            "algebras": {"A": {"class": {"v1": "1/4"}}}}"#,
    ];
    for doc in cases {
        assert_eq!(
            run(Some(doc), &["index", "A"]).status.code(),
            Some(2),
            "{doc}"
        );
    }
}

#[test]
fn reads_stdin_when_no_model_flag() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_flagmotive"))
        .args(["index", "Q"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(LOCAL.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(ok_json(&out)["index"], 4);
}

#[test]
fn output_is_deterministic() {
    let a = run(Some(GLOBAL), &["iso", "2@A", "1@A3"]);
    let b = run(Some(GLOBAL), &["iso", "2@A", "1@A3"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn check_document_sweep() {
    let v = ok_json(&run(Some(GLOBAL), &["check", "--primes", "2"]));
    assert_eq!(v["source"], "document");
    assert_eq!(v["total_failures"], 0);
    assert!(v["total_cases"].as_u64().unwrap() > 0);
}

#[test]
fn check_case_count_is_deterministic() {
    let args = [
        "check",
        "--max-n",
        "3",
        "--primes",
        "2,3",
        "--global-models",
        "20",
    ];
    let a = ok_json(&run(None, &args));
    let b = ok_json(&run(None, &args));
    assert_eq!(a["total_failures"], 0);
    assert_eq!(a["total_cases"], b["total_cases"]);
    assert_eq!(a, b);
}

#[test]
fn default_sweep_passes() {
    let v = ok_json(&run(None, &["check"]));
    assert_eq!(v["total_failures"], 0);
    assert_eq!(v["config"]["global_models"], 500);
}
