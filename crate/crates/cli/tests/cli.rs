//! End-to-end tests driving the compiled binary.

use std::process::{Command, Output};

use serde_json::Value;

fn qpath(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qpath"))
        .args(args)
        .env_remove("QPATH_MAX_TERMS")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = qpath(args);
    assert!(
        out.status.success(),
        "qpath {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

/// Splits one CSV line under this tool's own quoting rules (quotes around
/// fields containing spaces; no embedded commas are ever produced).
fn csv_cells(line: &str) -> Vec<String> {
    line.split(',')
        .map(|cell| {
            let cell = cell.trim_matches('"');
            cell.replace("\"\"", "\"")
        })
        .collect()
}

#[test]
fn table_reports_classical_values_with_agreement() {
    let doc = json(&["table", "--family", "tangent", "--max-n", "4"]);
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    let values: Vec<&str> = rows
        .iter()
        .map(|r| r["value_at_one"].as_str().unwrap())
        .collect();
    assert_eq!(values, ["1", "2", "16", "272", "7936"]);
    assert!(rows.iter().all(|r| r["agree"] == Value::Bool(true)));
    assert_eq!(doc["method"], "all");
    assert_eq!(doc["width"], "inf");
}

#[test]
fn table_reports_secant_polynomials() {
    let doc = json(&["table", "--family", "secant", "--max-n", "2"]);
    let rows = doc["rows"].as_array().unwrap();
    let last = rows.last().unwrap();
    assert_eq!(last["poly"], serde_json::json!(["2", "2", "1"]));
    assert_eq!(last["value_at_one"], "5");
}

#[test]
fn table_single_method_rows_carry_no_agreement_column() {
    let doc = json(&[
        "table", "--family", "tangent", "--max-n", "3", "--method", "dp", "--width", "2",
    ]);
    let rows = doc["rows"].as_array().unwrap();
    assert!(rows.iter().all(|r| r.get("agree").is_none()));
    // Width 2 already fixes n <= 2; the n = 3 count drops below the
    // unbounded 272 (the value is confirmed by enumerate --count).
    assert_eq!(rows[2]["value_at_one"], "16");
    assert_eq!(rows[3]["value_at_one"], "128");
}

#[test]
fn coeff_matches_hand_computed_examples() {
    let doc = json(&["coeff", "--family", "tangent", "--n", "2", "--width", "1"]);
    assert_eq!(doc["poly"], serde_json::json!(["1", "2", "1"]));
    assert_eq!(doc["value_at_one"], "4");

    let doc = json(&["coeff", "--family", "secant", "--n", "5", "--width", "1"]);
    assert_eq!(doc["poly"], serde_json::json!(["1"]));

    // No path of positive length fits under width 0; the zero polynomial
    // still renders one coefficient.
    let doc = json(&["coeff", "--n", "2", "--width", "0"]);
    assert_eq!(doc["poly"], serde_json::json!(["0"]));
    assert_eq!(doc["value_at_one"], "0");
}

#[test]
fn enumerate_counts_and_lists_deterministically() {
    let doc = json(&["enumerate", "--n", "1", "--family", "tangent", "--count"]);
    assert_eq!(doc["count"], "2");
    assert_eq!(doc.get("diagrams"), None);

    let doc = json(&["enumerate", "--n", "1", "--family", "secant", "--count"]);
    assert_eq!(doc["count"], "1");

    let doc = json(&["enumerate", "--n", "0", "--count"]);
    assert_eq!(doc["count"], "1");

    let doc = json(&["enumerate", "--n", "1", "--family", "tangent"]);
    let diagrams = doc["diagrams"].as_array().unwrap();
    assert_eq!(diagrams.len(), 2);
    assert_eq!(diagrams[0]["path"], "UD");
    assert_eq!(diagrams[0]["columns"], serde_json::json!([0, 0]));
    assert_eq!(diagrams[0]["weight"], 0);
    assert_eq!(diagrams[1]["columns"], serde_json::json!([0, 1]));
    assert_eq!(diagrams[1]["weight"], 1);
}

#[test]
fn enumerate_guards_exit_with_usage_code() {
    let out = qpath(&["enumerate", "--n", "11", "--count"]);
    assert_eq!(exit_code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("brute-force cap"));

    let out = qpath(&["enumerate", "--n", "5", "--family", "tangent"]);
    assert_eq!(exit_code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("--count"));
}

#[test]
fn verify_sampled_suite_passes() {
    let doc = json(&["verify", "--suite", "lemma5", "--tol", "1e-10"]);
    assert_eq!(doc["pass"], true);
    let suites = doc["suites"].as_array().unwrap();
    assert_eq!(suites.len(), 1);
    assert_eq!(suites[0]["name"], "lemma5");
    assert_eq!(suites[0]["evaluated_points"], 50);

    // A different seed samples different points and still passes.
    let doc = json(&["verify", "--suite", "lemma5", "--seed", "7"]);
    assert_eq!(doc["pass"], true);
}

#[test]
fn verify_rejects_all_complex_grid() {
    let out = qpath(&[
        "verify",
        "--suite",
        "w1",
        "--grid",
        "t=0.4..0.5:2,q=0.5..0.6:2",
    ]);
    assert_eq!(exit_code(&out), 1);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("real-root guard"), "stderr: {stderr}");
}

#[test]
fn verify_term_budget_env_is_validated() {
    let out = Command::new(env!("CARGO_BIN_EXE_qpath"))
        .args(["verify", "--suite", "lemma5"])
        .env("QPATH_MAX_TERMS", "abc")
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 1);

    let out = Command::new(env!("CARGO_BIN_EXE_qpath"))
        .args(["verify", "--suite", "lemma5"])
        .env("QPATH_MAX_TERMS", "0")
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 1);

    let out = Command::new(env!("CARGO_BIN_EXE_qpath"))
        .args(["verify", "--suite", "lemma5"])
        .env("QPATH_MAX_TERMS", "60000")
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 0);
}

#[test]
fn closed_method_requires_unbounded_width() {
    let out = qpath(&[
        "table", "--family", "tangent", "--max-n", "3", "--width", "2", "--method", "closed",
    ]);
    assert_eq!(exit_code(&out), 1);

    let out = qpath(&["coeff", "--n", "2", "--width", "1", "--method", "closed"]);
    assert_eq!(exit_code(&out), 1);
}

#[test]
fn usage_errors_and_help_have_distinct_exit_codes() {
    assert_eq!(exit_code(&qpath(&["--help"])), 0);
    assert_eq!(exit_code(&qpath(&["--version"])), 0);
    assert_eq!(exit_code(&qpath(&["table", "--family", "tangent", "--max-n", "-1"])), 1);
    assert_eq!(exit_code(&qpath(&["table", "--family", "cosine", "--max-n", "2"])), 1);
    assert_eq!(exit_code(&qpath(&["verify", "--suite", "nope"])), 1);
    assert_eq!(exit_code(&qpath(&["verify", "--suite", "lemma5", "--tol", "-1"])), 1);
}

#[test]
fn output_is_byte_deterministic() {
    let args = ["table", "--family", "tangent", "--max-n", "6"];
    assert_eq!(qpath(&args).stdout, qpath(&args).stdout);

    let args = ["verify", "--suite", "lemma5"];
    assert_eq!(qpath(&args).stdout, qpath(&args).stdout);
}

#[test]
fn csv_and_json_encode_identical_values() {
    let base = ["table", "--family", "secant", "--max-n", "5"];
    let doc = json(&base);
    let mut csv_args = base.to_vec();
    csv_args.extend(["--format", "csv"]);
    let out = qpath(&csv_args);
    assert_eq!(exit_code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,poly,value_at_one,agree"));

    for (row, line) in doc["rows"].as_array().unwrap().iter().zip(lines) {
        let cells = csv_cells(line);
        assert_eq!(cells[0], row["n"].to_string());
        let poly: Vec<String> = row["poly"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_str().unwrap().to_string())
            .collect();
        assert_eq!(cells[1], poly.join(" "));
        assert_eq!(cells[2], row["value_at_one"].as_str().unwrap());
        assert_eq!(cells[3], row["agree"].to_string());
    }
}

#[test]
fn output_flag_writes_the_same_document_to_a_file() {
    let path = std::env::temp_dir().join(format!("qpath-test-{}.json", std::process::id()));
    let path_str = path.to_str().unwrap();
    let direct = qpath(&["coeff", "--n", "3", "--family", "tangent"]);
    let filed = qpath(&[
        "coeff", "--n", "3", "--family", "tangent", "--output", path_str,
    ]);
    assert_eq!(exit_code(&filed), 0);
    assert!(filed.stdout.is_empty());
    let written = std::fs::read(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(written, direct.stdout);
}
