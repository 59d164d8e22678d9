use std::process::{Command, Output};

use fqtnn::grassmannian::{CountTable, Filter, Subspace};

fn fqtnn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fqtnn"))
        .args(args)
        .env_remove("TNN_WORK_CAP")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn count_prints_the_number() {
    let o = fqtnn(&["count", "--k", "2", "--n", "4", "--p", "3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "32\n");

    let o = fqtnn(&["count", "--k", "2", "--n", "4", "--p", "3", "--filter", "all"]);
    assert_eq!(stdout(&o), "130\n");
}

#[test]
fn count_json_has_full_precision() {
    let o = fqtnn(&["count", "--k", "2", "--n", "6", "--p", "3", "--r", "2", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["count"].to_string(), "235151");
    assert_eq!(v["field"], serde_json::json!({"p": 3, "r": 2, "modulus": [1, 0, 1]}));
}

#[test]
fn table_csv_reproduces_the_f3_triangle() {
    let o = fqtnn(&["table", "--p", "3", "--max-n", "6", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,k,count"));
    let cells: Vec<&str> = lines.collect();
    assert_eq!(cells.len(), 28);
    assert!(cells.contains(&"4,2,32"));
    assert!(cells.contains(&"6,3,703"));
}

#[test]
fn table_json_round_trips() {
    let o = fqtnn(&["table", "--p", "5", "--max-n", "4", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let t = CountTable::from_json(&v).unwrap();
    assert_eq!(t.filter, Filter::Tnn);
    assert_eq!(t.get(2, 4).unwrap().to_string(), "122");
    assert_eq!(t.to_json(), v);
}

#[test]
fn verify_passes_and_reports_json() {
    let o = fqtnn(&["verify", "--suite", "closed-forms-f5", "--max-n", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["suite"], "closed-forms-f5");
    assert_eq!(v["status"], "pass");
}

#[test]
fn conjecture_scan_reports_rows() {
    let o = fqtnn(&["verify", "--suite", "conjecture-scan", "--max-n", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let notes = v["notes"].as_array().unwrap();
    assert!(notes.iter().any(|n| n.as_str().unwrap().starts_with("q=3 n=4: 1,15,32,15,1")));
}

#[test]
fn exit_codes() {
    assert_eq!(fqtnn(&["count", "--k", "2"]).status.code(), Some(2));
    assert_eq!(fqtnn(&["count", "--k", "2", "--n", "4", "--p", "4"]).status.code(), Some(2));
    assert_eq!(fqtnn(&["count", "--k", "5", "--n", "4", "--p", "3"]).status.code(), Some(2));
    assert_eq!(fqtnn(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(
        fqtnn(&["count", "--k", "3", "--n", "8", "--p", "7", "--work-cap", "1000"]).status.code(),
        Some(3)
    );
    let o = Command::new(env!("CARGO_BIN_EXE_fqtnn"))
        .args(["count", "--k", "2", "--n", "6", "--p", "3"])
        .env("TNN_WORK_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn output_does_not_depend_on_workers() {
    let base = ["enumerate", "--k", "2", "--n", "5", "--p", "5"];
    let one = fqtnn(&[&base[..], &["--workers", "1"]].concat());
    let four = fqtnn(&[&base[..], &["--workers", "4"]].concat());
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(stdout(&one).lines().count(), 1010);

    let t1 = fqtnn(&["table", "--p", "3", "--max-n", "5", "--workers", "1"]);
    let t3 = fqtnn(&["table", "--p", "3", "--max-n", "5", "--workers", "3"]);
    assert_eq!(t1.stdout, t3.stdout);
}

#[test]
fn modulus_override_gives_the_same_counts() {
    let a = fqtnn(&["count", "--k", "2", "--n", "4", "--p", "3", "--r", "2"]);
    let b = fqtnn(&["count", "--k", "2", "--n", "4", "--p", "3", "--r", "2", "--modulus", "2,1,1"]);
    assert!(b.status.success());
    assert_eq!(a.stdout, b.stdout);
    let bad = fqtnn(&["count", "--k", "2", "--n", "4", "--p", "3", "--r", "2", "--modulus", "2,0,1"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn dual_outputs_the_matrix_schema() {
    let o = fqtnn(&["dual", "--rows", "1,1,0;0,1,1", "--p", "3"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let d = Subspace::from_json(&v).unwrap();
    assert_eq!(d.k(), 1);
    assert_eq!(d.n(), 3);
    assert!(d.is_tnn());
    assert_eq!(d.matrix().to_rows(), vec![vec![1, 1, 1]]);
}

#[test]
fn positroid_answers() {
    let m = r#"{"n":4,"k":2,"bases":[[1,2],[1,4],[2,3],[3,4]]}"#;
    let f3 = fqtnn(&["positroid", "--matroid", m, "--p", "3"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&f3)).unwrap();
    assert_eq!(v["is_positroid"], false);
    assert!(v["witness"].is_null());

    let f5 = fqtnn(&["positroid", "--matroid", m, "--p", "5"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&f5)).unwrap();
    assert_eq!(v["is_positroid"], true);
    let w = Subspace::from_json(&v["witness"]).unwrap();
    assert!(w.is_tnn());

    let bad = fqtnn(&["positroid", "--matroid", r#"{"n":4,"k":2,"bases":[[1,2],[3,4]]}"#, "--p", "5"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn fixed_points_lists_subspaces() {
    let o = fqtnn(&["fixed-points", "--k", "2", "--n", "4", "--p", "5"]);
    assert_eq!(
        stdout(&o),
        "{\"entries\":[[1,0,2,0],[0,1,0,2]],\"k\":2,\"n\":4}\n{\"entries\":[[1,0,3,0],[0,1,0,3]],\"k\":2,\"n\":4}\n"
    );
    let o = fqtnn(&["fixed-points", "--k", "2", "--n", "4", "--p", "5", "--tnn"]);
    assert_eq!(stdout(&o), "");
}

#[test]
fn closed_form_values() {
    let o = fqtnn(&["closed-form", "--family", "f3", "--n", "6", "--variant", "6"]);
    assert_eq!(stdout(&o), "400\n");
    let o = fqtnn(&["closed-form", "--family", "f5", "--n", "5", "--variant", "2"]);
    assert_eq!(stdout(&o), "1010\n");
    let o = fqtnn(&["closed-form", "--family", "k1-nonneg", "--n", "3", "--poly"]);
    assert_eq!(stdout(&o), "1/4x^2 + x + 7/4\n");
    let o = fqtnn(&["closed-form", "--family", "k1-pos", "--n", "4", "--q", "9"]);
    assert_eq!(stdout(&o), "64\n");
    assert_eq!(fqtnn(&["closed-form", "--family", "f3", "--n", "6", "--variant", "7"]).status.code(), Some(2));
}

#[test]
fn output_file() {
    let dir = std::env::temp_dir().join(format!("fqtnn-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("t.csv");
    let o = fqtnn(&["table", "--p", "3", "--max-n", "3", "--output", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("n,k,count\n0,0,1\n"));
    std::fs::remove_dir_all(&dir).unwrap();
}
