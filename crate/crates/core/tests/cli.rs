use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pade-universal"))
}

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn json(bytes: &[u8]) -> Value {
    serde_json::from_slice(bytes).unwrap()
}

fn complex(v: &Value) -> (f64, f64) {
    (v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

fn without_timestamp(path: &Path) -> Value {
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    v["environment"]["timestamp"] = Value::Null;
    v
}

#[test]
fn pade_exp_one_one() {
    let out = run(&["pade", "--series", "exp:8", "--p", "1", "--q", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out.stdout);
    let a = &v["approximant"]["A"];
    let b = &v["approximant"]["B"];
    assert_eq!(complex(&a[1]).0, 0.5);
    assert_eq!(complex(&b[1]).0, -0.5);
    assert!(v["residual"].as_f64().unwrap() < 1e-10);
}

#[test]
fn pade_missing_cell_exits_two() {
    let out = run(&["pade", "--series", "geometric:8", "--p", "1", "--q", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let diag = json(&out.stderr);
    assert_eq!(diag["error"], "pade_not_exist");
    assert!(diag["hankel"]["abs"].as_f64().unwrap() <= diag["hankel"]["threshold"].as_f64().unwrap());
}

#[test]
fn pade_zero_denominator_degree_echoes_the_partial_sum() {
    let out = run(&["pade", "--series", "[1, 2, 3, 4]", "--p", "2", "--q", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out.stdout);
    let a: Vec<(f64, f64)> = v["approximant"]["A"].as_array().unwrap().iter().map(complex).collect();
    assert_eq!(a, vec![(1.0, 0.0), (2.0, 0.0), (3.0, 0.0)]);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["pade", "--series", "exp:8"]).status.code(), Some(1));
    let out = run(&["pade", "--series", "nonsense:3", "--p", "1", "--q", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(json(&out.stderr)["error"].is_string());
}

#[test]
fn table_is_csv() {
    let out = run(&["table", "--series", "geometric:8", "--p-max", "2", "--q-max", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows = pade_universal::report::parse_pade_table(&text).unwrap();
    assert_eq!(rows.len(), 9);
    assert!(rows.iter().filter(|r| r.q == 0).all(|r| r.exists));
}

#[test]
fn family_interior_two() {
    let out = run(&["family", "--domain", "disk", "--mode", "interior", "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out.stdout);
    assert_eq!(v["primitives"][0]["kind"], "filled_disk");
    assert_eq!(v["primitives"][0]["radius"], 0.5);
}

#[test]
fn build_verify_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("a.json");
    let second = dir.path().join("b.json");
    for out in [&first, &second] {
        let status = run(&[
            "build",
            "--scenario",
            scenario("desk.json").to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(
            status.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&status.stderr)
        );
    }
    assert_eq!(without_timestamp(&first), without_timestamp(&second));

    let record = without_timestamp(&first);
    let cert = &record["certificates"][0];
    assert_eq!(cert["passed"], true);
    assert!(cert["achieved"]
        .as_object()
        .unwrap()
        .values()
        .all(|v| v.as_f64().unwrap() < 0.02));

    let verified = dir.path().join("v.json");
    let out = run(&[
        "verify",
        "--record",
        first.to_str().unwrap(),
        "--out",
        verified.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out.stdout)["reproduced"], true);
    assert_eq!(without_timestamp(&verified)["certificates"], record["certificates"]);
}

#[test]
fn build_failures_use_the_exit_table() {
    let dir = tempfile::tempdir().unwrap();
    let mut desk: Value = serde_json::from_str(&std::fs::read_to_string(scenario("desk.json")).unwrap()).unwrap();

    let mut short = desk.clone();
    short["F"] = serde_json::json!([[1, 0], [2, 1], [3, 2]]);
    let path = dir.path().join("short.json");
    std::fs::write(&path, short.to_string()).unwrap();
    let out = run(&[
        "build",
        "--scenario",
        path.to_str().unwrap(),
        "--out",
        dir.path().join("o.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(5));
    assert_eq!(json(&out.stderr)["error"], "index_exhausted");

    desk["requirement"]["L"] = serde_json::json!({"kind": "filled_disk", "center": [2.5, 0], "radius": 0.2});
    let path = dir.path().join("overlap.json");
    std::fs::write(&path, desk.to_string()).unwrap();
    let out = run(&[
        "build",
        "--scenario",
        path.to_str().unwrap(),
        "--out",
        dir.path().join("o.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out.stderr)["error"], "overlap");
}

#[test]
fn seleznev_and_greedy_runs() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("s.json");
    let out = run(&[
        "seleznev",
        "--scenario",
        scenario("seleznev.json").to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        without_timestamp(&out_path)["certificates"].as_array().unwrap().len(),
        1
    );

    let mut greedy: Value = serde_json::from_str(&std::fs::read_to_string(scenario("greedy.json")).unwrap()).unwrap();
    let two: Vec<Value> = greedy["schedule"].as_array().unwrap()[..2].to_vec();
    greedy["schedule"] = Value::Array(two);
    let scen = dir.path().join("g2.json");
    std::fs::write(&scen, greedy.to_string()).unwrap();
    let out_path = dir.path().join("g.json");
    let out = run(&[
        "greedy",
        "--scenario",
        scen.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let certs = without_timestamp(&out_path)["certificates"].clone();
    assert_eq!(certs.as_array().unwrap().len(), 2);
    assert!(certs.as_array().unwrap().iter().all(|c| c["passed"] == true));

    let out = run(&["verify", "--record", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn library_entry_point_matches_the_binary() {
    let code = pade_universal::cli::run(["pade-universal", "family", "--mode", "off-closure", "--k", "1"]);
    assert_eq!(code, 0);
    assert_eq!(
        pade_universal::cli::run(["pade-universal", "family", "--mode", "sideways", "--k", "1"]),
        1
    );
}
