use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn trilie(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trilie")).args(args).env_remove("TRILIE_SEED").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn tmp(name: &str, contents: &str) -> PathBuf {
    let p = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

fn preset(name: &str) -> PathBuf {
    let o = trilie(&["preset", name]);
    assert!(o.status.success());
    tmp(&format!("{name}.json"), &stdout(&o))
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn tangle_of_b_state() {
    let b = preset("b");
    let o = trilie(&["tangle", "--state", path(&b)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("three_tangle = 1/4"), "{text}");
    assert!(text.contains("B-type = true"), "{text}");

    let o = trilie(&["--json", "tangle", "--state", path(&b)]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["b_type"], true);
    assert_eq!(v["profile"]["three_tangle"], "1/4");
}

#[test]
fn tangle_of_ghz_and_w() {
    for (name, t) in [("ghz", "1"), ("w", "0")] {
        let o = trilie(&["--json", "tangle", "--state", path(&preset(name))]);
        let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["profile"]["three_tangle"], t, "{name}");
        assert_eq!(v["b_type"], false);
    }
}

#[test]
fn we8_order_certified() {
    let gens = preset("we8");
    let o = trilie(&["group", "order", "--gens", path(&gens), "--method", "bsgs", "--verify", "--seed", "1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("order 348364800\n"), "{}", stdout(&o));
    assert!(stdout(&o).contains("verified"));
}

#[test]
fn a4_order_and_derived() {
    let gens = preset("a4");
    let o = trilie(&["--json", "group", "order", "--gens", path(&gens), "--method", "enumerate"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["order"], 12);
    let o = trilie(&["--json", "group", "derived", "--gens", path(&gens)]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["derived_order"], 4);
    assert_eq!(v["structure"]["name"], "A4");
    assert_eq!(v["structure"]["abelianization"], serde_json::json!([3]));
}

#[test]
fn enumeration_limit_is_reported() {
    let gens = preset("a4");
    let o = trilie(&["group", "order", "--gens", path(&gens), "--method", "enumerate", "--limit", "5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("limit"), "{}", stderr(&o));
}

#[test]
fn progress_is_line_delimited_json() {
    let gens = preset("a4");
    let o = trilie(&["group", "order", "--gens", path(&gens), "--progress"]);
    assert!(o.status.success());
    let lines: Vec<Value> = stderr(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!(!lines.is_empty());
    assert!(lines.iter().all(|v| v["event"] == "orbit"));
}

#[test]
fn sl3_roots() {
    let basis = preset("sl3");
    let o = trilie(&["lie", "roots", "--basis", path(&basis), "--cartan", "h1,h2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    // ±(-1,2) is printed through its lexicographically positive member
    for r in ["±(2,-1)", "±(1,-2)", "±(1,1)"] {
        assert!(text.contains(r), "{text}");
    }
    assert!(text.contains("type A2"));
    let o = trilie(&["lie", "roots", "--basis", path(&basis), "--cartan", "h1,q"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("\"q\""));
}

#[test]
fn closure_from_plain_generator_list() {
    let gens = preset("a4");
    let o = trilie(&["--json", "lie", "closure", "--basis", path(&gens)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["invariants"]["dim"], 9);
    assert_eq!(v["invariants"]["center_dim"], 1);
    assert_eq!(v["invariants"]["derived_dim"], 8);
}

#[test]
fn chevalley_table_and_killing() {
    let o = trilie(&["--json", "lie", "table", "--basis", path(&preset("ga4"))]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["checks"].as_array().unwrap().len(), 28);
    assert_eq!(v["all_pass"], true);
    assert_eq!(v["checks"][0]["check"], "[x1,x2]");

    let o = trilie(&["lie", "signature", "--basis", path(&preset("s4sl2"))]);
    assert_eq!(stdout(&o), "signature (2, 1, 0)\n");
}

#[test]
fn eigencheck_gates() {
    let o = trilie(&["eigencheck", "s2"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("signs +-- -+- --+ +++\n"));
    let o = trilie(&["eigencheck", "s3", "--triple", "three_qubit"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let o = trilie(&["eigencheck", "s3", "--triple", "two_qubit"]);
    assert_eq!(o.status.code(), Some(1));
    let o = trilie(&["eigencheck", "b"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("E7"), "{}", stderr(&o));
}

#[test]
fn parse_errors_name_the_line() {
    let bad = tmp("bad_state.json", "{\n  \"qubits\": 3,\n  \"amps\": [1, 2]\n}\n");
    let o = trilie(&["tangle", "--state", path(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line"), "{}", stderr(&o));
    let short = tmp(
        "short_state.json",
        r#"{"qubits": 3, "field": {"type": "rational"}, "amps": ["1", "0"]}"#,
    );
    let o = trilie(&["tangle", "--state", path(&short)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("2 amplitudes"), "{}", stderr(&o));
}

#[test]
fn reproduce_exit_codes() {
    let o = trilie(&["reproduce", "--section", "groups"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("SKIP  c06.we8.order"));
    let o = trilie(&["reproduce", "--section", "gates"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL  c04.b_type.x_a4"));
}

#[test]
fn reproduce_lie_entries() {
    let o = trilie(&["--json", "reproduce", "--section", "lie", "--section", "appendix"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let entries = v["entries"].as_array().unwrap();
    let get = |id: &str| entries.iter().find(|e| e["claim_id"] == id).unwrap();
    assert_eq!(get("c07.closure.dim")["expected"], "dim lie_closure(x_A4, y_A4) = 9");
    assert_eq!(get("c07.closure.dim")["status"], "pass");
    for id in ["c09.sl3.killing", "c09.s4.similarity", "c09.appendix.sign"] {
        assert_eq!(get(id)["status"], "flagged", "{id}");
    }
    let ids: Vec<&str> = entries.iter().map(|e| e["claim_id"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
}

#[test]
fn json_output_is_deterministic() {
    let gens = preset("we8");
    let args = ["--json", "group", "order", "--gens", path(&gens), "--seed", "5"];
    assert_eq!(trilie(&args).stdout, trilie(&args).stdout);
    let args = ["--json", "reproduce", "--section", "lie", "--no-timing"];
    assert_eq!(trilie(&args).stdout, trilie(&args).stdout);
}

#[test]
fn seed_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_trilie"))
        .args(["--json", "reproduce", "--section", "appendix"])
        .env("TRILIE_SEED", "7")
        .output()
        .unwrap();
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["seed"], 7);
}

#[test]
fn constants_listing() {
    let o = trilie(&["constants"]);
    assert!(stdout(&o).contains("sl3.killing"));
    let o = trilie(&["constants", "pauli.y"]);
    assert!(o.status.success());
    let o = trilie(&["--json", "constants", "s2"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rows"], 4);
}
