use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn opk(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_opk"));
    cmd.args(args).env_remove("OPK_CACHE");
    if let Some(dir) = cache {
        cmd.env("OPK_CACHE", dir);
    }
    cmd.output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = opk(args, None);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn without_timings(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timings");
    v
}

#[test]
fn partition_homology_over_the_integers() {
    let v = json(&["homology", "partition", "--r", "4", "--ring", "Z"]);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
    assert_eq!(keys, ["config", "results", "timings", "version"]);
    let r = &v["results"]["4"];
    assert_eq!(r["betti"], serde_json::json!({"3": 6}));
    assert_eq!(r["torsion"], serde_json::json!({}));
    assert_eq!(r["dims"], serde_json::json!({"1": 1, "2": 13, "3": 18}));
}

#[test]
fn koszul_check_over_f2() {
    let v = json(&["koszul-check", "--preset", "com", "--max-arity", "5", "--ring", "F2"]);
    let results = v["results"].as_object().unwrap();
    assert_eq!(results.len(), 5);
    assert!(results.values().all(|r| r["verdict"] == Value::Bool(true)));
    assert_eq!(v["config"]["ring"], "F2");
    let w = json(&["koszul-check", "--preset", "com", "--max-arity", "5", "--ring", "Fp", "--p", "2"]);
    assert_eq!(without_timings(v), without_timings(w));
}

#[test]
fn bar_dimensions_only() {
    let v = json(&["bar", "--preset", "assoc", "--arity", "4", "--dims-only"]);
    let r = &v["results"]["4"];
    assert_eq!(r["dims"], serde_json::json!({"1": 24, "2": 120, "3": 120}));
    assert!(r.get("betti").is_none());
}

#[test]
fn runs_are_deterministic() {
    let args = ["koszul-complex", "--kind", "koszul-right", "--preset", "lie", "--max-arity", "4", "--jobs", "3"];
    let a = without_timings(json(&args));
    let b = without_timings(json(&args));
    assert_eq!(a, b);
    for r in a["results"].as_object().unwrap().values() {
        assert_eq!(r["verdict"], Value::Bool(true));
    }
}

#[test]
fn cache_round_trip_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["character", "--preset", "lie", "--arity", "5"];
    let first = opk(&args, Some(dir.path()));
    assert!(first.status.success());
    let second = opk(&args, Some(dir.path()));
    let (a, b): (Value, Value) = (
        serde_json::from_slice(&first.stdout).unwrap(),
        serde_json::from_slice(&second.stdout).unwrap(),
    );
    assert_eq!(a["timings"]["cache"], "miss");
    assert_eq!(b["timings"]["cache"], "hit");
    assert_eq!(
        serde_json::to_vec(&without_timings(a.clone())).unwrap(),
        serde_json::to_vec(&without_timings(b)).unwrap()
    );
    let entry = std::fs::read_dir(dir.path()).unwrap().next().unwrap().unwrap().path();
    std::fs::write(&entry, b"{\"format\": 1, \"truncated").unwrap();
    let third = opk(&args, Some(dir.path()));
    assert!(third.status.success());
    assert!(String::from_utf8_lossy(&third.stderr).contains("warning"));
    let c: Value = serde_json::from_slice(&third.stdout).unwrap();
    assert_eq!(c["timings"]["cache"], "invalid");
    assert_eq!(without_timings(a), without_timings(c));
    let fourth: Value = serde_json::from_slice(&opk(&args, Some(dir.path())).stdout).unwrap();
    assert_eq!(fourth["timings"]["cache"], "hit");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.opd");
    std::fs::write(&bad, "operad T\ngen m arity 2 bogus\n").unwrap();
    let torsion = dir.path().join("torsion.opd");
    std::fs::write(
        &torsion,
        "operad T\ngen m arity 2 trivial\nrel m(m(x1,x2),x3) - m(m(x2,x3),x1)\nrel m(m(x1,x2),x3) + m(m(x2,x3),x1)\n",
    )
    .unwrap();
    let code = |args: &[&str]| opk(args, None).status.code().unwrap();
    assert_eq!(code(&["bar", "--arity", "3"]), 1);
    assert_eq!(code(&["bar", "--preset", "com", "--arity", "3", "--ring", "F4"]), 1);
    assert_eq!(code(&["no-such-command"]), 1);
    assert_eq!(code(&["bar", "--presentation", bad.to_str().unwrap(), "--arity", "3"]), 2);
    let out = opk(&["bar", "--presentation", torsion.to_str().unwrap(), "--arity", "3"], None);
    assert_eq!(out.status.code(), Some(3));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "obstruction");
    assert_eq!(code(&["bar", "--presentation", torsion.to_str().unwrap(), "--arity", "3", "--ring", "Q"]), 0);
    assert_eq!(code(&["--help"]), 0);
}

#[test]
fn csv_and_text_formats() {
    let out = opk(&["homology", "partition", "--max-arity", "3", "--format", "csv"], None);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[2].iter().take(4).collect::<Vec<_>>(), ["3", "2", "3", "2"]);
    let out = opk(&["levelization", "--preset", "com", "--arity", "3", "--format", "text"], None);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("verdict   true"));
}

#[test]
fn output_file_and_dual_emission() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("doc.json");
    let dual = dir.path().join("dual.opd");
    let status = opk(
        &["dual", "--preset", "lie", "--max-arity", "4", "--emit", dual.to_str().unwrap(), "--out", out.to_str().unwrap()],
        None,
    );
    assert!(status.status.success());
    assert!(status.stdout.is_empty());
    let v: Value = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    for r in v["results"].as_object().unwrap().values() {
        assert_eq!(r["verdict"], Value::Bool(true));
    }
    assert_eq!(v["results"]["3"]["details"]["relations"]["dual"], 2);
    let again = json(&["bar", "--presentation", dual.to_str().unwrap(), "--arity", "3"]);
    assert_eq!(again["results"]["3"]["dims"], serde_json::json!({"1": 1, "2": 3}));
}

#[test]
fn partition_character() {
    let v = json(&["character", "--of", "partition", "--arity", "4"]);
    assert_eq!(
        v["results"]["4"]["characters"],
        serde_json::json!({"1+1+1+1": "6", "2+1+1": "0", "2+2": "-2", "3+1": "0", "4": "0"})
    );
}
