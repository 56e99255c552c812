use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_torsionlab"))
        .args(args)
        .env_remove("TORSIONLAB_DATA")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = run(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn cyclic_bound_value() {
    let v = json(&["bound", "cyclic", "--l", "2", "--t", "3", "--rkF", "0"]);
    assert_eq!(v["value"], 4);
    assert_eq!(v["formula"], "cyclic-rank");
    for key in ["formula", "inputs", "value", "notes"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn torsion_bound_unit_discriminant() {
    let v = json(&["bound", "torsion", "--l", "2", "--r", "1", "--d", "1", "--D", "1", "--rkF", "0"]);
    assert_eq!(v["value"].as_f64(), Some(0.0));
}

#[test]
fn impossible_discriminant_exits_one() {
    let out = run(&["bound", "torsion", "--l", "2", "--r", "1", "--d", "1", "--D", "2", "--rkF", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("impossible discriminant"));
}

#[test]
fn bad_arguments_exit_one() {
    assert_eq!(run(&["bound", "cyclic", "--l", "x"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn tower_calculator() {
    let v = json(&["tower", "--l", "2", "--counts", "3,5", "--t", "3"]);
    assert_eq!(v["tower_bound"], 16);
    assert_eq!(v["simple_bound"], 24);
    assert_eq!(v["substitution_holds"], true);
}

#[test]
fn classgroup_single_and_batch() {
    let v = json(&["classgroup", "--disc", "-20"]);
    let keys = ["D", "h", "invariants", "two_rank", "omega", "genus_ok", "main0_bound", "sharp_bound"];
    let obj = v.as_object().unwrap();
    assert_eq!(obj.len(), keys.len());
    for k in keys {
        assert!(obj.contains_key(k), "missing {k}");
    }
    assert_eq!(v["h"], 2);
    assert_eq!(v["genus_ok"], true);

    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("cl.csv");
    let out = run(&["--csv", csv.to_str().unwrap(), "classgroup", "--limit", "100"]);
    assert!(out.status.success());
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("D,h,invariants,two_rank,omega,genus_ok,main0_bound,sharp_bound"));
    assert!(text.contains("\n-84,4,2.2,2,3,true,"));
}

#[test]
fn classgroup_rejects_non_fundamental() {
    let out = run(&["classgroup", "--disc", "-12"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn afull_report_and_tolerance() {
    let v = json(&["afull", "--a", "2", "--X", "100"]);
    assert_eq!(v["count"], 14);
    for key in ["a", "X", "count", "constant", "deviation"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(run(&["afull", "--a", "2", "--X", "100", "--tol", "1e-9"]).status.code(), Some(1));
}

#[test]
fn verify_suites_pass() {
    for args in [
        &["verify", "genus", "--limit", "5000"][..],
        &["verify", "afull", "--a", "2", "--X", "1e10"],
        &["verify", "deg-ind", "--max-degree", "4"],
        &["verify", "nilpotent", "--max-degree", "8"],
        &["--seed", "7", "verify", "moments", "--series", "500"],
    ] {
        let out = run(args);
        assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stdout));
        assert!(String::from_utf8_lossy(&out.stdout).contains(" 0 violations") || args[1] == "afull");
    }
}

#[test]
fn moments_depend_only_on_seed() {
    let a = json(&["--seed", "11", "verify", "moments", "--series", "200"]);
    let b = json(&["--seed", "11", "verify", "moments", "--series", "200"]);
    assert_eq!(a, b);
}

#[test]
fn group_commands() {
    let v = json(&["group", "a", "--group", "4T3"]);
    assert_eq!(v["order"], 8);
    assert_eq!(v["a"], 1);
    let v = json(&["group", "ind", "--perm", "(1,2,3)(4,5)"]);
    assert_eq!(v["ind"], 3);
    let v = json(&["group", "decompose", "--group", "6T1"]);
    assert_eq!(v["isomorphic"], true);
    assert_eq!(v["factors"].as_array().unwrap().len(), 2);
    let v = json(&["group", "tower", "--group", "8T3"]);
    assert_eq!(v["prime"], 2);
    let v = json(&["group", "allowable", "--group", "3T1", "--k", "2"]);
    assert!(v["violations"].as_array().unwrap().is_empty());
    let out = run(&["group", "a", "--group", "99T1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn census_pipeline_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("q.jsonl");
    let d = data.to_str().unwrap();
    assert!(run(&["census", "generate", "--limit", "20000", "--invariants", "--out", d]).status.success());

    let growth = dir.path().join("growth.csv");
    let v = json(&["--csv", growth.to_str().unwrap(), "census", "growth", "--data", d]);
    let slope = v["fit"]["slope"].as_f64().unwrap();
    assert!((slope - 1.0).abs() < 0.1, "slope {slope}");
    assert!(fs::read_to_string(&growth).unwrap().starts_with("X,N\n"));

    let hist = dir.path().join("m.csv");
    let v = json(&["--csv", hist.to_str().unwrap(), "census", "multiplicity", "--data", d]);
    assert_eq!(v["max_a_D"], 1);
    assert!(fs::read_to_string(&hist).unwrap().starts_with("D,a_D\n3,1\n4,1\n"));

    let v = json(&["census", "rankcheck", "--data", d, "--ell", "2"]);
    assert!(v["violations"].as_array().unwrap().is_empty());
    assert!(v["checked"].as_u64().unwrap() > 6000);
}

#[test]
fn malformed_dataset_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.jsonl");
    let mut text = String::new();
    for (i, d) in [3u64, 4, 7, 8, 11].iter().enumerate() {
        text.push_str(&format!("{{\"label\":\"f{i}\",\"degree\":2,\"group\":\"2T1\",\"disc_norm\":{d}}}\n"));
    }
    text.push_str("{not json\n");
    fs::write(&bad, text).unwrap();
    let b = bad.to_str().unwrap();

    let strict = run(&["--strict", "census", "multiplicity", "--data", b]);
    assert_eq!(strict.status.code(), Some(2));
    let lenient = run(&["census", "multiplicity", "--data", b]);
    assert!(lenient.status.success());
    assert!(String::from_utf8_lossy(&lenient.stderr).contains("line 6"));

    let missing = run(&["census", "growth", "--data", dir.path().join("none.jsonl").to_str().unwrap()]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn data_override_is_honored() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("t.txt");
    fs::write(&table, "not a table\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_torsionlab"))
        .args(["group", "a", "--group", "4T3"])
        .env("TORSIONLAB_DATA", &table)
        .output()
        .unwrap();
    assert!(!out.status.success());
}
