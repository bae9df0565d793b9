use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn hexad(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hexad")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn export(dir: &Path, id: &str) -> PathBuf {
    let o = hexad(&["catalog", "export", "--id", id]);
    assert!(o.status.success());
    let p = dir.join(format!("{id}.json"));
    fs::write(&p, &o.stdout).unwrap();
    p
}

fn last_json(o: &Output) -> Value {
    let text = stdout(o);
    serde_json::from_str(text.lines().last().unwrap()).unwrap()
}

fn jsonl(path: &Path) -> Vec<Value> {
    fs::read_to_string(path).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn classify_reports_semibiplane() {
    let dir = TempDir::new().unwrap();
    let f = export(dir.path(), "D20_1");
    let o = hexad(&["classify", f.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().next(), Some("semi-biplane sbp(20,6)"));
    assert_eq!(last_json(&o)["semibiplane"], true);
}

#[test]
fn classify_reports_scheme_and_gd() {
    let dir = TempDir::new().unwrap();
    let f = export(dir.path(), "D26_2");
    let o = hexad(&["classify", f.to_str().unwrap()]);
    let text = stdout(&o);
    assert!(text.starts_with("(26,6;1,6;0,2)\n"), "{text}");
    assert!(text.contains("singular group divisible"));
    let j = last_json(&o);
    assert_eq!(j["scheme"]["n1"], 24);
    assert_eq!(j["scheme"]["n2"], 1);
}

#[test]
fn iso_distinguishes_catalog_entries() {
    let dir = TempDir::new().unwrap();
    let a = export(dir.path(), "D26_2");
    let b = export(dir.path(), "D26_3");
    let o = hexad(&["iso", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).lines().next(), Some("non-isomorphic"));
    let o = hexad(&["iso", a.to_str().unwrap(), a.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().next(), Some("isomorphic"));
}

#[test]
fn aut_order_of_d22_3() {
    let dir = TempDir::new().unwrap();
    let f = export(dir.path(), "D22_3");
    let o = hexad(&["aut", f.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().next(), Some("order 110"));
    assert_eq!(last_json(&o)["transitive"], true);
}

#[test]
fn verify_flags_a_broken_design() {
    let dir = TempDir::new().unwrap();
    let good = export(dir.path(), "D16_1");
    assert!(hexad(&["verify", good.to_str().unwrap()]).status.success());
    let mut j: Value = serde_json::from_str(&fs::read_to_string(&good).unwrap()).unwrap();
    let blocks = j["blocks"].as_array_mut().unwrap();
    blocks.pop();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, j.to_string()).unwrap();
    let o = hexad(&["verify", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(last_json(&o)["witness"].is_array());
}

#[test]
fn canon_is_stable_under_relabeling() {
    let dir = TempDir::new().unwrap();
    let f = export(dir.path(), "D20_1");
    let o = hexad(&["canon", f.to_str().unwrap(), "--relabel", "10", "--seed", "4"]);
    assert!(o.status.success());
    assert_eq!(last_json(&o)["stable"], true);
}

#[test]
fn bad_input_exits_two() {
    let o = hexad(&["search", "--v", "18"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("18"));
    let dir = TempDir::new().unwrap();
    let junk = dir.path().join("junk.json");
    fs::write(&junk, "{not json").unwrap();
    assert_eq!(hexad(&["verify", junk.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(hexad(&["catalog", "export", "--id", "D99_9"]).status.code(), Some(2));
    let g = dir.path().join("g.txt");
    fs::write(&g, "degree 16\n(0,1)\n").unwrap();
    assert_eq!(hexad(&["search", "--group", g.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn search_sixteen_points_writes_one_class() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("run");
    let o = hexad(&["search", "--catalog-group", "D16_1", "--out", out.to_str().unwrap(), "--libexact-format"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let classes = jsonl(&out.join("classes.jsonl"));
    assert_eq!(classes.len(), 1);
    assert_eq!(classes[0]["hexads"], "2-(16,6,2) biplane");
    assert_eq!(classes[0]["automorphism_order"], 11520);
    let summary = jsonl(&out.join("summary.json"));
    assert_eq!(summary[0]["classes"], 1);
    assert_eq!(summary[0]["capped"], false);
    let designs = jsonl(&out.join("designs.jsonl"));
    assert_eq!(designs.len() as u64, summary[0]["solutions"].as_u64().unwrap());
    assert!(out.join("km").read_dir().unwrap().count() > 0);
}

#[test]
fn search_output_is_deterministic_across_job_counts() {
    let dir = TempDir::new().unwrap();
    let mut outputs = Vec::new();
    for jobs in ["1", "3"] {
        let out = dir.path().join(format!("j{jobs}"));
        let o = hexad(&["search", "--catalog-group", "D20_1", "--jobs", jobs, "--out", out.to_str().unwrap()]);
        assert!(o.status.success());
        outputs.push((
            fs::read_to_string(out.join("designs.jsonl")).unwrap(),
            fs::read_to_string(out.join("classes.jsonl")).unwrap(),
        ));
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn limit_caps_the_run() {
    let o = hexad(&["search", "--catalog-group", "D16_1", "--limit", "2"]);
    assert_eq!(o.status.code(), Some(3));
    let lines: Vec<Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.iter().filter(|j| j["type"] == "design").count(), 2);
    assert_eq!(lines.last().unwrap()["capped"], true);
}

#[test]
fn cache_keeps_class_ids_across_runs() {
    let dir = TempDir::new().unwrap();
    let cache = dir.path().join("cache.json");
    let mut ids = Vec::new();
    for group in ["D20_1", "D16_1", "D20_1"] {
        let o = hexad(&["search", "--catalog-group", group, "--cache", cache.to_str().unwrap()]);
        assert!(o.status.success());
        let lines: Vec<Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
        ids.push(
            lines.iter().filter(|j| j["type"] == "class").map(|j| j["cache_id"].as_u64().unwrap()).collect::<Vec<_>>(),
        );
    }
    assert_eq!(ids[0], ids[2]);
    assert!(ids[1].iter().all(|id| !ids[0].contains(id)));
}

#[test]
fn catalog_list_and_verify() {
    let o = hexad(&["catalog", "list"]);
    assert_eq!(stdout(&o).lines().count(), 33);
    let o = hexad(&["catalog", "verify"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("33/33 entries pass"));
}
