use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn upbook(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_upbook")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("JSON on stdout")
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("upbook-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn solve_then_verify_diamond() {
    let d = data("diamond.stg");
    let o = upbook(&["solve", "--k", "2", d.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let ube = tmp("diamond.ube");
    std::fs::write(&ube, &o.stdout).unwrap();
    let v = upbook(&["verify", d.to_str().unwrap(), ube.to_str().unwrap()]);
    assert_eq!(code(&v), 0);
    assert_eq!(json(&v)["valid"], true);
}

#[test]
fn fc_has_no_embedding_preserving_2ube() {
    let fc = data("fc.stg");
    let f = fc.to_str().unwrap();
    assert_eq!(code(&upbook(&["test-special", f])), 1);
    assert_eq!(code(&upbook(&["solve", "--k", "2", "--mode", "fixed", f])), 1);
    let o = upbook(&["test-2ube", "--mode", "fixed", f]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["answer"], false);
    let o = upbook(&["test-2ube", "--mode", "variable", f]);
    assert_eq!(code(&o), 0);
    assert!(json(&o)["per_node_types"].is_array());
}

#[test]
fn verify_rejects_a_bad_embedding() {
    let ube = tmp("bad.ube");
    std::fs::write(&ube, r#"{"k": 2, "pi": [0, 2, 1, 3], "sigma": {"0": 1, "1": 1, "2": 1, "3": 1}}"#).unwrap();
    let o = upbook(&["verify", data("diamond.stg").to_str().unwrap(), ube.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["valid"], false);
}

#[test]
fn errors_exit_with_two() {
    let bad = tmp("bad.stg");
    std::fs::write(&bad, "3 2\n0 1\nx y\n").unwrap();
    let o = upbook(&["validate", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("parse error"));
    assert_eq!(code(&upbook(&["validate", "/nonexistent/file.stg"])), 2);
    assert_eq!(code(&upbook(&["no-such-command"])), 2);
}

#[test]
fn budget_exhaustion_is_unknown() {
    let o = upbook(&["solve", "--k", "2", "--budget", "1", "--json", data("k4.stg").to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    assert!(json(&o)["answer"].is_null());
}

#[test]
fn validate_faces_dual() {
    let d = data("diamond.stg");
    let f = d.to_str().unwrap();
    assert_eq!(json(&upbook(&["validate", f]))["valid"], true);
    let faces = json(&upbook(&["faces", f]));
    assert_eq!(faces["faces"].as_array().unwrap().len(), 2);
    let dual = json(&upbook(&["dual", f]));
    assert_eq!(dual["dual"]["n"], 3);
}

#[test]
fn render_diamond() {
    let d = data("diamond.stg");
    let ube = tmp("render.ube");
    std::fs::write(&ube, r#"{"k": 2, "pi": [0, 1, 2, 3], "sigma": {"0": 1, "1": 1, "2": 2, "3": 2}}"#).unwrap();
    let svg = tmp("diamond.svg");
    let o = upbook(&["render", d.to_str().unwrap(), ube.to_str().unwrap(), "--svg", svg.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let doc = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(doc.matches("class=\"arc page-1\"").count(), 2);
    assert_eq!(doc.matches("class=\"arc page-2\"").count(), 2);
}

#[test]
fn generate_and_construct() {
    let o = upbook(&["gen", "rhombus-grid", "--w", "2", "--h", "2"]);
    assert_eq!(code(&o), 0);
    let g = tmp("grid.stg");
    std::fs::write(&g, &o.stdout).unwrap();
    let prefix = tmp("grid-out");
    let c = upbook(&["construct", "--method", "rhombi", g.to_str().unwrap(), "--out", prefix.to_str().unwrap()]);
    assert_eq!(code(&c), 0);
    let ube = prefix.with_extension("ube");
    let v = upbook(&["verify", g.to_str().unwrap(), ube.to_str().unwrap()]);
    assert_eq!(code(&v), 0);
    assert_eq!(json(&v)["embedding_preserving"], true);
}

#[test]
fn generation_is_reproducible() {
    let a = upbook(&["gen", "random-planar-st", "--n", "12", "--seed", "5"]);
    let b = upbook(&["gen", "random-planar-st", "--n", "12", "--seed", "5"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(code(&a), 0);
}

#[test]
fn reduce_emits_roles() {
    let inst = tmp("inst.json");
    std::fs::write(&inst, r#"{"S": ["a", "b", "c"], "R": [["a", "b", "c"]]}"#).unwrap();
    let o = upbook(&["reduce", "--k", "3", inst.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains(" triplet"));
    // the output is itself a readable graph
    let g = tmp("reduced.stg");
    std::fs::write(&g, &text).unwrap();
    let v = json(&upbook(&["validate", g.to_str().unwrap()]));
    assert_eq!(v["embedded"], false);
}
