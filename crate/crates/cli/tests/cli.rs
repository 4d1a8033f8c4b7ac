use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_collatz-db"))
        .args(args)
        .env_remove("COLLATZ_DB_MAX_VERTICES")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    serde_json::from_str(&stdout(args)).unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

fn tmp(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

#[test]
fn permutation_json() {
    let v = json(&["conj", "perm", "--map", "collatz", "--k", "4", "--format", "json"]);
    assert_eq!(v["cycles"], serde_json::json!([[1, 5], [2, 10], [9, 13]]));
    assert_eq!(v["size"], 16);
    assert_eq!(v["order"], 2);
    let text = stdout(&["conj", "perm", "--map", "f0", "--k", "2", "--digit-order", "msd"]);
    assert_eq!(text, "(1,4,5,7,3,2,6)\norder 7\n");
}

#[test]
fn permutation_json_field_order() {
    let text = stdout(&["conj", "perm", "--k", "3", "--format", "json"]);
    assert_eq!(
        text,
        "{\"size\":8,\"images\":[0,5,2,3,4,1,6,7],\"cycles\":[[1,5]],\"order\":2}\n"
    );
}

#[test]
fn sequences_and_counts() {
    assert_eq!(stdout(&["seq", "fkm", "--p", "2", "--k", "4"]), "0000100110101111\n");
    assert_eq!(stdout(&["count", "necklaces", "--p", "2", "--k", "6"]), "9\n");
    assert_eq!(stdout(&["words", "lyndon", "--p", "2", "--k", "3"]), "001\n011\n");
    assert_eq!(code(&["seq", "verify", "--p", "2", "--k", "3", "00010111"]), 0);
    assert_eq!(code(&["seq", "verify", "--p", "2", "--k", "3", "00011011"]), 1);
}

#[test]
fn phi_modes() {
    assert_eq!(stdout(&["conj", "phi", "--map", "collatz", "--exact", "5"]), "-13/3\n");
    assert_eq!(stdout(&["conj", "phi", "--exact", "-1/9"]), "5/3\n");
    assert_eq!(stdout(&["conj", "phi", "--truncated", "10110"]), "10010\n");
    assert_eq!(stdout(&["conj", "phi", "--inverse", "10010"]), "10110\n");
    let v = json(&["conj", "phi", "--exact", "1", "--format", "json"]);
    assert_eq!(v["value"], "-1/3");
    assert_eq!(v["digits"], "(10)");
}

#[test]
fn undetermined_exit_code() {
    let args = ["cycles", "classify", "--map", "an+b(5,1)", "--max-steps", "200", "7"];
    assert_eq!(code(&args), 3);
    assert_eq!(code(&["conj", "phi", "--map", "an+b(5,1)", "--exact", "7", "--max-steps", "200"]), 3);
    assert_eq!(code(&["cycles", "classify", "--map", "an+b(5,1)", "1", "13", "17"]), 0);
}

#[test]
fn verdicts() {
    assert_eq!(stdout(&["conj", "verify", "--k", "6"]), "true\n");
    assert_eq!(stdout(&["spectral", "check", "--map", "f0", "--k", "2"]), "true\n");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&["conj", "perm"]), 2);
    assert_eq!(code(&["conj", "phi", "--exact", "1/2"]), 2);
    assert_eq!(code(&["graph", "modular", "--map", "an+b(3,2)", "--m", "4"]), 2);
    assert_eq!(code(&["seq", "fkm", "--p", "2", "--k", "3", "--format", "dot"]), 2);
    let out = run(&["spectral", "check", "--k", "3", "--l-max", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("must be at least k"));
}

#[test]
fn resource_cap_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_collatz-db"))
        .args(["graph", "debruijn", "--p", "2", "--k", "3"])
        .env("COLLATZ_DB_MAX_VERTICES", "4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("resource limit"));
}

#[test]
fn graph_outputs() {
    let dot = stdout(&["graph", "modular", "--m", "3"]);
    assert!(dot.starts_with("digraph {\n  0;\n  1;\n  2;\n  0 -> 0 [label=\"0\"];"));
    let g = json(&["graph", "debruijn", "--p", "2", "--k", "2", "--format", "json"]);
    assert_eq!(g["m"], 4);
    assert_eq!(g["edges"].as_array().unwrap().len(), 8);
    let lg = json(&["graph", "line", "--k", "2", "--format", "json"]);
    let next = json(&["graph", "modular", "--k", "3", "--format", "json"]);
    assert_eq!(lg["m"], next["m"]);
    let t = json(&["graph", "transpose", "--of", "debruijn", "--k", "2", "--format", "json"]);
    assert_eq!(t["edges"][0], serde_json::json!([0, 0, 0]));
}

#[test]
fn output_file_and_map_file() {
    let map = tmp("f0.json");
    std::fs::write(&map, r#"{"p":3,"branches":[[2,0],[4,-1],[4,1]]}"#).unwrap();
    let dest = tmp("perm.txt");
    let m = map.to_str().unwrap();
    let d = dest.to_str().unwrap();
    assert_eq!(stdout(&["conj", "perm", "--map-file", m, "--k", "2", "--output", d]), "");
    assert_eq!(std::fs::read_to_string(&dest).unwrap(), "(1,4,7)(3,6)\norder 6\n");
    std::fs::write(&map, r#"{"p":2,"branches":[[1,0],[3,0]]}"#).unwrap();
    assert_eq!(code(&["conj", "perm", "--map-file", m, "--k", "2"]), 2);
}

#[test]
fn cycles_json() {
    let v = json(&["cycles", "from-word", "100", "--format", "json"]);
    assert_eq!(
        v,
        serde_json::json!([{"word": "100", "b": 5, "rational_cycle": ["1/5", "4/5", "2/5"], "integer_cycle": [1, 4, 2]}])
    );
    let v = json(&["cycles", "for-b", "--b", "5", "--max-len", "5", "--format", "json"]);
    let words: Vec<&str> = v.as_array().unwrap().iter().map(|c| c["word"].as_str().unwrap()).collect();
    assert_eq!(words, ["001", "00111", "01011"]);
}

#[test]
fn output_is_deterministic() {
    let args = ["words", "lyndon", "--p", "3", "--k", "6", "--format", "json"];
    assert_eq!(stdout(&args), stdout(&args));
}

#[test]
fn help_names_constructs() {
    let help = stdout(&["--help"]);
    for needle in ["De Bruijn", "conjugacy", "Lyndon", "3n+b"] {
        assert!(help.contains(needle), "missing {needle}");
    }
    assert!(stdout(&["graph", "modular", "--help"]).contains("C^(f)(m)"));
    assert!(stdout(&["seq", "fkm", "--help"]).contains("FKM"));
}
