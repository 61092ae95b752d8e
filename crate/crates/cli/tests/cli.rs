use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use evo_core::Poly2;
use serde_json::Value;
use tempfile::TempDir;

fn evo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_evo"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.push("--json");
    let o = evo(&all);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).expect("valid json")
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn gen(dir: &TempDir, name: &str, args: &[&str]) -> PathBuf {
    let p = dir.path().join(name);
    let mut all = vec!["gen"];
    all.extend_from_slice(args);
    all.extend(["-o", p.to_str().unwrap()]);
    let o = evo(&all);
    assert!(o.status.success(), "gen {args:?}: {}", String::from_utf8_lossy(&o.stderr));
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn analyze_cyclic_four() {
    let dir = TempDir::new().unwrap();
    let c4 = gen(&dir, "c4.json", &["cyclic", "--n", "4"]);
    let o = evo(&["analyze", s(&c4)]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("ultimately periodic (0,4); train polynomial X^4+1"));
    let r = json(&["analyze", s(&c4)]);
    assert_eq!(r["schema"], 1);
    assert_eq!(r["profile"], serde_json::json!([0, 4]));
    assert_eq!(r["classification"]["kind"], "ultimately_periodic");
    assert_eq!(r["train"]["coefficients"], serde_json::json!([1, 0, 0, 0, 1]));
    assert_eq!(r["canonical"]["periodic"]["t"], serde_json::json!([2]));
}

#[test]
fn idempotent_line_is_quasi_constant() {
    let dir = TempDir::new().unwrap();
    let e = write(&dir, "e.json", r#"{"field":{"p":1},"dim":1,"squares":[[1]]}"#);
    let o = evo(&["analyze", s(&e)]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("quasi-constant of degree 1"));
    let r = json(&["analyze", s(&e)]);
    assert_eq!(r["classification"]["kind"], "quasi_constant");
    assert_eq!(r["classification"]["degree"], 1);
}

#[test]
fn orbit_of_alternating_element() {
    let dir = TempDir::new().unwrap();
    let c4 = gen(&dir, "c4.json", &["cyclic", "--n", "4"]);
    let r = json(&["orbit", s(&c4), "--element", "1,0,1,0"]);
    assert_eq!(r["preperiod"], 0);
    assert_eq!(r["period"], 2);
    let plain = stdout(&evo(&["orbit", s(&c4), "--element", "1,0,1,0"]));
    assert!(plain.contains("preperiod       0"));
    assert!(plain.contains("period          2"));
}

#[test]
fn striction_of_first_example() {
    let r = json(&["striction", "--poly", "5137"]);
    assert_eq!(r["striction"]["sigma"], 2);
    assert_eq!(r["striction"]["exponents"], serde_json::json!([0, 4, 10, 12]));
    let plain = stdout(&evo(&["striction", "--poly", "0b1010000010001"]));
    assert!(plain.contains("σ=2"));
    assert!(plain.contains("E={0,4,10,12}"));
}

#[test]
fn rule90_train_divides_paper_identity() {
    let dir = TempDir::new().unwrap();
    let r5 = gen(&dir, "r5.json", &["rule90", "--n", "5"]);
    let r = json(&["train", s(&r5)]);
    let exps: Vec<usize> = r["train"]["coefficients"]
        .as_array()
        .unwrap()
        .iter()
        .enumerate()
        .filter(|(_, c)| c.as_u64() == Some(1))
        .map(|(k, _)| k)
        .collect();
    let t = Poly2::from_exponents(&exps);
    assert!(t.divides(&Poly2::from_exponents(&[5, 3, 1])), "{t}");
}

#[test]
fn verify_paper_has_no_failures() {
    let o = evo(&["verify-paper"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("0 FAIL"));
    let r = json(&["verify-paper"]);
    assert_eq!(r["fail"], 0);
    let ids: Vec<&str> = r["rows"].as_array().unwrap().iter().map(|x| x["id"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
}

#[test]
fn weighted_file_reports_bernstein_profile() {
    let dir = TempDir::new().unwrap();
    let w = gen(&dir, "w.json", &["weighted-as", "--s", "2,1", "--field-degree", "2"]);
    let r = json(&["analyze", s(&w)]);
    assert_eq!(r["baric"]["bernstein"], serde_json::json!([2, 1]));
    assert_eq!(r["baric"]["weighted_train"]["degree"], 3);
    assert!(stdout(&evo(&["baric", s(&w)])).lines().any(|l| l.contains("bernstein") && l.ends_with("(2,1)")));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", "{not json");
    assert_eq!(evo(&["analyze", s(&bad)]).status.code(), Some(2));
    let wrong_dim = write(&dir, "wd.json", r#"{"field":{"p":1},"dim":2,"squares":[[1]]}"#);
    assert_eq!(evo(&["analyze", s(&wrong_dim)]).status.code(), Some(2));
    assert_eq!(evo(&["analyze"]).status.code(), Some(2));
    assert_eq!(evo(&["striction", "--poly", "12z"]).status.code(), Some(2));
    let not_morphism = write(
        &dir,
        "nm.json",
        r#"{"field":{"p":1},"dim":2,"squares":[[1,0],[0,0]],
            "table":[[[1,0],[0,0]],[[0,0],[0,0]]],"weight":[1,1]}"#,
    );
    let o = evo(&["analyze", s(&not_morphism)]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("e2 e2"));
    let incompatible = evo(&["gen", "companion", "--poly", "2,3,1", "--field-degree", "2"]);
    assert_eq!(incompatible.status.code(), Some(4));
    let missing = dir.path().join("missing.json");
    assert_eq!(evo(&["analyze", s(&missing)]).status.code(), Some(4));
}

#[test]
fn json_error_body_carries_exit_code() {
    let o = evo(&["striction", "--poly", "nope", "--json"]);
    assert_eq!(o.status.code(), Some(2));
    let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["schema"], 1);
    assert_eq!(r["exit_code"], 2);
}

#[test]
fn plain_and_json_agree() {
    let dir = TempDir::new().unwrap();
    for (name, args) in [
        ("r3.json", vec!["rule90", "--n", "3"]),
        ("rm.json", vec!["remark"]),
        ("ct.json", vec!["cycle-tail", "--p", "3", "--n", "2"]),
        ("rnd.json", vec!["random", "--dim", "4", "--field-degree", "2"]),
    ] {
        let f = gen(&dir, name, &args);
        let r = json(&["analyze", s(&f)]);
        let plain = stdout(&evo(&["analyze", s(&f)]));
        let (n, p) = (&r["profile"][0], &r["profile"][1]);
        assert!(plain.contains(&format!("profile         ({n},{p})")), "{name}: {plain}");
        let t = r["train"]["polynomial"].as_str().unwrap();
        assert!(plain.contains(&format!("train polynomial {t}")), "{name}");
        assert!(plain.contains(&format!("  degree        {}", r["train"]["degree"])));
    }
}

#[test]
fn every_generator_produces_a_loadable_algebra() {
    let dir = TempDir::new().unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["rule90", "--n", "6"],
        vec!["rule150", "--n", "5"],
        vec!["cyclic", "--n", "3"],
        vec!["remark"],
        vec!["quadratic", "--c", "0", "--m", "13"],
        vec!["f4-infinity"],
        vec!["random", "--dim", "3", "--general"],
        vec!["as", "--s", "3,1"],
        vec!["ast", "--s", "2", "--t", "1,0", "--q", "3", "--field-degree", "2"],
        vec!["cycle-tail", "--p", "2", "--n", "1"],
        vec!["companion", "--poly", "19"],
        vec!["companion", "--poly", "1,0,1", "--field-degree", "2"],
        vec!["weighted-as", "--s", "1"],
        vec!["perturbed-weighted-as", "--s", "2,1", "--field-degree", "2"],
    ];
    for (i, args) in cases.iter().enumerate() {
        let f = gen(&dir, &format!("g{i}.json"), args);
        let o = evo(&["analyze", s(&f)]);
        assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn random_generation_follows_the_seed() {
    let a = stdout(&evo(&["gen", "random", "--dim", "5", "--seed", "7"]));
    let b = stdout(&evo(&["gen", "random", "--dim", "5", "--seed", "7"]));
    let c = stdout(&evo(&["gen", "random", "--dim", "5"]));
    let d = stdout(&evo(&["gen", "random", "--dim", "5"]));
    assert_eq!(a, b);
    assert_eq!(c, d);
}

#[test]
fn semi_isomorphism_and_canon() {
    let dir = TempDir::new().unwrap();
    let r3 = gen(&dir, "r3.json", &["rule90", "--n", "3"]);
    let c4 = gen(&dir, "c4.json", &["cyclic", "--n", "4"]);
    let c4b = gen(&dir, "ast.json", &["ast", "--t", "2", "--q", "1", "--s", ""]);
    assert_eq!(json(&["semi-iso", s(&c4), s(&c4b)])["verdict"], "yes");
    let small = gen(&dir, "as.json", &["as", "--s", "1"]);
    let o = evo(&["semi-iso", s(&r3), s(&small)]);
    assert_eq!(o.status.code(), Some(4));
    let canon = json(&["canon", s(&r3)]);
    assert_eq!(canon["profile"], serde_json::json!([1, 1]));
    assert_eq!(canon["canonical"]["periodic"]["s"], serde_json::json!([1]));
}
