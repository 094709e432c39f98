use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn deckpair(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_deckpair"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn write(dir: &Path, name: &str, body: &str) {
    fs::write(dir.join(name), body).unwrap();
}

const CHAIN3: &str = r#"{"labels":["a","m","z"],"covers":[["a","m"],["m","z"]]}"#;
const SEAM: &str = r#"{"seam":["m"],"f_side":["z"],"s_side":["a"],"mode":"foldable"}"#;

#[test]
fn build_r_writes_the_42_element_gadget() {
    let dir = TempDir::new().unwrap();
    let o = deckpair(&["build", "r", "--out", "out"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = read_json(&dir.path().join("out/r.json"));
    assert_eq!(r["labels"].as_array().unwrap().len(), 42);
    assert_eq!(r["named"]["c_b"][0], "cb");
}

#[test]
fn build_pair_writes_both_towers_and_ranks() {
    let dir = TempDir::new().unwrap();
    let o = deckpair(&["build", "pair", "--n", "1", "--out", "a"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["P1.json", "P2.json", "ranks.json"] {
        assert!(dir.path().join("a").join(f).exists(), "{f} missing");
    }
    let ranks = read_json(&dir.path().join("a/ranks.json"));
    assert_eq!(ranks["ranks"].as_array().unwrap().len(), 2);

    deckpair(&["build", "pair", "--n", "1", "--out", "b"], dir.path());
    for f in ["P1.json", "P2.json", "ranks.json"] {
        let a = fs::read(dir.path().join("a").join(f)).unwrap();
        let b = fs::read(dir.path().join("b").join(f)).unwrap();
        assert_eq!(a, b, "{f} differs between runs");
    }
}

#[test]
fn build_rejects_bad_parameters() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&deckpair(&["build", "pair", "--n", "0"], dir.path())), 2);
    assert_eq!(code(&deckpair(&["build", "folded-pair", "--s", "3"], dir.path())), 2);
}

#[test]
fn dot_export_of_small_posets() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "c.json", CHAIN3);
    write(dir.path(), "e.json", r#"{"labels":[],"covers":[]}"#);
    let o = deckpair(&["export-dot", "c.json"], dir.path());
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).matches("->").count(), 2);
    let o = deckpair(&["export-dot", "e.json", "--out", "e.dot"], dir.path());
    assert_eq!(code(&o), 0);
    let dot = fs::read_to_string(dir.path().join("e.dot")).unwrap();
    assert!(!dot.contains("->") && !dot.contains("rank=same"));
}

#[test]
fn ecr_of_a_poset_with_itself_is_one() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "c.json", CHAIN3);
    let o = deckpair(&["ecr", "c.json", "c.json", "--out", "m"], dir.path());
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("ecr 1 "), "{}", stdout(&o));
    assert_eq!(
        read_json(&dir.path().join("m/matching.json")).as_array().unwrap().len(),
        3
    );
}

#[test]
fn input_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "c.json", CHAIN3);
    write(dir.path(), "two.json", r#"{"labels":["a","b"],"covers":[]}"#);
    write(dir.path(), "bad.json", "{ not json");
    write(
        dir.path(),
        "cyc.json",
        r#"{"labels":["a","b"],"covers":[["a","b"],["b","a"]]}"#,
    );
    assert_eq!(code(&deckpair(&["ecr", "c.json", "two.json"], dir.path())), 2);
    assert_eq!(code(&deckpair(&["export-dot", "bad.json"], dir.path())), 2);
    assert_eq!(code(&deckpair(&["export-dot", "cyc.json"], dir.path())), 2);
    assert_eq!(code(&deckpair(&["export-dot", "missing.json"], dir.path())), 2);
    assert_eq!(code(&deckpair(&["verify", "no-such-suite"], dir.path())), 2);
}

#[test]
fn fold_writes_the_folded_poset_and_report() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "c.json", CHAIN3);
    write(dir.path(), "seam.json", SEAM);
    let o = deckpair(&["fold", "c.json", "seam.json", "--out", "f"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let folded = read_json(&dir.path().join("f/folded.json"));
    let mut covers: Vec<String> = folded["covers"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| format!("{}<{}", c[0].as_str().unwrap(), c[1].as_str().unwrap()))
        .collect();
    covers.sort();
    assert_eq!(covers, ["a<m", "z<m"]);
    let report = read_json(&dir.path().join("f/fold-report.json"));
    assert_eq!(report["rank"], 1);
    assert_eq!(report["mode"], "foldable");

    // A chain against itself folds a two-chain onto the dual of a two-chain.
    let o = deckpair(
        &[
            "fold",
            "c.json",
            "seam.json",
            "--pair",
            "c.json",
            "seam.json",
            "--out",
            "g",
        ],
        dir.path(),
    );
    assert_eq!(code(&o), 3);
    assert!(stdout(&o).contains("FAIL no-dual-crossover-first"));
}

#[test]
fn verify_rigidity_passes_and_writes_a_report() {
    let dir = TempDir::new().unwrap();
    let o = deckpair(&["verify", "rigidity", "--seed", "3", "--out", "rep"], dir.path());
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let report = read_json(&dir.path().join("rep/rigidity.report.json"));
    assert_eq!(report["suite"], "rigidity");
    assert_eq!(report["seed"], 3);
    assert!(report["claims"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}
