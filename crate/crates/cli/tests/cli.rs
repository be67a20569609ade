use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn muller(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_muller")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn save(dir: &TempDir, name: &str, o: &Output) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, &o.stdout).unwrap();
    p
}

#[test]
fn tree_prints_the_memory_numbers() {
    let dir = TempDir::new().unwrap();
    let dot = dir.path().join("tree.dot");
    let out = muller(&["tree", path(&data("recurring_condition.json")), "--dot", path(&dot)]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "m=4 mU=3 r=2\n");
    assert!(std::fs::read_to_string(&dot).unwrap().starts_with("digraph"));

    let empty = dir.path().join("empty.json");
    std::fs::write(&empty, r#"{"colours": ["a", "b"], "winning": [], "empty_wins": false}"#).unwrap();
    let out = muller(&["tree", path(&empty), "--dag"]);
    assert_eq!(stdout(&out), "m=1 mU=1 r=1\n");
}

#[test]
fn malformed_input_exits_with_two() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\n  \"colours\": [\"a\",\n").unwrap();
    let out = muller(&["tree", path(&bad)]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 3"), "{err}");

    let missing = muller(&["bounds", "/nonexistent/condition.json"]);
    assert_eq!(code(&missing), 2);
    assert_eq!(code(&muller(&["frobnicate"])), 2);
}

#[test]
fn witness_synthesize_verify_pipeline() {
    let dir = TempDir::new().unwrap();
    let cond = data("recurring_condition.json");
    let w = muller(&["witness", path(&cond), "--sidecar", path(&dir.path().join("side.json"))]);
    assert_eq!(code(&w), 0);
    let arena = save(&dir, "witness.json", &w);
    let s = muller(&["synthesize", path(&arena), path(&cond), "--everywhere"]);
    assert_eq!(code(&s), 0);
    assert_eq!(json(&s)["memory"].as_array().unwrap().len(), 2);
    let strategy = save(&dir, "strategy.json", &s);
    let v = muller(&["verify", path(&arena), path(&cond), path(&strategy)]);
    assert_eq!(code(&v), 0);
    assert_eq!(json(&v)["verdict"], "almost_sure");

    let side: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("side.json")).unwrap()).unwrap();
    assert_eq!(side.as_array().unwrap().len(), json(&w)["states"].as_array().unwrap().len());

    let e = muller(&["verify", path(&arena), path(&cond), "--enumerate", "1", "--start", "E[abcd]"]);
    assert_eq!(code(&e), 1);
    assert_eq!(json(&e)["almost_sure"], 0);
}

#[test]
fn sure_strategy_beats_every_branch_strategy() {
    let dir = TempDir::new().unwrap();
    let cond = data("recurring_condition.json");
    let sure = dir.path().join("sure.json");
    let branches = dir.path().join("branches");
    let w = muller(&["witness", path(&cond), "--sure", path(&sure), "--branches", path(&branches)]);
    let arena = save(&dir, "witness.json", &w);
    let v = muller(&["verify", path(&arena), path(&cond), path(&sure), "--sure", "--start", "E[abcd]"]);
    assert_eq!(code(&v), 0);
    assert_eq!(json(&v)["verdict"], "sure_win");
    for i in 0..4 {
        let tau = branches.join(format!("branch_{i}.json"));
        let sim = muller(&[
            "simulate", path(&arena), path(&cond), path(&sure), "--adam", path(&tau),
            "--start", "E[abcd]", "--episodes", "50", "--horizon", "2000",
        ]);
        assert_eq!(code(&sim), 0);
        assert_eq!(json(&sim)["losses"], 0);
    }
}

#[test]
fn corrupted_strategy_is_refuted_and_replayed() {
    let dir = TempDir::new().unwrap();
    let cond = data("recurring_condition.json");
    let arena = data("recurring_arena.json");
    let s = muller(&["synthesize", path(&arena), path(&cond)]);
    let mut strategy = json(&s);
    // Always leave the centre towards the Adam state choosing between a and c.
    for (key, dist) in strategy["next"].as_object_mut().unwrap() {
        if key.starts_with("centre|") {
            *dist = serde_json::json!({ "n5": "1/1" });
        }
    }
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, strategy.to_string()).unwrap();
    let v = muller(&["verify", path(&arena), path(&cond), path(&bad)]);
    assert_eq!(code(&v), 1);
    let report = json(&v);
    assert_eq!(report["verdict"], "refuted");
    assert!(report["counterexample"]["component"].as_array().is_some_and(|c| !c.is_empty()));

    let report_file = save(&dir, "report.json", &v);
    let sim = muller(&[
        "simulate", path(&arena), path(&cond), path(&bad), "--counterexample", path(&report_file),
        "--episodes", "100", "--horizon", "500",
    ]);
    assert_eq!(code(&sim), 1);
    assert!(json(&sim)["losses"].as_u64().unwrap() > 0);
}

#[test]
fn zero_episodes_give_empty_stats() {
    let dir = TempDir::new().unwrap();
    let cond = data("coin_condition.json");
    let arena = data("coin_arena.json");
    let strategy = save(&dir, "s.json", &muller(&["synthesize", path(&arena), path(&cond)]));
    let sim = muller(&["simulate", path(&arena), path(&cond), path(&strategy), "--episodes", "0"]);
    assert_eq!(code(&sim), 0);
    let stats = json(&sim);
    assert_eq!(stats["episodes"], 0);
    assert_eq!(stats["win_rate"], Value::Null);
}

#[test]
fn outputs_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let cond = data("coin_condition.json");
    let arena = data("coin_arena.json");
    let strategy = save(&dir, "s.json", &muller(&["synthesize", path(&arena), path(&cond)]));
    let run = |seed: &str| {
        muller(&[
            "simulate", path(&arena), path(&cond), path(&strategy), "--seed", seed, "--episodes", "200",
            "--horizon", "100", "--details",
        ])
        .stdout
    };
    assert_eq!(run("3"), run("3"));
    let rec = data("recurring_condition.json");
    assert_eq!(muller(&["witness", path(&rec)]).stdout, muller(&["witness", path(&rec)]).stdout);
    let solve = |a: &Path, c: &Path| muller(&["solve", path(a), path(c)]).stdout;
    let ra = data("recurring_arena.json");
    assert_eq!(solve(&ra, &rec), solve(&ra, &rec));
}

#[test]
fn exports_reimport_unchanged() {
    let dir = TempDir::new().unwrap();
    let cond = data("recurring_condition.json");
    let w = muller(&["witness", path(&cond)]);
    let arena = save(&dir, "w.json", &w);
    let s = muller(&["synthesize", path(&arena), path(&cond)]);
    let strategy = save(&dir, "s.json", &s);
    // Synthesizing again on the re-imported arena gives the same bytes.
    assert_eq!(muller(&["synthesize", path(&arena), path(&cond)]).stdout, s.stdout);
    let v = muller(&["verify", path(&arena), path(&cond), path(&strategy)]);
    assert_eq!(code(&v), 0);
}

#[test]
fn enumeration_respects_the_cap() {
    let dir = TempDir::new().unwrap();
    let cond = data("recurring_condition.json");
    let arena = save(&dir, "w.json", &muller(&["witness", path(&cond)]));
    let out = Command::new(env!("CARGO_BIN_EXE_muller"))
        .args(["verify", path(&arena), path(&cond), "--enumerate", "1"])
        .env("MULLER_MAX_ENUM", "5")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8(out.stderr).unwrap().contains("above the bound"));
}

#[test]
fn sure_check_rejects_random_states() {
    let dir = TempDir::new().unwrap();
    let cond = data("coin_condition.json");
    let arena = data("coin_arena.json");
    let strategy = save(&dir, "s.json", &muller(&["synthesize", path(&arena), path(&cond)]));
    let v = muller(&["verify", path(&arena), path(&cond), path(&strategy), "--sure"]);
    assert_eq!(code(&v), 2);
}
