use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use unram_core::arith::rat;
use unram_core::certifier::{heis_data, CertifyConfig, TorsorSpec};
use unram_core::jacobian::FamilyParams;
use unram_core::specialization::{SpecializeConfig, Specializer};

fn unram(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_unram"));
    c.args(args);
    for (k, v) in env {
        c.env(k, v);
    }
    c.output().expect("run unram")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("JSON on stdout")
}

fn tmp(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(format!("cli-{name}"))
}

#[test]
fn validation_errors_exit_2() {
    for args in [
        vec!["certify", "--n", "3", "--lambda", "1"],
        vec!["certify", "--n", "4", "--lambda", "2"],
        vec!["certify", "--n", "3", "--lambda", "x"],
        vec!["specialize", "--n", "3", "--lambda", "2", "--height", "3", "--S", "5"],
        vec!["pairing", "--n", "3", "--lambda", "2", "--prime", "11"],
        vec!["group", "--n", "15", "--d", "1", "--check-axioms", "--exhaustive"],
        vec!["frobnicate"],
    ] {
        let o = unram(&args, &[]);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn group_smoke() {
    let o = unram(&["group", "--n", "3", "--d", "1", "--check-axioms", "--exhaustive"], &[]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["order"], "27");
    assert_eq!(v["exponent"], 3);
    assert_eq!(v["center_order"], 3);
    assert_eq!(v["exact_sequence"], true);
    assert_eq!(v["run"]["config"]["seed"], 0);
}

#[test]
fn help_names_every_subcommand() {
    let o = unram(&["--help"], &[]);
    let text = String::from_utf8_lossy(&o.stdout);
    for sub in ["group", "curve", "pairing", "certify", "specialize", "census", "replay"] {
        assert!(text.contains(sub), "{sub} missing from help");
    }
    let o = unram(&["certify", "--help"], &[]);
    assert!(String::from_utf8_lossy(&o.stdout).contains("geometrically connected"));
}

#[test]
fn budgets_come_from_the_environment_and_are_recorded() {
    let out = tmp("budget.jsonl");
    let o = unram(
        &["specialize", "--n", "3", "--lambda", "2", "--height", "4", "--S", "3", "--out", out.to_str().unwrap()],
        &[("UNRAM_FACTOR_BUDGET", "17"), ("UNRAM_SEED", "5")],
    );
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["run"]["config"]["budgets"]["factor_budget"], 17);
    assert_eq!(v["run"]["config"]["budgets"]["seed"], 5);
    let first = std::fs::read_to_string(&out).unwrap();
    let rec: Value = serde_json::from_str(first.lines().next().unwrap()).unwrap();
    assert_eq!(rec["config"]["factor_budget"], 17);
}

#[test]
fn specialize_is_deterministic() {
    let (a, b) = (tmp("det-a.jsonl"), tmp("det-b.jsonl"));
    for p in [&a, &b] {
        let o = unram(&["specialize", "--n", "3", "--lambda", "2", "--height", "15", "--S", "3", "--out", p.to_str().unwrap()], &[]);
        assert!(o.status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn record_replay_detects_tampering_and_keeps_unknowns() {
    let out = tmp("replay.jsonl");
    let o = unram(&["specialize", "--n", "3", "--lambda", "2", "--height", "6", "--S", "3", "--out", out.to_str().unwrap()], &[]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    let few: Vec<&str> = text.lines().take(4).collect();
    std::fs::write(&out, few.join("\n")).unwrap();
    let o = unram(&["replay", out.to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["verified"], true);
    assert_eq!(v["reproduced"], 4);

    let mut rec: Value = serde_json::from_str(few[0]).unwrap();
    rec["alphas"][0]["value"]["a"] = "5".into();
    let bad = tmp("replay-bad.jsonl");
    std::fs::write(&bad, serde_json::to_string(&rec).unwrap()).unwrap();
    let o = unram(&["replay", bad.to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(json(&o)["results"][0]["mismatches"][0], "alphas");

    // a record whose factorization gave up keeps its unknown verdicts
    let spec = TorsorSpec::family(FamilyParams::new(3, rat(2, 1)).unwrap(), 1).unwrap();
    let b = heis_data(&spec, &CertifyConfig::default()).unwrap();
    let mut cfg = SpecializeConfig::new(vec![3]);
    cfg.factor_budget = 0;
    let sp = Specializer::new(&b, cfg).unwrap();
    let rec = (0..20i64)
        .filter_map(|i| sp.specialize(&rat(1_000_003 + 2 * i, 999_983)).ok())
        .find(|r| r.has_unknown())
        .expect("an exhausted factorization");
    let unknown = tmp("unknown.jsonl");
    std::fs::write(&unknown, serde_json::to_string(&rec).unwrap()).unwrap();
    let o = unram(&["replay", unknown.to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["unknown"], 1);
    let r = &v["results"][0];
    assert_eq!(r["reproduced"], true);
    assert!(r["unramified_outside_s"].is_null() || r["split_at_s"].is_null() || r["connected"].is_null());
}

#[test]
fn malformed_replay_input_exits_2() {
    let bad = tmp("garbage.jsonl");
    std::fs::write(&bad, "{not json").unwrap();
    assert_eq!(unram(&["replay", bad.to_str().unwrap()], &[]).status.code(), Some(2));
    assert_eq!(unram(&["replay", "/nonexistent/file"], &[]).status.code(), Some(2));
}
