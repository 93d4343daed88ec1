mod common;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use common::FIXTURES;

fn fixture(name: &str) -> PathBuf {
    Path::new(FIXTURES).join(name)
}

fn hopgdp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hopgdp"))
        .args(args)
        .env_remove("HOPGDP_BUDGET_S")
        .output()
        .expect("binary runs")
}

fn bw_args<'a>(problem: &'a str, extra: &[&'a str]) -> Vec<String> {
    let mut v: Vec<String> = vec![
        "-d".into(),
        fixture("blocksworld-domain.pddl").display().to_string(),
        "-p".into(),
        fixture(problem).display().to_string(),
        "-m".into(),
        fixture("blocksworld-methods.pddl").display().to_string(),
    ];
    v.extend(extra.iter().map(|s| s.to_string()));
    v
}

fn run(sub: &str, args: Vec<String>) -> Output {
    let mut all = vec![sub.to_string()];
    all.extend(args);
    let refs: Vec<&str> = all.iter().map(String::as_str).collect();
    hopgdp(&refs)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn blind_plan_for_two_blocks() {
    let o = run("plan", bw_args("bw2-problem.pddl", &["--planner", "blind"]));
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 5, "{out}");
    for (i, l) in lines[..4].iter().enumerate() {
        assert!(l.starts_with(&format!("{}: (", i + 1)), "{l}");
    }
    assert_eq!(lines[4], "; cost = 4");
}

#[test]
fn every_planner_finds_cost_four() {
    for planner in ["hopgdp", "hopgdp_blind", "astar_hl"] {
        let o = run("plan", bw_args("bw2-problem.pddl", &["--planner", planner]));
        assert_eq!(o.status.code(), Some(0), "{planner}");
        assert!(stdout(&o).ends_with("; cost = 4\n"), "{planner}");
    }
}

#[test]
fn unsolvable_exits_one() {
    let o = run("plan", bw_args("bw2-unsolvable.pddl", &[]));
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn emitted_trace_validates() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.json");
    let metrics = dir.path().join("metrics.json");
    let t = trace.display().to_string();
    let m = metrics.display().to_string();
    let o = run(
        "plan",
        bw_args("bw2-problem.pddl", &["--trace", &t, "--metrics", &m]),
    );
    assert_eq!(o.status.code(), Some(0));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&metrics).unwrap()).unwrap();
    assert_eq!(json["cost"], "4");

    let o = run("validate", bw_args("bw2-problem.pddl", &["--trace", &t]));
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o).trim(), "valid; cost = 4");
}

#[test]
fn tampered_trace_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.json");
    std::fs::write(&trace, r#"[{"action": "(pickup a)"}]"#).unwrap();
    let o = run(
        "validate",
        bw_args(
            "bw2-problem.pddl",
            &["--trace", &trace.display().to_string()],
        ),
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("invalid"));
}

#[test]
fn input_errors_exit_three() {
    let missing = run("plan", bw_args("no-such-problem.pddl", &[]));
    assert_eq!(missing.status.code(), Some(3));
    let planner = run("plan", bw_args("bw2-problem.pddl", &["--planner", "dfs"]));
    assert_eq!(planner.status.code(), Some(3));
    assert_eq!(hopgdp(&["frobnicate"]).status.code(), Some(3));
}

#[test]
fn exhausted_budget_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().display().to_string();
    let o = hopgdp(&["gen", "depots", "--size", "5", "--seed", "1", "-o", &out]);
    assert_eq!(o.status.code(), Some(0));
    let problem = stdout(&o).trim().to_string();
    let d = dir.path().join("domain.pddl").display().to_string();
    let m = dir.path().join("methods.pddl").display().to_string();
    let o = Command::new(env!("CARGO_BIN_EXE_hopgdp"))
        .args(["plan", "-d", &d, "-p", &problem, "-m", &m])
        .env("HOPGDP_BUDGET_S", "0")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn landmarks_prints_json_and_dot() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("lg.dot");
    let o = run(
        "landmarks",
        bw_args("bw2-problem.pddl", &["--dot", &dot.display().to_string()]),
    );
    assert_eq!(o.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let names: Vec<&str> = json["landmarks"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|l| {
            l["atoms"]
                .as_array()
                .unwrap()
                .iter()
                .map(|a| a.as_str().unwrap())
        })
        .collect();
    assert!(names.contains(&"(on a b)"), "{names:?}");
    assert!(std::fs::read_to_string(&dot)
        .unwrap()
        .starts_with("digraph"));
}

#[test]
fn smoke_bench_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let config = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../experiments/smoke.toml");
    let o = hopgdp(&[
        "bench",
        "-c",
        &config.display().to_string(),
        "-o",
        &out.display().to_string(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );

    let text = std::fs::read_to_string(out.join("results.jsonl")).unwrap();
    let records: Vec<serde_json::Value> = text
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(records.len(), 9);
    assert!(records.iter().all(|r| r["solved"] == true));
    for i in 0..3 {
        let costs: Vec<&serde_json::Value> = records
            .iter()
            .filter(|r| r["instance"] == i)
            .map(|r| &r["cost"])
            .collect();
        assert_eq!(costs.len(), 3);
        assert!(
            costs.iter().all(|c| *c == costs[0]),
            "instance {i}: {costs:?}"
        );
    }

    let csv = dir.path().join("summary.csv");
    let o = hopgdp(&[
        "summarize",
        "-i",
        &out.display().to_string(),
        "--csv",
        &csv.display().to_string(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let rows = hopgdp::bench::from_csv(&std::fs::read_to_string(&csv).unwrap()).unwrap();
    assert_eq!(rows.len(), 3);
    assert!(stdout(&o).contains("blocksworld: landmark search expands"));
}

#[test]
fn gen_writes_a_loadable_bundle() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().display().to_string();
    let o = hopgdp(&["gen", "logistics", "--size", "3", "--seed", "4", "-o", &out]);
    assert_eq!(o.status.code(), Some(0));
    let problem = stdout(&o).trim().to_string();
    let p = hopgdp::task::HgnProblem::from_files(
        &dir.path().join("domain.pddl"),
        Path::new(&problem),
        Some(&dir.path().join("methods.pddl")),
    );
    assert!(p.is_ok());
}
