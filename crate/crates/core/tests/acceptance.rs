//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! and exits non-zero if any fails.

mod common;

use std::path::Path;
use std::sync::Arc;

use hopgdp::bench::{run_experiment, summarize, ExperimentConfig, ResultRecord};
use hopgdp::goals::GoalNetwork;
use hopgdp::heuristics::{BlindHeuristic, LandmarkHeuristic};
use hopgdp::landmarks::{compute_hgn_landmarks, Landmark, LandmarkGraph, OrderingKind};
use hopgdp::model::{execute_plan, State};
use hopgdp::search::{
    classical_astar, get_successors, hopgdp, oracle_optimal_cost, validate, Budget, OracleResult,
    SearchOptions, SearchResult, Solution, Step,
};
use hopgdp::task::HgnProblem;
use hopgdp::{Cost, Estimate};

use common::{generated, replay, DOMAINS};

/// Node limit for every exact-solver call.
const ORACLE_LIMIT: u64 = 2_000_000;
/// Expanded nodes checked for admissibility per run.
const ADMISSIBILITY_SAMPLE: usize = 1000;
const H2_FLOOR: f64 = 0.20;
const H1_FACTOR: u64 = 10;

/// BW ≤ 6 blocks, Logistics ≤ 3 packages, Depots ≤ 3 crates; 50 each.
fn small_suite() -> Vec<(&'static str, usize, u64)> {
    let mut out = Vec::new();
    for i in 0..50u64 {
        out.push(("blocksworld", 2 + (i % 5) as usize, i / 5));
        out.push(("logistics", 1 + (i % 3) as usize, i / 3));
        out.push(("depots", 1 + (i % 3) as usize, i / 3));
    }
    out.sort();
    out
}

struct Report {
    lines: Vec<(usize, String, bool, String)>,
}

impl Report {
    fn add(&mut self, n: usize, name: &str, pass: bool, detail: String) {
        println!(
            "criterion {n} {name}: {} ({detail})",
            if pass { "PASS" } else { "FAIL" }
        );
        self.lines.push((n, name.to_string(), pass, detail));
    }
}

#[derive(Default)]
struct Tally {
    instances: usize,
    cost_mismatches: Vec<String>,
    unsettled: Vec<String>,
    checked_nodes: usize,
    admissibility_violations: Vec<String>,
    admissibility_unsettled: usize,
    solutions_replayed: usize,
    landmarks_checked: usize,
    landmark_violations: Vec<String>,
    orderings_checked: usize,
    ordering_violations: Vec<String>,
    plans_checked: usize,
    invalid_plans: Vec<String>,
    evaluations: u64,
    audit_violations: u64,
    metrics_json: Vec<String>,
}

fn run_hopgdp(
    p: &HgnProblem,
    landmarks: bool,
    observe: Option<&mut Vec<(State, GoalNetwork, Estimate)>>,
    tally: &mut Tally,
) -> SearchResult {
    let mut observe = observe;
    let mut cb = |s: &State, gn: &GoalNetwork, _g: Cost, h: Estimate| {
        if let Some(v) = observe.as_mut() {
            v.push((s.clone(), gn.clone(), h));
        }
    };
    let opts = SearchOptions::default();
    if landmarks {
        let h = LandmarkHeuristic::new(Arc::clone(&p.task)).with_audit(true);
        let r = hopgdp(p, &p.initial, &p.network, &h, opts, Some(&mut cb));
        tally.evaluations += h.evaluations();
        tally.audit_violations += h.audit_violations();
        r
    } else {
        hopgdp(
            p,
            &p.initial,
            &p.network,
            &BlindHeuristic,
            opts,
            Some(&mut cb),
        )
    }
}

fn first_and_last(states: &[State], lm: &Landmark) -> Option<(usize, usize)> {
    let first = states.iter().position(|s| lm.holds(s))?;
    let last = states.iter().rposition(|s| lm.holds(s))?;
    Some((first, last))
}

/// Every landmark of every node on the solution path holds somewhere on the
/// rest of the execution; orderings between goal-seeded landmarks hold in
/// the first-before-last sense.
fn check_soundness(p: &HgnProblem, sol: &Solution, label: &str, t: &mut Tally) {
    let r = replay(p, &sol.trace);
    t.solutions_replayed += 1;
    for (i, node) in r.nodes.iter().enumerate() {
        let lg: LandmarkGraph = compute_hgn_landmarks(&node.state, &node.network, &p.task);
        let rest = &r.states[node.from..];
        for (_, lm) in lg.landmarks() {
            t.landmarks_checked += 1;
            if first_and_last(rest, lm).is_none() {
                t.landmark_violations
                    .push(format!("{label} node {i}: {lm:?}"));
            }
        }
        let atoms = |t| -> Vec<_> {
            node.network
                .goal(t)
                .and_then(|g| g.as_conjunction())
                .into_iter()
                .flatten()
                .filter(|l| l.positive)
                .filter_map(|l| lg.find(&Landmark::fact(l.fact)))
                .collect()
        };
        for &(before, after) in node.network.edges() {
            for a in atoms(before) {
                for b in atoms(after) {
                    if a == b || lg.ordering(a, b) != Some(OrderingKind::Natural) {
                        continue;
                    }
                    t.orderings_checked += 1;
                    let (la, lb) = (lg.get(a).unwrap(), lg.get(b).unwrap());
                    match (first_and_last(rest, la), first_and_last(rest, lb)) {
                        (Some((fa, _)), Some((_, lb))) if fa <= lb => {}
                        _ => t
                            .ordering_violations
                            .push(format!("{label} node {i}: {a} -> {b}")),
                    }
                }
            }
        }
    }
}

fn check_plan(p: &HgnProblem, sol: &Solution, hierarchical: bool, label: &str, t: &mut Tally) {
    t.plans_checked += 1;
    if hierarchical {
        match validate(p, &sol.trace) {
            Ok(v) if v.cost == sol.cost && v.plan == sol.plan => {}
            Ok(v) => t
                .invalid_plans
                .push(format!("{label}: trace cost {} vs {}", v.cost, sol.cost)),
            Err(e) => t.invalid_plans.push(format!("{label}: {e}")),
        }
    }
    match execute_plan(&p.task, &p.initial, &sol.plan) {
        Ok((end, cost)) if cost == sol.cost && p.goal.holds(&end) => {}
        Ok((_, cost)) => t
            .invalid_plans
            .push(format!("{label}: executes at cost {cost} vs {}", sol.cost)),
        Err(e) => t.invalid_plans.push(format!("{label}: {e}")),
    }
}

fn check_admissibility(
    p: &HgnProblem,
    nodes: &[(State, GoalNetwork, Estimate)],
    label: &str,
    t: &mut Tally,
) {
    let stride = nodes.len().div_ceil(ADMISSIBILITY_SAMPLE).max(1);
    for (i, (s, gn, h)) in nodes.iter().enumerate().step_by(stride) {
        t.checked_nodes += 1;
        let bound = match h {
            Estimate::Finite(h) => Some(*h),
            Estimate::Infinite => None,
        };
        match (h, oracle_optimal_cost(p, s, gn, bound, ORACLE_LIMIT)) {
            (Estimate::Finite(h), OracleResult::Optimal(c)) if c < *h => t
                .admissibility_violations
                .push(format!("{label} node {i}: h {h} > h* {c}")),
            (Estimate::Infinite, OracleResult::Optimal(c)) => t
                .admissibility_violations
                .push(format!("{label} node {i}: h infinite, h* {c}")),
            (_, OracleResult::Exhausted) => t.admissibility_unsettled += 1,
            _ => {}
        }
    }
}

fn small_suite_run(t: &mut Tally) {
    for (domain, size, seed) in small_suite() {
        let label = format!("{domain}-{size}-{seed}");
        let p = generated(domain, size, seed);
        t.instances += 1;

        let mut expanded = Vec::new();
        let hl = run_hopgdp(&p, true, Some(&mut expanded), t);
        let blind = run_hopgdp(&p, false, None, t);
        for r in [&hl, &blind] {
            t.metrics_json
                .push(serde_json::to_string(&r.metrics.deterministic()).unwrap());
        }
        let oracle = oracle_optimal_cost(&p, &p.initial, &p.network, None, ORACLE_LIMIT);
        let costs = (
            hl.solution().map(|s| s.cost),
            blind.solution().map(|s| s.cost),
        );
        match (oracle, costs) {
            (OracleResult::Optimal(c), (Some(a), Some(b))) if a == c && b == c => {}
            (OracleResult::Unsolvable, (None, None)) => {}
            (OracleResult::Exhausted, _) => t.unsettled.push(label.clone()),
            (o, c) => t
                .cost_mismatches
                .push(format!("{label}: oracle {o:?}, planners {c:?}")),
        }

        check_admissibility(&p, &expanded, &label, t);
        for (name, r) in [("hopgdp", &hl), ("hopgdp_blind", &blind)] {
            if let Some(sol) = r.solution() {
                let l = format!("{label} {name}");
                check_soundness(&p, sol, &l, t);
                check_plan(&p, sol, true, &l, t);
            }
        }
        let classical = classical_astar(
            &p.task,
            &p.initial,
            &p.goal,
            true,
            SearchOptions {
                budget: Budget::seconds(10.0),
                ..Default::default()
            },
        );
        if let Some(sol) = classical.solution() {
            check_plan(&p, sol, false, &format!("{label} astar_hl"), t);
        }
    }
}

fn rerun_metrics() -> Vec<String> {
    let mut t = Tally::default();
    let mut out = Vec::new();
    for (domain, size, seed) in small_suite() {
        let p = generated(domain, size, seed);
        for landmarks in [true, false] {
            let r = run_hopgdp(&p, landmarks, None, &mut t);
            out.push(serde_json::to_string(&r.metrics.deterministic()).unwrap());
        }
    }
    out
}

fn experiment(name: &str) -> (ExperimentConfig, Vec<ResultRecord>) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../experiments")
        .join(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    let cfg = ExperimentConfig::parse(&text).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let records = run_experiment(&cfg, dir.path()).unwrap();
    (cfg, records)
}

fn h2(report: &mut Report) {
    let mut pass = true;
    let mut details = Vec::new();
    for (file, floor) in [
        ("blocksworld.toml", H2_FLOOR),
        ("depots.toml", H2_FLOOR),
        ("logistics.toml", 0.0),
    ] {
        let (cfg, records) = experiment(file);
        let s = summarize(&records);
        match s.reductions.iter().find(|r| r.domain == cfg.domain) {
            Some(r) => {
                let all_sizes = r.sizes == cfg.sizes;
                let ok = all_sizes && r.reduction >= floor && r.mean_landmarks <= r.mean_blind;
                pass &= ok;
                details.push(format!(
                    "{} {:.1}% (blind {:.1}, landmarks {:.1}, sizes {:?})",
                    cfg.domain,
                    100.0 * r.reduction,
                    r.mean_blind,
                    r.mean_landmarks,
                    r.sizes
                ));
            }
            None => {
                pass = false;
                details.push(format!("{} no comparable sizes", cfg.domain));
            }
        }
    }
    report.add(4, "expansion reduction", pass, details.join("; "));
}

fn h1(report: &mut Report) {
    let (_, records) = experiment("classical-baseline.toml");
    let find = |i: usize, planner: &str| {
        records
            .iter()
            .find(|r| r.instance == i && r.planner == planner)
            .unwrap()
    };
    let instances = records
        .iter()
        .map(|r| r.instance)
        .max()
        .map_or(0, |m| m + 1);
    let mut pass = instances > 0;
    let mut details = Vec::new();
    for i in 0..instances {
        let (blind, hl, astar) = (
            find(i, "hopgdp_blind"),
            find(i, "hopgdp"),
            find(i, "astar_hl"),
        );
        let ratio_ok = blind.solved && astar.expanded >= H1_FACTOR * blind.expanded;
        let timeout_ok = !astar.solved && blind.solved && hl.solved;
        pass &= ratio_ok || timeout_ok;
        details.push(format!(
            "#{i} astar {}{} vs blind {}",
            astar.expanded,
            if astar.solved { "" } else { " unsolved" },
            blind.expanded
        ));
    }
    report.add(5, "classical baseline blow-up", pass, details.join(", "));
}

fn manufacturing(report: &mut Report) {
    let dir = Path::new(DOMAINS).join("manufacturing");
    let p = HgnProblem::from_files(
        &dir.join("domain.pddl"),
        &dir.join("deliver.pddl"),
        Some(&dir.join("methods.pddl")),
    )
    .unwrap();
    let fact = |name: &str| {
        (0..p.task.num_facts() as u32)
            .find(|&f| p.task.fact_name(f).eq_ignore_ascii_case(name))
            .unwrap_or_else(|| panic!("no fact {name}"))
    };
    let reserved = fact("(reserved a1)");
    let before = compute_hgn_landmarks(&p.initial, &p.network, &p.task);
    let decomposed = get_successors(&p, &p.initial, &p.network).into_iter().find(|x| {
        matches!(&x.step, Step::Decompose { method, .. } if method.name.eq_ignore_ascii_case("(deliver-obj p1 table a1 storage)"))
    });
    let Some(next) = decomposed else {
        report.add(
            6,
            "landmarks after decomposition",
            false,
            "deliver-obj with A1 not applicable".into(),
        );
        return;
    };
    let after = compute_hgn_landmarks(&next.state, &next.network, &p.task);
    let has_reserved = after.find(&Landmark::fact(reserved)).is_some();
    let mut replaced: Vec<String> = before
        .landmarks()
        .filter(|(_, d)| !d.is_fact() && after.find(d).is_none())
        .flat_map(|(_, d)| {
            d.atoms()
                .iter()
                .filter(|&&f| after.find(&Landmark::fact(f)).is_some())
                .map(|&f| p.task.fact_name(f).to_string())
                .collect::<Vec<_>>()
        })
        .collect();
    replaced.sort();
    replaced.dedup();
    report.add(
        6,
        "landmarks after decomposition",
        has_reserved && !replaced.is_empty(),
        format!(
            "{} landmarks before, {} after; reserved(A1) {}; facts replacing disjunctions: {:?}",
            before.len(),
            after.len(),
            if has_reserved { "present" } else { "missing" },
            replaced
        ),
    );
}

fn main() {
    let mut report = Report { lines: Vec::new() };
    let mut t = Tally::default();
    small_suite_run(&mut t);

    let n_mismatch = t.cost_mismatches.len() + t.unsettled.len();
    report.add(
        1,
        "optimality agreement",
        n_mismatch == 0 && t.instances >= 150,
        format!(
            "{} instances, {} mismatches {:?}, {} unsettled {:?}",
            t.instances,
            t.cost_mismatches.len(),
            t.cost_mismatches.iter().take(3).collect::<Vec<_>>(),
            t.unsettled.len(),
            t.unsettled.iter().take(3).collect::<Vec<_>>()
        ),
    );
    report.add(
        2,
        "admissibility",
        t.admissibility_violations.is_empty() && t.admissibility_unsettled == 0,
        format!(
            "{} nodes, {} violations {:?}, {} unsettled",
            t.checked_nodes,
            t.admissibility_violations.len(),
            t.admissibility_violations
                .iter()
                .take(3)
                .collect::<Vec<_>>(),
            t.admissibility_unsettled
        ),
    );
    report.add(
        3,
        "landmark soundness",
        t.landmark_violations.is_empty() && t.ordering_violations.is_empty(),
        format!(
            "{} solutions, {} landmarks, {} orderings; {} landmark and {} ordering violations {:?}",
            t.solutions_replayed,
            t.landmarks_checked,
            t.orderings_checked,
            t.landmark_violations.len(),
            t.ordering_violations.len(),
            t.landmark_violations
                .iter()
                .chain(&t.ordering_violations)
                .take(3)
                .collect::<Vec<_>>()
        ),
    );
    h2(&mut report);
    h1(&mut report);
    manufacturing(&mut report);
    report.add(
        7,
        "plan validity",
        t.invalid_plans.is_empty() && t.plans_checked > 0,
        format!(
            "{} plans, {} invalid {:?}",
            t.plans_checked,
            t.invalid_plans.len(),
            t.invalid_plans.iter().take(3).collect::<Vec<_>>()
        ),
    );
    let again = rerun_metrics();
    report.add(
        8,
        "determinism",
        again == t.metrics_json,
        format!(
            "{} runs, {} differ",
            again.len(),
            again
                .iter()
                .zip(&t.metrics_json)
                .filter(|(a, b)| a != b)
                .count()
        ),
    );
    report.add(
        9,
        "partition audit",
        t.audit_violations == 0 && t.evaluations > 0,
        format!(
            "{} evaluations, {} violations",
            t.evaluations, t.audit_violations
        ),
    );

    report.lines.sort_by_key(|l| l.0);
    let failed: Vec<_> = report.lines.iter().filter(|l| !l.2).map(|l| l.0).collect();
    if failed.is_empty() {
        println!("all {} criteria pass", report.lines.len());
    } else {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
