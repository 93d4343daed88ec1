//! State-space A* with the landmark heuristic, ignoring the method library.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rustc_hash::FxHashMap;

use super::metrics::{Limits, Outcome, SearchMetrics, SearchResult, Solution};
use super::trace::TraceStep;
use super::SearchOptions;
use crate::cost::Cost;
use crate::goals::{GoalFormula, GoalNetwork};
use crate::heuristics::{
    h_l_uniform, init_status, progress_status, unreached, LandmarkContext, LandmarkStatus,
};
use crate::landmarks::compute_hgn_landmarks;
use crate::model::plan::progress;
use crate::model::{GroundTask, Plan, State};

struct Node {
    state: State,
    g: Cost,
    status: LandmarkStatus,
    parent: Option<usize>,
    action: Option<u32>,
    expanded: bool,
}

/// Cost-optimal classical planning toward `goal` from `s0`. With
/// `use_landmarks` false the heuristic is constant zero.
pub fn classical_astar(
    task: &GroundTask,
    s0: &State,
    goal: &GoalFormula,
    use_landmarks: bool,
    options: SearchOptions,
) -> SearchResult {
    let limits = Limits::new(options.budget);
    let mut metrics = SearchMetrics::default();
    let mut h_time = Duration::ZERO;
    let t = Instant::now();
    let mut single = GoalNetwork::empty();
    single.add_node(goal.clone());
    let lg = if use_landmarks {
        compute_hgn_landmarks(s0, &single, task)
    } else {
        crate::landmarks::LandmarkGraph::new()
    };
    let ctx = Arc::new(LandmarkContext::new(lg, task));
    metrics.landmark_graphs = 1;
    let eval = |st: &LandmarkStatus, s: &State| h_l_uniform(&st.context, &unreached(st, s), task);
    let root_status = init_status(ctx, s0);
    let h0 = eval(&root_status, s0);
    h_time += t.elapsed();
    metrics.evaluated = 1;
    let finish = |mut metrics: SearchMetrics, outcome: Outcome, h_time: Duration| {
        metrics.finish(limits.elapsed(), h_time);
        SearchResult { outcome, metrics }
    };
    if h0.is_infinite() {
        return finish(metrics, Outcome::Failed, h_time);
    }

    let mut nodes = vec![Node {
        state: s0.clone(),
        g: Cost::ZERO,
        status: root_status,
        parent: None,
        action: None,
        expanded: false,
    }];
    let mut memory = s0.byte_size() + std::mem::size_of::<Node>();
    let mut best: FxHashMap<State, (Cost, usize)> = FxHashMap::default();
    best.insert(s0.clone(), (Cost::ZERO, 0));
    let mut open = BinaryHeap::new();
    let mut seq = 0u64;
    open.push(Reverse((h0, h0, seq, 0usize)));
    metrics.generated = 1;
    metrics.peak_open = 1;

    while let Some(Reverse((_, _, _, i))) = open.pop() {
        if best.get(&nodes[i].state).is_some_and(|&(_, j)| j != i) {
            continue;
        }
        if goal.holds(&nodes[i].state) {
            let mut actions = Vec::new();
            let mut j = i;
            while let Some(p) = nodes[j].parent {
                actions.push(nodes[j].action.unwrap());
                j = p;
            }
            actions.reverse();
            let trace = actions
                .iter()
                .map(|&a| TraceStep::Action(task.action(a).name.clone()))
                .collect();
            let cost = nodes[i].g;
            metrics.cost = Some(cost);
            return finish(
                metrics,
                Outcome::Solved(Solution {
                    plan: Plan::new(actions),
                    trace,
                    cost,
                }),
                h_time,
            );
        }
        if let Some(reason) = limits.check(metrics.expanded, memory) {
            return finish(metrics, Outcome::Aborted(reason), h_time);
        }
        metrics.expanded += 1;
        nodes[i].expanded = true;
        for a in &task.actions {
            if !a.applicable(&nodes[i].state) {
                continue;
            }
            metrics.generated += 1;
            let next = progress(&nodes[i].state, a);
            let g = nodes[i].g + a.cost;
            match best.get(&next) {
                Some(&(old, _)) if old <= g => continue,
                Some(&(_, j)) if nodes[j].expanded => {
                    if !options.reopen {
                        continue;
                    }
                    metrics.reopened += 1;
                }
                _ => {}
            }
            let t = Instant::now();
            let status = progress_status(&nodes[i].status, &next);
            let hv = eval(&status, &next);
            h_time += t.elapsed();
            metrics.evaluated += 1;
            let idx = nodes.len();
            memory += next.byte_size() + std::mem::size_of::<Node>() + status.context.len();
            best.insert(next.clone(), (g, idx));
            nodes.push(Node {
                state: next,
                g,
                status,
                parent: Some(i),
                action: Some(a.id),
                expanded: false,
            });
            if hv.is_infinite() {
                continue;
            }
            seq += 1;
            open.push(Reverse((hv + g, hv, seq, idx)));
            metrics.peak_open = metrics.peak_open.max(open.len() as u64);
        }
    }
    finish(metrics, Outcome::Failed, h_time)
}
