//! A* over (state, goal network) pairs.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::time::{Duration, Instant};

use rustc_hash::FxHashMap;

use super::metrics::{Budget, Limits, Outcome, SearchMetrics, SearchResult, Solution};
use super::successors::{get_successors, Step};
use super::trace::TraceStep;
use crate::cost::{Cost, Estimate};
use crate::goals::{GoalNetwork, NetworkKey};
use crate::heuristics::{NetworkHeuristic, NodeInfo};
use crate::model::{Plan, State};
use crate::task::HgnProblem;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Re-expand a (state, network) pair when a strictly cheaper path to it
    /// is found.
    pub reopen: bool,
    pub budget: Budget,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            reopen: true,
            budget: Budget::unlimited(),
        }
    }
}

/// Called on each expansion with the node's state, network, g and h.
pub type ExpandObserver<'a> = &'a mut dyn FnMut(&State, &GoalNetwork, Cost, Estimate);

struct Node {
    state: State,
    network: GoalNetwork,
    g: Cost,
    info: NodeInfo,
    parent: Option<usize>,
    step: Option<TraceStep>,
    action: Option<u32>,
    expanded: bool,
}

impl Node {
    fn bytes(&self) -> usize {
        std::mem::size_of::<Node>() + self.state.byte_size() + self.network.len() * 64
    }
}

fn timed<T>(acc: &mut Duration, f: impl FnOnce() -> T) -> T {
    let t = Instant::now();
    let out = f();
    *acc += t.elapsed();
    out
}

fn reconstruct(nodes: &[Node], mut i: usize) -> (Plan, Vec<TraceStep>) {
    let mut actions = Vec::new();
    let mut trace = Vec::new();
    while let Some(p) = nodes[i].parent {
        trace.push(nodes[i].step.clone().expect("non-root node has a step"));
        if let Some(a) = nodes[i].action {
            actions.push(a);
        }
        i = p;
    }
    actions.reverse();
    trace.reverse();
    (Plan::new(actions), trace)
}

/// Hierarchically optimal planning by A* with the given heuristic.
pub fn hopgdp(
    p: &HgnProblem,
    s0: &State,
    gn0: &GoalNetwork,
    h: &dyn NetworkHeuristic,
    options: SearchOptions,
    mut observer: Option<ExpandObserver<'_>>,
) -> SearchResult {
    let limits = Limits::new(options.budget);
    let mut metrics = SearchMetrics::default();
    let mut h_time = Duration::ZERO;

    let mut nodes: Vec<Node> = Vec::new();
    let mut memory = 0usize;
    let mut best: FxHashMap<(State, NetworkKey), (Cost, usize)> = FxHashMap::default();
    let mut open: BinaryHeap<Reverse<(Estimate, Estimate, u64, usize)>> = BinaryHeap::new();
    let mut seq = 0u64;

    let (info, h0) = timed(&mut h_time, || {
        let info = h.enter(s0, gn0);
        let v = h.estimate(&info, s0);
        (info, v)
    });
    metrics.evaluated += 1;
    let finish = |mut metrics: SearchMetrics, outcome: Outcome, h_time: Duration| {
        metrics.finish(limits.elapsed(), h_time);
        SearchResult { outcome, metrics }
    };
    if h0.is_infinite() {
        return finish(metrics, Outcome::Failed, h_time);
    }
    nodes.push(Node {
        state: s0.clone(),
        network: gn0.clone(),
        g: Cost::ZERO,
        info,
        parent: None,
        step: None,
        action: None,
        expanded: false,
    });
    memory += nodes[0].bytes();
    best.insert((s0.clone(), gn0.canonical_key()), (Cost::ZERO, 0));
    open.push(Reverse((h0, h0, seq, 0)));
    metrics.generated = 1;
    metrics.peak_open = 1;

    while let Some(Reverse((_, hval, _, i))) = open.pop() {
        let key = (nodes[i].state.clone(), nodes[i].network.canonical_key());
        if best
            .get(&key)
            .is_some_and(|&(g, j)| g < nodes[i].g || j != i)
        {
            continue;
        }
        if nodes[i].network.is_empty() {
            let (plan, trace) = reconstruct(&nodes, i);
            let cost = nodes[i].g;
            metrics.cost = Some(cost);
            return finish(
                metrics,
                Outcome::Solved(Solution { plan, trace, cost }),
                h_time,
            );
        }
        if let Some(reason) = limits.check(metrics.expanded, memory) {
            return finish(metrics, Outcome::Aborted(reason), h_time);
        }
        metrics.expanded += 1;
        nodes[i].expanded = true;
        if let Some(obs) = observer.as_mut() {
            obs(&nodes[i].state, &nodes[i].network, nodes[i].g, hval);
        }

        for succ in get_successors(p, &nodes[i].state, &nodes[i].network) {
            metrics.generated += 1;
            let g = nodes[i].g + succ.step.cost(p);
            let key = (succ.state, succ.network.canonical_key());
            match best.get(&key) {
                Some(&(old, _)) if old <= g => continue,
                Some(&(_, j)) if nodes[j].expanded => {
                    if !options.reopen {
                        continue;
                    }
                    metrics.reopened += 1;
                }
                _ => {}
            }
            let (state, _) = &key;
            let (child_info, hv) = timed(&mut h_time, || {
                let info = match &succ.step {
                    Step::Action(_) => h.step(&nodes[i].info, state),
                    _ => h.enter(state, &succ.network),
                };
                let v = h.estimate(&info, state);
                (info, v)
            });
            metrics.evaluated += 1;
            let idx = nodes.len();
            let node = Node {
                state: state.clone(),
                network: succ.network,
                g,
                info: child_info,
                parent: Some(i),
                step: Some(succ.step.to_trace(p)),
                action: match succ.step {
                    Step::Action(a) => Some(a),
                    _ => None,
                },
                expanded: false,
            };
            memory += node.bytes();
            nodes.push(node);
            best.insert(key, (g, idx));
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
