#![allow(dead_code)]

use hopgdp::bench::{bundle, GeneratorRegistry};
use hopgdp::goals::GoalNetwork;
use hopgdp::model::State;
use hopgdp::search::{get_successors, TraceStep};
use hopgdp::task::HgnProblem;

pub const FIXTURES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures");
pub const DOMAINS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/domains");

pub fn generated(domain: &str, size: usize, seed: u64) -> HgnProblem {
    let inst = GeneratorRegistry::default()
        .get(domain)
        .unwrap()
        .generate(size, seed);
    let b = bundle(domain).unwrap();
    HgnProblem::from_texts(b.domain, &inst.problem, Some(b.methods))
        .unwrap_or_else(|e| panic!("{domain} {size} {seed}: {e}"))
}

/// A (state, network) pair on a replayed trace, with the index of the first
/// state of the remaining execution.
pub struct PathNode {
    pub state: State,
    pub network: GoalNetwork,
    pub from: usize,
}

pub struct Replay {
    pub nodes: Vec<PathNode>,
    /// Every state of the plan's execution, initial state first.
    pub states: Vec<State>,
}

/// Re-derives the nodes of a trace through the search's successor function.
pub fn replay(p: &HgnProblem, trace: &[TraceStep]) -> Replay {
    let mut s = p.initial.clone();
    let mut gn = p.network.clone();
    let mut states = vec![s.clone()];
    let mut nodes = vec![PathNode {
        state: s.clone(),
        network: gn.clone(),
        from: 0,
    }];
    for step in trace {
        let next = get_successors(p, &s, &gn)
            .into_iter()
            .find(|x| x.step.to_trace(p) == *step)
            .unwrap_or_else(|| panic!("trace step {step:?} is not a successor"));
        if matches!(step, TraceStep::Action(_)) {
            states.push(next.state.clone());
        }
        s = next.state;
        gn = next.network;
        nodes.push(PathNode {
            state: s.clone(),
            network: gn.clone(),
            from: states.len() - 1,
        });
    }
    Replay { nodes, states }
}
