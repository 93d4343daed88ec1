//! Exact optimal cost by uniform-cost search. Deliberately shares no code
//! with the A* implementation or its successor generator, so the two can
//! be checked against each other.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rustc_hash::FxHashMap;

use crate::cost::Cost;
use crate::goals::{relevant_method_instances, GoalFormula, GoalNetwork, NetworkKey};
use crate::model::plan::progress;
use crate::model::{GroundAction, State};
use crate::task::HgnProblem;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleResult {
    Optimal(Cost),
    /// No solution exists.
    Unsolvable,
    /// No solution of cost at most the bound exists.
    AboveBound,
    /// The node limit was reached before the question was settled.
    Exhausted,
}

fn makes_progress(a: &GroundAction, g: &GoalFormula) -> bool {
    g.disjuncts().iter().any(|d| {
        let helps = d.iter().any(|l| {
            if l.positive {
                a.add.contains(&l.fact)
            } else {
                a.del.contains(&l.fact)
            }
        });
        let hurts = d.iter().any(|l| {
            if l.positive {
                a.del.contains(&l.fact)
            } else {
                a.add.contains(&l.fact)
            }
        });
        helps && !hurts
    })
}

fn expand(p: &HgnProblem, s: &State, gn: &GoalNetwork) -> Vec<(Cost, State, GoalNetwork)> {
    let mut out = Vec::new();
    for t in gn.unconstrained() {
        let goal = gn.goal(t).unwrap();
        if goal.holds(s) {
            out.push((Cost::ZERO, s.clone(), gn.release(t).unwrap()));
        }
        for (m, _) in p.methods.methods.iter().enumerate() {
            for gm in relevant_method_instances(&p.methods, m, goal, s, &p.task) {
                out.push((
                    Cost::ZERO,
                    s.clone(),
                    gn.apply_method(t, &gm.network).unwrap(),
                ));
            }
        }
    }
    let free: Vec<&GoalFormula> = gn
        .unconstrained()
        .into_iter()
        .map(|t| gn.goal(t).unwrap())
        .collect();
    for a in &p.task.actions {
        if a.applicable(s) && free.iter().any(|g| makes_progress(a, g)) {
            out.push((a.cost, progress(s, a), gn.clone()));
        }
    }
    out
}

/// Optimal cost of reaching an empty network from `(s0, gn0)`. With a
/// bound, the search stops once every remaining path costs more than it.
pub fn oracle_optimal_cost(
    p: &HgnProblem,
    s0: &State,
    gn0: &GoalNetwork,
    bound: Option<Cost>,
    node_limit: u64,
) -> OracleResult {
    let mut dist: FxHashMap<(State, NetworkKey), Cost> = FxHashMap::default();
    let mut pending: Vec<Option<(State, GoalNetwork)>> = vec![Some((s0.clone(), gn0.clone()))];
    let mut open = BinaryHeap::new();
    dist.insert((s0.clone(), gn0.canonical_key()), Cost::ZERO);
    open.push(Reverse((Cost::ZERO, 0usize)));
    let mut expanded = 0u64;
    while let Some(Reverse((g, i))) = open.pop() {
        let (s, gn) = pending[i].take().unwrap();
        if bound.is_some_and(|b| g > b) {
            return OracleResult::AboveBound;
        }
        let key = (s, gn.canonical_key());
        if dist.get(&key).is_some_and(|&d| d < g) {
            continue;
        }
        if gn.is_empty() {
            return OracleResult::Optimal(g);
        }
        if expanded >= node_limit {
            return OracleResult::Exhausted;
        }
        expanded += 1;
        for (c, s2, gn2) in expand(p, &key.0, &gn) {
            let g2 = g + c;
            let k2 = (s2, gn2.canonical_key());
            if dist.get(&k2).is_some_and(|&d| d <= g2) {
                continue;
            }
            dist.insert(k2.clone(), g2);
            open.push(Reverse((g2, pending.len())));
            pending.push(Some((k2.0, gn2)));
        }
    }
    OracleResult::Unsolvable
}
