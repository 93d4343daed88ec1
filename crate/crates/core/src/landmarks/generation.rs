//! Landmark backchaining and its extension to goal networks.

use std::collections::{BTreeMap, VecDeque};

use super::graph::{Landmark, LandmarkGraph, LmId, OrderingKind};
use super::rpg::build_rpg;
use crate::goals::{GoalNetwork, NodeId};
use crate::model::{ActionId, FactId, GroundTask, State};

/// Largest disjunctive landmark emitted by backchaining.
pub const MAX_DISJUNCTION: usize = 4;

fn adders_of(lm: &Landmark, task: &GroundTask) -> Vec<ActionId> {
    let mut out: Vec<ActionId> = lm
        .atoms()
        .iter()
        .flat_map(|&f| task.adders(f))
        .copied()
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Actions that can make `lm` true for the first time: adders whose
/// preconditions are relaxed-reachable from `s` without any adder of `lm`.
pub fn first_achievers(s: &State, lm: &Landmark, task: &GroundTask) -> Vec<ActionId> {
    let adders = adders_of(lm, task);
    if adders.is_empty() {
        return adders;
    }
    let rpg = build_rpg(s, task, |a| adders.binary_search(&a).is_ok());
    adders
        .iter()
        .copied()
        .filter(|&a| {
            let act = task.action(a);
            act.pre_pos.iter().all(|&f| rpg.fact_reachable(f))
                && act.pre_neg.iter().all(|&f| rpg.can_be_false(f))
        })
        .collect()
}

/// Landmarks that must hold before `lm` is first achieved from `s`, each to
/// be ordered greedy-necessarily before `lm`.
pub fn backchain_candidates(lm: &Landmark, s: &State, task: &GroundTask) -> Vec<Landmark> {
    let fa = first_achievers(s, lm, task);
    let Some((&first, rest)) = fa.split_first() else {
        return Vec::new();
    };
    let mut shared: Vec<FactId> = task.action(first).pre_pos.clone();
    for &a in rest {
        let pre = &task.action(a).pre_pos;
        shared.retain(|f| pre.binary_search(f).is_ok());
    }
    let mut out: Vec<Landmark> = shared.iter().map(|&f| Landmark::fact(f)).collect();

    // One disjunctive candidate per predicate symbol, built from the
    // preconditions the achievers do not all share.
    let mut per_pred: BTreeMap<usize, Vec<Option<FactId>>> = BTreeMap::new();
    for (i, &a) in fa.iter().enumerate() {
        for &f in task
            .action(a)
            .pre_pos
            .iter()
            .filter(|f| !shared.contains(f))
        {
            let pred = task.fact_atom(f).pred;
            let slot = per_pred.entry(pred).or_insert_with(|| vec![None; fa.len()]);
            if slot[i].is_none_or(|g| f < g) {
                slot[i] = Some(f);
            }
        }
    }
    for (_, choice) in per_pred {
        let Some(mut d) = choice.into_iter().collect::<Option<Vec<FactId>>>() else {
            continue;
        };
        d.sort_unstable();
        d.dedup();
        if d.len() > 1 && d.len() <= MAX_DISJUNCTION {
            out.push(Landmark::new(d));
        }
    }
    out
}

/// Landmark graph for the relaxed problem of achieving every goal of `gn`
/// from `s`, ignoring methods and ordering constraints on actions.
pub fn compute_hgn_landmarks(s: &State, gn: &GoalNetwork, task: &GroundTask) -> LandmarkGraph {
    let mut lg = LandmarkGraph::new();
    let mut queue: VecDeque<LmId> = VecDeque::new();
    let mut seeded: BTreeMap<NodeId, Vec<LmId>> = BTreeMap::new();
    let labels: BTreeMap<NodeId, String> = gn
        .nodes()
        .map(|(id, g)| (id, g.display(task).to_string()))
        .collect();
    let mut pending: Vec<NodeId> = gn.nodes().map(|(id, _)| id).collect();

    while !pending.is_empty() {
        // A goal all of whose successors have been seeded.
        let pick = pending
            .iter()
            .copied()
            .filter(|&t| gn.successors(t).all(|x| !pending.contains(&x)))
            .min_by(|&a, &b| labels[&a].cmp(&labels[&b]).then(a.cmp(&b)))
            .expect("goal network ordering is acyclic");
        pending.retain(|&t| t != pick);

        let mut ids = Vec::new();
        if let Some(conj) = gn.goal(pick).and_then(|g| g.as_conjunction()) {
            for l in conj.iter().filter(|l| l.positive) {
                let (id, new) = lg.add_lm(Landmark::fact(l.fact));
                if new {
                    queue.push_back(id);
                }
                ids.push(id);
            }
        }
        for succ in gn.successors(pick) {
            for &to in seeded.get(&succ).into_iter().flatten() {
                for &from in &ids {
                    if lg.contains(from) && lg.contains(to) {
                        lg.add_ordering(from, to, OrderingKind::Natural)
                            .expect("endpoints exist");
                    }
                }
            }
        }
        seeded.insert(pick, ids);

        while let Some(psi) = queue.pop_front() {
            let Some(lm) = lg.get(psi).cloned() else {
                continue;
            };
            if lm.holds(s) {
                continue;
            }
            for cand in backchain_candidates(&lm, s, task) {
                if !lg.contains(psi) {
                    break;
                }
                let (id, new) = lg
                    .add_lm_and_ordering(cand, psi, OrderingKind::GreedyNecessary)
                    .expect("target exists");
                if new {
                    queue.push_back(id);
                }
            }
        }
    }
    debug_assert!(lg.well_formed());
    lg.compact()
}
