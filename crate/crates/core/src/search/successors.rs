use super::trace::TraceStep;
use crate::cost::Cost;
use crate::goals::{
    relevant_actions, relevant_method_instances, GoalNetwork, GroundMethod, NodeId,
};
use crate::model::plan::progress;
use crate::model::{ActionId, State};
use crate::task::HgnProblem;

/// How a successor was generated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Release(NodeId),
    Action(ActionId),
    Decompose { node: NodeId, method: GroundMethod },
}

impl Step {
    pub fn to_trace(&self, p: &HgnProblem) -> TraceStep {
        match self {
            Step::Release(t) => TraceStep::Release(*t),
            Step::Action(a) => TraceStep::Action(p.task.action(*a).name.clone()),
            Step::Decompose { node, method } => TraceStep::Decompose {
                node: *node,
                method: p.methods.methods[method.schema].name.clone(),
                args: method
                    .args
                    .iter()
                    .map(|&o| p.task.objects[o].0.clone())
                    .collect(),
            },
        }
    }

    pub fn cost(&self, p: &HgnProblem) -> Cost {
        match self {
            Step::Action(a) => p.task.action(*a).cost,
            _ => Cost::ZERO,
        }
    }
}

pub struct Successor {
    pub step: Step,
    pub state: State,
    pub network: GoalNetwork,
}

/// Successors of `(s, gn)` in a fixed order: releases of satisfied
/// unconstrained goals by node id, then applicable actions relevant to some
/// unconstrained goal by action id, then applicable relevant method
/// instances by (node id, method name, binding).
pub fn get_successors(p: &HgnProblem, s: &State, gn: &GoalNetwork) -> Vec<Successor> {
    let free = gn.unconstrained();
    let mut out = Vec::new();
    for &t in &free {
        if gn.goal(t).unwrap().holds(s) {
            out.push(Successor {
                step: Step::Release(t),
                state: s.clone(),
                network: gn.release(t).unwrap(),
            });
        }
    }
    let mut actions: Vec<ActionId> = free
        .iter()
        .flat_map(|&t| relevant_actions(&p.task, gn.goal(t).unwrap()))
        .collect();
    actions.sort_unstable();
    actions.dedup();
    for a in actions {
        let act = p.task.action(a);
        if act.applicable(s) {
            out.push(Successor {
                step: Step::Action(a),
                state: progress(s, act),
                network: gn.clone(),
            });
        }
    }
    let mut by_name: Vec<usize> = (0..p.methods.methods.len()).collect();
    by_name.sort_by(|&a, &b| p.methods.methods[a].name.cmp(&p.methods.methods[b].name));
    for &t in &free {
        let g = gn.goal(t).unwrap();
        for &m in &by_name {
            for gm in relevant_method_instances(&p.methods, m, g, s, &p.task) {
                let network = gn.apply_method(t, &gm.network).unwrap();
                out.push(Successor {
                    step: Step::Decompose {
                        node: t,
                        method: gm,
                    },
                    state: s.clone(),
                    network,
                });
            }
        }
    }
    out
}
