//! Replays a decomposition trace against a problem and reports the first
//! step that breaks the progression rules.

use std::fmt;

use super::trace::TraceStep;
use crate::cost::Cost;
use crate::goals::{action_relevant, instantiate, relevant_method_instances, GoalNetwork, NodeId};
use crate::model::plan::progress;
use crate::model::{Plan, State};
use crate::task::HgnProblem;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NoSuchNode {
        step: usize,
        node: NodeId,
    },
    Constrained {
        step: usize,
        node: NodeId,
    },
    ReleaseUnsatisfied {
        step: usize,
        node: NodeId,
        goal: String,
    },
    UnknownAction {
        step: usize,
        action: String,
    },
    Inapplicable {
        step: usize,
        action: String,
    },
    Irrelevant {
        step: usize,
        action: String,
    },
    UnknownMethod {
        step: usize,
        method: String,
    },
    BadBinding {
        step: usize,
        method: String,
        args: Vec<String>,
    },
    MethodInapplicable {
        step: usize,
        method: String,
    },
    MethodIrrelevant {
        step: usize,
        method: String,
        node: NodeId,
    },
    Unfinished {
        remaining: Vec<NodeId>,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoSuchNode { step, node } => {
                write!(f, "step {step}: node {node} is not in the network")
            }
            Violation::Constrained { step, node } => {
                write!(f, "step {step}: node {node} has unreleased predecessors")
            }
            Violation::ReleaseUnsatisfied { step, node, goal } => {
                write!(
                    f,
                    "step {step}: release of node {node} but its goal {goal} does not hold"
                )
            }
            Violation::UnknownAction { step, action } => {
                write!(f, "step {step}: unknown action {action}")
            }
            Violation::Inapplicable { step, action } => {
                write!(f, "step {step}: {action} is not applicable")
            }
            Violation::Irrelevant { step, action } => {
                write!(
                    f,
                    "step {step}: {action} is not relevant to any unconstrained goal"
                )
            }
            Violation::UnknownMethod { step, method } => {
                write!(f, "step {step}: unknown method {method}")
            }
            Violation::BadBinding { step, method, args } => {
                write!(
                    f,
                    "step {step}: method {method} cannot be bound to ({})",
                    args.join(" ")
                )
            }
            Violation::MethodInapplicable { step, method } => {
                write!(
                    f,
                    "step {step}: precondition of method {method} does not hold"
                )
            }
            Violation::MethodIrrelevant { step, method, node } => {
                write!(
                    f,
                    "step {step}: method {method} is not relevant to node {node}"
                )
            }
            Violation::Unfinished { remaining } => {
                let ids: Vec<String> = remaining.iter().map(|t| t.to_string()).collect();
                write!(
                    f,
                    "trace ends with nodes {} still in the network",
                    ids.join(", ")
                )
            }
        }
    }
}

/// The action sequence and cost of a valid trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Validated {
    pub plan: Plan,
    pub cost: Cost,
    pub state: State,
}

pub fn validate(p: &HgnProblem, trace: &[TraceStep]) -> Result<Validated, Violation> {
    let mut s = p.initial.clone();
    let mut gn: GoalNetwork = p.network.clone();
    let mut actions = Vec::new();
    let mut cost = Cost::ZERO;
    let free_node = |gn: &GoalNetwork, step: usize, node: NodeId| {
        if !gn.contains(node) {
            Err(Violation::NoSuchNode { step, node })
        } else if !gn.is_unconstrained(node) {
            Err(Violation::Constrained { step, node })
        } else {
            Ok(())
        }
    };
    for (step, ts) in trace.iter().enumerate() {
        match ts {
            TraceStep::Release(node) => {
                free_node(&gn, step, *node)?;
                let goal = gn.goal(*node).unwrap();
                if !goal.holds(&s) {
                    let goal = goal.display(&p.task).to_string();
                    return Err(Violation::ReleaseUnsatisfied {
                        step,
                        node: *node,
                        goal,
                    });
                }
                gn = gn.release(*node).unwrap();
            }
            TraceStep::Action(name) => {
                let Some(id) = p.task.action_by_name(name) else {
                    return Err(Violation::UnknownAction {
                        step,
                        action: name.clone(),
                    });
                };
                let a = p.task.action(id);
                if !a.applicable(&s) {
                    return Err(Violation::Inapplicable {
                        step,
                        action: name.clone(),
                    });
                }
                if !gn
                    .unconstrained()
                    .into_iter()
                    .any(|t| action_relevant(a, gn.goal(t).unwrap()))
                {
                    return Err(Violation::Irrelevant {
                        step,
                        action: name.clone(),
                    });
                }
                s = progress(&s, a);
                cost += a.cost;
                actions.push(id);
            }
            TraceStep::Decompose { node, method, args } => {
                free_node(&gn, step, *node)?;
                let Some(idx) = p.methods.methods.iter().position(|m| &m.name == method) else {
                    return Err(Violation::UnknownMethod {
                        step,
                        method: method.clone(),
                    });
                };
                let bad = || Violation::BadBinding {
                    step,
                    method: method.clone(),
                    args: args.clone(),
                };
                let objs: Option<Vec<_>> = args.iter().map(|a| p.instance.object_id(a)).collect();
                let objs = objs.ok_or_else(bad)?;
                let gm =
                    instantiate(&p.task, idx, &p.methods.methods[idx], &objs).ok_or_else(bad)?;
                if !gm.applicable(&s) {
                    return Err(Violation::MethodInapplicable {
                        step,
                        method: gm.name,
                    });
                }
                let goal = gn.goal(*node).unwrap();
                if !relevant_method_instances(&p.methods, idx, goal, &s, &p.task)
                    .iter()
                    .any(|m| m.args == gm.args)
                {
                    return Err(Violation::MethodIrrelevant {
                        step,
                        method: gm.name,
                        node: *node,
                    });
                }
                gn = gn.apply_method(*node, &gm.network).unwrap();
            }
        }
    }
    if !gn.is_empty() {
        return Err(Violation::Unfinished {
            remaining: gn.nodes().map(|(t, _)| t).collect(),
        });
    }
    Ok(Validated {
        plan: Plan::new(actions),
        cost,
        state: s,
    })
}
