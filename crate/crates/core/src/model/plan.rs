use std::fmt;

use super::ground::{ActionId, GroundAction, GroundTask};
use super::state::{FactId, State};
use crate::cost::Cost;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ExecError {
    #[error("action `{action}` is not applicable: {literal} does not hold")]
    Inapplicable { action: String, literal: String },
    #[error("step {index}: {source}")]
    AtStep {
        index: usize,
        #[source]
        source: Box<ExecError>,
    },
}

impl ExecError {
    /// Index of the failing step for plan execution errors.
    pub fn step(&self) -> Option<usize> {
        match self {
            ExecError::AtStep { index, .. } => Some(*index),
            ExecError::Inapplicable { .. } => None,
        }
    }
}

fn violated(task: &GroundTask, s: &State, a: &GroundAction) -> Option<String> {
    if let Some(&f) = a.pre_pos.iter().find(|&&f| !s.contains(f)) {
        return Some(task.fact_name(f).to_string());
    }
    a.pre_neg
        .iter()
        .find(|&&f| s.contains(f))
        .map(|&f| format!("(not {})", task.fact_name(f)))
}

/// Successor state without the applicability check.
pub fn progress(s: &State, a: &GroundAction) -> State {
    let mut next = s.clone();
    for &f in &a.del {
        next.remove(f);
    }
    for &f in &a.add {
        next.insert(f);
    }
    next
}

pub fn apply_action(task: &GroundTask, s: &State, a: &GroundAction) -> Result<State, ExecError> {
    match violated(task, s, a) {
        Some(literal) => Err(ExecError::Inapplicable {
            action: a.name.clone(),
            literal,
        }),
        None => Ok(progress(s, a)),
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Plan {
    pub actions: Vec<ActionId>,
}

impl Plan {
    pub fn new(actions: Vec<ActionId>) -> Plan {
        Plan { actions }
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    pub fn cost(&self, task: &GroundTask) -> Cost {
        self.actions.iter().map(|&a| task.action(a).cost).sum()
    }

    pub fn concat(&self, other: &Plan) -> Plan {
        Plan {
            actions: self.actions.iter().chain(&other.actions).copied().collect(),
        }
    }

    /// Parses numbered plan lines (`1: (pickup a)`) or bare `(pickup a)` lines;
    /// `;` starts a comment.
    pub fn parse(text: &str, task: &GroundTask) -> Result<Plan, String> {
        let mut actions = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split(';').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let body = match line.split_once(':') {
                Some((n, rest)) if n.trim().chars().all(|c| c.is_ascii_digit()) => rest.trim(),
                _ => line,
            };
            let name = body
                .split_whitespace()
                .collect::<Vec<_>>()
                .join(" ")
                .to_lowercase();
            let id = task
                .action_by_name(&name)
                .ok_or_else(|| format!("line {}: unknown action `{body}`", i + 1))?;
            actions.push(id);
        }
        Ok(Plan { actions })
    }

    pub fn display<'a>(&'a self, task: &'a GroundTask) -> PlanDisplay<'a> {
        PlanDisplay { plan: self, task }
    }
}

pub struct PlanDisplay<'a> {
    plan: &'a Plan,
    task: &'a GroundTask,
}

impl fmt::Display for PlanDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &a) in self.plan.actions.iter().enumerate() {
            writeln!(f, "{}: {}", i + 1, self.task.action(a).name)?;
        }
        writeln!(f, "; cost = {}", self.plan.cost(self.task))
    }
}

/// Runs `plan` from `s`, returning the final state and the total cost.
pub fn execute_plan(task: &GroundTask, s: &State, plan: &Plan) -> Result<(State, Cost), ExecError> {
    let mut cur = s.clone();
    let mut cost = Cost::ZERO;
    for (index, &a) in plan.actions.iter().enumerate() {
        let a = task.action(a);
        cur = apply_action(task, &cur, a).map_err(|e| ExecError::AtStep {
            index,
            source: Box::new(e),
        })?;
        cost += a.cost;
    }
    Ok((cur, cost))
}

/// Fact ids touched by `a`, used by relevance checks elsewhere.
pub fn touched(a: &GroundAction) -> impl Iterator<Item = FactId> + '_ {
    a.add.iter().chain(&a.del).copied()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ground, parse_domain, parse_problem};
    use proptest::prelude::*;

    fn bw2() -> GroundTask {
        let dom =
            parse_domain(include_str!("../../tests/fixtures/blocksworld-domain.pddl")).unwrap();
        let prob =
            parse_problem(include_str!("../../tests/fixtures/bw2-problem.pddl"), &dom).unwrap();
        ground(&dom, &prob)
    }

    fn state(task: &GroundTask, facts: &[&str]) -> State {
        State::from_facts(
            task.num_facts(),
            facts.iter().map(|f| task.fact_by_name(f).unwrap()),
        )
    }

    #[test]
    fn pickup_semantics() {
        let task = bw2();
        let s = state(&task, &["(ontable a)", "(clear a)", "(handempty)"]);
        let a = task.action(task.action_by_name("(pickup a)").unwrap());
        let next = apply_action(&task, &s, a).unwrap();
        assert_eq!(task.describe(&next), ["(holding a)"]);
    }

    #[test]
    fn empty_effects_keep_state() {
        let task = bw2();
        let a = GroundAction {
            id: 0,
            name: "(noop)".into(),
            schema: 0,
            args: vec![],
            pre_pos: vec![],
            pre_neg: vec![],
            add: vec![],
            del: vec![],
            cost: Cost::ONE,
        };
        assert_eq!(
            apply_action(&task, &task.initial, &a).unwrap(),
            task.initial
        );
    }

    #[test]
    fn inapplicable_action_names_literal() {
        let task = bw2();
        let a = task.action(task.action_by_name("(pickup a)").unwrap());
        let e = apply_action(&task, &task.initial, a).unwrap_err();
        assert!(e.to_string().contains("(clear a)"), "{e}");
    }

    #[test]
    fn two_block_plan() {
        let task = bw2();
        let plan = Plan::parse(
            "(unstack b a)\n(putdown b)\n(pickup a)\n(stack a b)\n",
            &task,
        )
        .unwrap();
        let (end, cost) = execute_plan(&task, &task.initial, &plan).unwrap();
        assert!(end.contains(task.fact_by_name("(on a b)").unwrap()));
        assert_eq!(cost, Cost::integer(4));
        assert_eq!(plan.cost(&task), cost);
        let (same, zero) = execute_plan(&task, &task.initial, &Plan::default()).unwrap();
        assert_eq!((same, zero), (task.initial.clone(), Cost::ZERO));
    }

    #[test]
    fn failing_step_index() {
        let task = bw2();
        let plan = Plan::parse("1: (unstack b a)\n2: (pickup a)\n", &task).unwrap();
        let e = execute_plan(&task, &task.initial, &plan).unwrap_err();
        assert_eq!(e.step(), Some(1));
    }

    #[test]
    fn display_parses_back() {
        let task = bw2();
        let plan = Plan::new(vec![3, 1, 0]);
        let text = plan.display(&task).to_string();
        assert!(text.ends_with(&format!("; cost = {}\n", plan.cost(&task))));
        assert_eq!(Plan::parse(&text, &task).unwrap(), plan);
    }

    proptest! {
        #[test]
        fn apply_matches_set_semantics(facts in proptest::collection::btree_set(0u32..64, 0..20), pick in 0usize..8) {
            let task = bw2();
            let n = task.num_facts() as u32;
            let s = State::from_facts(task.num_facts(), facts.into_iter().filter(|&f| f < n));
            let a = &task.actions[pick % task.num_actions()];
            if let Ok(next) = apply_action(&task, &s, a) {
                let mut expected: std::collections::BTreeSet<FactId> = s.facts().collect();
                for f in &a.del { expected.remove(f); }
                expected.extend(a.add.iter().copied());
                prop_assert_eq!(next.facts().collect::<std::collections::BTreeSet<_>>(), expected);
            } else {
                prop_assert!(!a.applicable(&s));
            }
        }

        #[test]
        fn cost_is_additive(xs in proptest::collection::vec(0u32..8, 0..10), ys in proptest::collection::vec(0u32..8, 0..10)) {
            let task = bw2();
            let p = Plan::new(xs);
            let q = Plan::new(ys);
            prop_assert_eq!(p.concat(&q).cost(&task), p.cost(&task) + q.cost(&task));
        }
    }
}
