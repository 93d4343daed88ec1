//! Uniform cost partitioning over unreached landmarks.

use rustc_hash::FxHashMap;

use super::status::LandmarkContext;
use crate::cost::{Cost, Estimate};
use crate::landmarks::LmId;
use crate::model::{ActionId, GroundTask};

/// Per-evaluation partition: each action's cost split evenly among the
/// unreached landmarks it achieves; each landmark takes its cheapest share.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub shares: FxHashMap<ActionId, Cost>,
    pub landmark_cost: Vec<(LmId, Estimate)>,
    pub value: Estimate,
}

pub fn uniform_partition(
    ctx: &LandmarkContext,
    unreached: &[LmId],
    task: &GroundTask,
) -> Partition {
    let mut uses: FxHashMap<ActionId, i64> = FxHashMap::default();
    for &id in unreached {
        for &a in ctx.achievers(id) {
            *uses.entry(a).or_default() += 1;
        }
    }
    let shares: FxHashMap<ActionId, Cost> = uses
        .iter()
        .map(|(&a, &n)| (a, task.action(a).cost / n))
        .collect();
    let mut total = Estimate::ZERO;
    let mut landmark_cost = Vec::with_capacity(unreached.len());
    for &id in unreached {
        let c = ctx
            .achievers(id)
            .iter()
            .map(|a| shares[a])
            .min()
            .map_or(Estimate::Infinite, Estimate::Finite);
        total = total + c;
        landmark_cost.push((id, c));
    }
    Partition {
        shares,
        landmark_cost,
        value: total,
    }
}

/// h_L under uniform partitioning; `Infinite` if some unreached landmark has
/// no achiever.
pub fn h_l_uniform(ctx: &LandmarkContext, unreached: &[LmId], task: &GroundTask) -> Estimate {
    uniform_partition(ctx, unreached, task).value
}

/// Checks both inequality families of the partition: for each action, the
/// shares it hands out sum to at most its cost; for each landmark, its cost
/// is at most the share of every achiever. Returns the number of violated
/// inequalities.
pub fn audit(ctx: &LandmarkContext, unreached: &[LmId], p: &Partition, task: &GroundTask) -> usize {
    let mut violations = 0;
    let mut handed_out: FxHashMap<ActionId, Cost> = FxHashMap::default();
    for &id in unreached {
        for &a in ctx.achievers(id) {
            *handed_out.entry(a).or_insert(Cost::ZERO) += p.shares[&a];
        }
    }
    for (a, total) in &handed_out {
        if *total > task.action(*a).cost {
            violations += 1;
        }
    }
    for &(id, c) in &p.landmark_cost {
        for a in ctx.achievers(id) {
            if c > Estimate::Finite(p.shares[a]) {
                violations += 1;
            }
        }
        if ctx.achievers(id).is_empty() && c != Estimate::Infinite {
            violations += 1;
        }
    }
    violations
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::landmarks::{Landmark, LandmarkGraph};
    use crate::model::{parse_domain, parse_problem};

    fn setup(domain: &str, lms: &[&[&str]]) -> (GroundTask, LandmarkContext) {
        let dom = parse_domain(domain).unwrap();
        let goal: Vec<&str> = lms.iter().flat_map(|l| l.iter().copied()).collect();
        let prob = parse_problem(
            &format!(
                "(define (problem x) (:domain d) (:init) (:goal (and {})))",
                goal.join(" ")
            ),
            &dom,
        )
        .unwrap();
        let task = crate::model::ground(&dom, &prob);
        let mut lg = LandmarkGraph::new();
        for atoms in lms {
            lg.add_lm(Landmark::new(
                atoms
                    .iter()
                    .map(|a| task.fact_by_name(a).unwrap())
                    .collect(),
            ));
        }
        let ctx = LandmarkContext::new(lg, &task);
        (task, ctx)
    }

    #[test]
    fn single_landmark_takes_whole_cost() {
        let (task, ctx) = setup(
            "(define (domain d) (:requirements :strips :action-costs) (:predicates (p))
               (:action a :parameters () :effect (and (p) (increase (total-cost) 3))))",
            &[&["(p)"]],
        );
        assert_eq!(
            h_l_uniform(&ctx, &[0], &task),
            Estimate::Finite(Cost::integer(3))
        );
        assert_eq!(h_l_uniform(&ctx, &[], &task), Estimate::ZERO);
    }

    #[test]
    fn shared_action_is_split() {
        let (task, ctx) = setup(
            "(define (domain d) (:requirements :strips :action-costs) (:predicates (p) (q))
               (:action a :parameters () :effect (and (p) (q) (increase (total-cost) 4))))",
            &[&["(p)"], &["(q)"]],
        );
        let p = uniform_partition(&ctx, &[0, 1], &task);
        assert_eq!(
            p.landmark_cost,
            vec![
                (0, Estimate::Finite(Cost::integer(2))),
                (1, Estimate::Finite(Cost::integer(2)))
            ]
        );
        assert_eq!(p.value, Estimate::Finite(Cost::integer(4)));
        assert_eq!(audit(&ctx, &[0, 1], &p, &task), 0);
    }

    #[test]
    fn fractional_shares_stay_exact() {
        let (task, ctx) = setup(
            "(define (domain d) (:requirements :strips :action-costs) (:predicates (p) (q) (r))
               (:action a :parameters () :effect (and (p) (q) (r) (increase (total-cost) 1)))
               (:action b :parameters () :effect (and (r) (increase (total-cost) 5))))",
            &[&["(p)"], &["(q)"], &["(r)"]],
        );
        let p = uniform_partition(&ctx, &[0, 1, 2], &task);
        assert_eq!(p.value, Estimate::Finite(Cost::integer(1)));
        assert_eq!(audit(&ctx, &[0, 1, 2], &p, &task), 0);
    }

    #[test]
    fn landmark_without_achiever_is_a_dead_end() {
        let (task, ctx) = setup(
            "(define (domain d) (:predicates (p) (q)) (:action a :parameters () :effect (p)))",
            &[&["(q)"]],
        );
        assert_eq!(h_l_uniform(&ctx, &[0], &task), Estimate::Infinite);
    }
}
