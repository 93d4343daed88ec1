use super::formula::{GoalFormula, Literal};
use crate::model::{ActionId, GroundAction, GroundTask};

fn achieves(a: &GroundAction, l: &Literal) -> bool {
    if l.positive {
        a.adds(l.fact)
    } else {
        a.deletes(l.fact)
    }
}

fn falsifies(a: &GroundAction, l: &Literal) -> bool {
    if l.positive {
        a.deletes(l.fact)
    } else {
        a.adds(l.fact)
    }
}

/// `a` makes some literal of a disjunct true without making any literal of
/// that same disjunct false.
pub fn action_relevant(a: &GroundAction, g: &GoalFormula) -> bool {
    g.disjuncts()
        .iter()
        .any(|d| d.iter().any(|l| achieves(a, l)) && !d.iter().any(|l| falsifies(a, l)))
}

/// All actions relevant to `g`, ascending by id.
pub fn relevant_actions(task: &GroundTask, g: &GoalFormula) -> Vec<ActionId> {
    let mut candidates: Vec<ActionId> = g
        .literals()
        .flat_map(|l| {
            if l.positive {
                task.adders(l.fact)
            } else {
                task.deleters(l.fact)
            }
        })
        .copied()
        .collect();
    candidates.sort_unstable();
    candidates.dedup();
    candidates.retain(|&a| action_relevant(task.action(a), g));
    candidates
}
