//! Delete-relaxed reachability layers.

use std::collections::VecDeque;

use crate::model::{ActionId, FactId, GroundTask, State};

pub const UNREACHED: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rpg {
    pub fact_level: Vec<u32>,
    pub action_level: Vec<u32>,
    /// First layer at which each atom can be false.
    pub cleared_level: Vec<u32>,
}

impl Rpg {
    pub fn fact_reachable(&self, f: FactId) -> bool {
        self.fact_level[f as usize] != UNREACHED
    }

    pub fn action_reachable(&self, a: ActionId) -> bool {
        self.action_level[a as usize] != UNREACHED
    }

    pub fn can_be_false(&self, f: FactId) -> bool {
        self.cleared_level[f as usize] != UNREACHED
    }
}

enum Event {
    Fact(FactId),
    /// The atom has become false at some point.
    Cleared(FactId),
}

/// Least fixpoint of relaxed reachability from `s`, never using actions for
/// which `forbidden` is true.
///
/// A negative precondition `not p` counts as satisfied at layer 0 when `p` is
/// absent from `s`; otherwise from the layer after some reachable action
/// deletes `p`.
pub fn build_rpg(s: &State, task: &GroundTask, forbidden: impl Fn(ActionId) -> bool) -> Rpg {
    let nf = task.num_facts();
    let na = task.num_actions();
    let mut fact_level = vec![UNREACHED; nf];
    let mut cleared = vec![UNREACHED; nf];
    let mut action_level = vec![UNREACHED; na];
    let mut missing: Vec<u32> = task
        .actions
        .iter()
        .map(|a| (a.pre_pos.len() + a.pre_neg.iter().filter(|&&f| s.contains(f)).count()) as u32)
        .collect();
    let mut queue: VecDeque<(Event, u32)> = VecDeque::new();
    for f in 0..nf as FactId {
        if s.contains(f) {
            fact_level[f as usize] = 0;
            queue.push_back((Event::Fact(f), 0));
        } else {
            cleared[f as usize] = 0;
        }
    }
    let fire = |a: ActionId,
                level: u32,
                queue: &mut VecDeque<(Event, u32)>,
                action_level: &mut Vec<u32>| {
        if forbidden(a) || action_level[a as usize] != UNREACHED {
            return;
        }
        action_level[a as usize] = level;
        let act = task.action(a);
        for &f in &act.add {
            queue.push_back((Event::Fact(f), level + 1));
        }
        for &f in &act.del {
            queue.push_back((Event::Cleared(f), level + 1));
        }
    };
    for a in 0..na as ActionId {
        if missing[a as usize] == 0 {
            fire(a, 0, &mut queue, &mut action_level);
        }
    }
    while let Some((ev, level)) = queue.pop_front() {
        let users = match ev {
            Event::Fact(f) => {
                if fact_level[f as usize] != UNREACHED && level > 0 {
                    continue;
                }
                fact_level[f as usize] = level;
                task.pos_users(f)
            }
            Event::Cleared(f) => {
                if cleared[f as usize] != UNREACHED {
                    continue;
                }
                cleared[f as usize] = level;
                task.neg_users(f)
            }
        };
        for &a in users {
            missing[a as usize] -= 1;
            if missing[a as usize] == 0 {
                fire(a, level, &mut queue, &mut action_level);
            }
        }
    }
    Rpg {
        fact_level,
        action_level,
        cleared_level: cleared,
    }
}
