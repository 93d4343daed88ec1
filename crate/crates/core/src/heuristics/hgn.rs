//! The goal-network landmark heuristic and the blind baseline.

use std::io::Write;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, RwLock};

use rustc_hash::FxHashMap;
use serde::Serialize;

use super::partition::{audit, uniform_partition};
use super::status::{init_status, progress_status, unreached, LandmarkContext, LandmarkStatus};
use crate::cost::Estimate;
use crate::goals::{GoalNetwork, NetworkKey};
use crate::landmarks::compute_hgn_landmarks;
use crate::model::{GroundTask, State};

/// Per-node heuristic bookkeeping carried along a search path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NodeInfo {
    None,
    Landmarks(LandmarkStatus),
}

/// A heuristic over (state, goal network) search nodes. `enter` is called
/// for the root and whenever the network changes; `step` when an action is
/// applied under an unchanged network.
pub trait NetworkHeuristic: Send + Sync {
    fn name(&self) -> &'static str;
    fn enter(&self, s: &State, gn: &GoalNetwork) -> NodeInfo;
    fn step(&self, parent: &NodeInfo, next: &State) -> NodeInfo;
    fn estimate(&self, info: &NodeInfo, s: &State) -> Estimate;
}

pub struct BlindHeuristic;

impl NetworkHeuristic for BlindHeuristic {
    fn name(&self) -> &'static str {
        "blind"
    }

    fn enter(&self, _: &State, _: &GoalNetwork) -> NodeInfo {
        NodeInfo::None
    }

    fn step(&self, _: &NodeInfo, _: &State) -> NodeInfo {
        NodeInfo::None
    }

    fn estimate(&self, _: &NodeInfo, _: &State) -> Estimate {
        Estimate::ZERO
    }
}

#[derive(Serialize)]
struct DumpLine<'a> {
    landmarks: usize,
    accepted: usize,
    unreached: usize,
    h: &'a str,
}

/// Landmark graphs keyed by the (state, network) pair they were computed at.
///
/// A graph describes what remains to be achieved from the state it was built
/// in, so reusing it for the same network in a different state could count
/// landmarks that already hold there.
#[derive(Default)]
pub struct HeuristicCache {
    map: RwLock<FxHashMap<(State, NetworkKey), Arc<LandmarkContext>>>,
}

impl HeuristicCache {
    pub fn len(&self) -> usize {
        self.map.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get_or_compute(
        &self,
        s: &State,
        gn: &GoalNetwork,
        task: &GroundTask,
    ) -> Arc<LandmarkContext> {
        let key = (s.clone(), gn.canonical_key());
        if let Some(c) = self.map.read().unwrap().get(&key) {
            return c.clone();
        }
        let ctx = Arc::new(LandmarkContext::new(
            compute_hgn_landmarks(s, gn, task),
            task,
        ));
        self.map.write().unwrap().entry(key).or_insert(ctx).clone()
    }
}

/// h_HL: uniform-partition landmark heuristic over goal-network landmark
/// graphs.
pub struct LandmarkHeuristic {
    task: Arc<GroundTask>,
    cache: HeuristicCache,
    audit: bool,
    evaluations: AtomicU64,
    violations: AtomicU64,
    dump: Option<Mutex<Box<dyn Write + Send>>>,
}

impl LandmarkHeuristic {
    pub fn new(task: Arc<GroundTask>) -> LandmarkHeuristic {
        LandmarkHeuristic {
            task,
            cache: HeuristicCache::default(),
            audit: cfg!(debug_assertions),
            evaluations: AtomicU64::new(0),
            violations: AtomicU64::new(0),
            dump: None,
        }
    }

    /// Re-checks the partition inequalities on every evaluation.
    pub fn with_audit(mut self, on: bool) -> Self {
        self.audit = on;
        self
    }

    /// Writes one JSON line per evaluation.
    pub fn with_dump(mut self, out: Box<dyn Write + Send>) -> Self {
        self.dump = Some(Mutex::new(out));
        self
    }

    pub fn cache(&self) -> &HeuristicCache {
        &self.cache
    }

    pub fn evaluations(&self) -> u64 {
        self.evaluations.load(Ordering::Relaxed)
    }

    /// Partition inequalities found violated so far (audit mode only).
    pub fn audit_violations(&self) -> u64 {
        self.violations.load(Ordering::Relaxed)
    }

    pub fn landmark_context(&self, s: &State, gn: &GoalNetwork) -> Arc<LandmarkContext> {
        self.cache.get_or_compute(s, gn, &self.task)
    }
}

impl NetworkHeuristic for LandmarkHeuristic {
    fn name(&self) -> &'static str {
        "hl"
    }

    fn enter(&self, s: &State, gn: &GoalNetwork) -> NodeInfo {
        NodeInfo::Landmarks(init_status(self.landmark_context(s, gn), s))
    }

    fn step(&self, parent: &NodeInfo, next: &State) -> NodeInfo {
        match parent {
            NodeInfo::Landmarks(st) => NodeInfo::Landmarks(progress_status(st, next)),
            NodeInfo::None => NodeInfo::None,
        }
    }

    fn estimate(&self, info: &NodeInfo, s: &State) -> Estimate {
        let NodeInfo::Landmarks(st) = info else {
            return Estimate::ZERO;
        };
        self.evaluations.fetch_add(1, Ordering::Relaxed);
        let u = unreached(st, s);
        let p = uniform_partition(&st.context, &u, &self.task);
        if self.audit {
            let bad = audit(&st.context, &u, &p, &self.task);
            self.violations.fetch_add(bad as u64, Ordering::Relaxed);
            debug_assert_eq!(bad, 0, "cost partition violates its inequalities");
        }
        if let Some(out) = &self.dump {
            let line = DumpLine {
                landmarks: st.context.len(),
                accepted: st.accepted_count(),
                unreached: u.len(),
                h: &p.value.to_string(),
            };
            let mut out = out.lock().unwrap();
            let _ = serde_json::to_writer(&mut *out, &line);
            let _ = out.write_all(b"\n");
        }
        p.value
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::Cost;
    use crate::goals::GoalFormula;
    use crate::model::{ground, parse_domain, parse_problem};

    fn bw2() -> Arc<GroundTask> {
        let dom =
            parse_domain(include_str!("../../tests/fixtures/blocksworld-domain.pddl")).unwrap();
        let prob =
            parse_problem(include_str!("../../tests/fixtures/bw2-problem.pddl"), &dom).unwrap();
        Arc::new(ground(&dom, &prob))
    }

    #[test]
    fn empty_network_is_zero() {
        let task = bw2();
        let h = LandmarkHeuristic::new(task.clone());
        let info = h.enter(&task.initial, &GoalNetwork::empty());
        assert_eq!(h.estimate(&info, &task.initial), Estimate::ZERO);
    }

    #[test]
    fn satisfied_sink_goal_is_zero() {
        let task = bw2();
        let h = LandmarkHeuristic::new(task.clone());
        let mut gn = GoalNetwork::empty();
        gn.add_node(GoalFormula::atom(task.fact_by_name("(on b a)").unwrap()));
        let info = h.enter(&task.initial, &gn);
        assert_eq!(h.estimate(&info, &task.initial), Estimate::ZERO);
    }

    #[test]
    fn two_block_estimate_is_bracketed() {
        let task = bw2();
        let h = LandmarkHeuristic::new(task.clone()).with_audit(true);
        let mut gn = GoalNetwork::empty();
        gn.add_node(GoalFormula::atom(task.fact_by_name("(on a b)").unwrap()));
        let info = h.enter(&task.initial, &gn);
        let v = h.estimate(&info, &task.initial).finite().unwrap();
        assert!(v >= Cost::ONE && v <= Cost::integer(4), "h = {v}");
        assert_eq!(h.audit_violations(), 0);
        assert_eq!(h.cache().len(), 1);
        h.enter(&task.initial, &gn);
        assert_eq!(h.cache().len(), 1);
    }
}
