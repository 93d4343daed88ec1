//! Path-dependent landmark acceptance.

use std::sync::Arc;

use crate::landmarks::{LandmarkGraph, LmId, OrderingKind};
use crate::model::{ActionId, GroundTask, State};

/// A landmark graph with the lookups the heuristic needs.
#[derive(Debug)]
pub struct LandmarkContext {
    pub graph: LandmarkGraph,
    gn_preds: Vec<Vec<LmId>>,
    gn_succs: Vec<Vec<LmId>>,
    /// Actions adding some atom of each landmark, ascending.
    achievers: Vec<Vec<ActionId>>,
}

impl LandmarkContext {
    /// `graph` must be compact (dense ids).
    pub fn new(graph: LandmarkGraph, task: &GroundTask) -> LandmarkContext {
        let n = graph.capacity();
        debug_assert_eq!(n, graph.len(), "landmark graph must be compact");
        let mut gn_preds = vec![Vec::new(); n];
        let mut gn_succs = vec![Vec::new(); n];
        for (a, b, k) in graph.orderings() {
            if k == OrderingKind::GreedyNecessary {
                gn_preds[b].push(a);
                gn_succs[a].push(b);
            }
        }
        let achievers = graph
            .landmarks()
            .map(|(_, l)| {
                let mut v: Vec<ActionId> = l
                    .atoms()
                    .iter()
                    .flat_map(|&f| task.adders(f))
                    .copied()
                    .collect();
                v.sort_unstable();
                v.dedup();
                v
            })
            .collect();
        LandmarkContext {
            graph,
            gn_preds,
            gn_succs,
            achievers,
        }
    }

    pub fn len(&self) -> usize {
        self.achievers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.achievers.is_empty()
    }

    pub fn achievers(&self, id: LmId) -> &[ActionId] {
        &self.achievers[id]
    }

    fn holds(&self, id: LmId, s: &State) -> bool {
        self.graph.get(id).is_some_and(|l| l.holds(s))
    }
}

/// Landmarks accepted so far along one search path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LandmarkStatus {
    pub context: Arc<LandmarkContext>,
    accepted: Vec<bool>,
}

impl LandmarkStatus {
    pub fn is_accepted(&self, id: LmId) -> bool {
        self.accepted[id]
    }

    pub fn accepted_count(&self) -> usize {
        self.accepted.iter().filter(|&&a| a).count()
    }

    fn close(&mut self, s: &State) {
        let ctx = &self.context;
        loop {
            let mut changed = false;
            for id in 0..ctx.len() {
                if !self.accepted[id]
                    && ctx.holds(id, s)
                    && ctx.gn_preds[id].iter().all(|&p| self.accepted[p])
                {
                    self.accepted[id] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
    }
}

impl PartialEq for LandmarkContext {
    fn eq(&self, other: &Self) -> bool {
        self.graph == other.graph
    }
}

impl Eq for LandmarkContext {}

/// Accepts every landmark true in `s` whose greedy-necessary predecessors
/// are accepted, to a fixpoint.
pub fn init_status(context: Arc<LandmarkContext>, s: &State) -> LandmarkStatus {
    let mut st = LandmarkStatus {
        accepted: vec![false; context.len()],
        context,
    };
    st.close(s);
    st
}

/// Status after moving to `next`; accepted landmarks stay accepted.
pub fn progress_status(st: &LandmarkStatus, next: &State) -> LandmarkStatus {
    let mut out = st.clone();
    out.close(next);
    out
}

/// Landmarks still to be achieved: not accepted, or accepted but false in
/// `s` while some greedy-necessary successor is not yet accepted.
pub fn unreached(st: &LandmarkStatus, s: &State) -> Vec<LmId> {
    let ctx = &st.context;
    (0..ctx.len())
        .filter(|&id| {
            !st.accepted[id]
                || (!ctx.holds(id, s) && ctx.gn_succs[id].iter().any(|&x| !st.accepted[x]))
        })
        .collect()
}
