use std::sync::Arc;

use super::classical::classical_astar;
use super::hopgdp::{hopgdp, SearchOptions};
use super::metrics::{Budget, SearchResult};
use crate::heuristics::{BlindHeuristic, LandmarkHeuristic};
use crate::task::HgnProblem;

/// A planner that can be run on a problem under a budget.
pub trait Planner: Send + Sync {
    fn name(&self) -> &str;
    fn solve(&self, p: &HgnProblem, budget: Budget) -> SearchResult;
}

struct HopgdpLandmarks;
struct HopgdpBlind;
struct AstarLandmarks;

impl Planner for HopgdpLandmarks {
    fn name(&self) -> &str {
        "hopgdp"
    }

    fn solve(&self, p: &HgnProblem, budget: Budget) -> SearchResult {
        let h = LandmarkHeuristic::new(Arc::clone(&p.task));
        let mut r = hopgdp(
            p,
            &p.initial,
            &p.network,
            &h,
            SearchOptions {
                budget,
                ..Default::default()
            },
            None,
        );
        r.metrics.landmark_graphs = h.cache().len() as u64;
        r
    }
}

impl Planner for HopgdpBlind {
    fn name(&self) -> &str {
        "hopgdp_blind"
    }

    fn solve(&self, p: &HgnProblem, budget: Budget) -> SearchResult {
        hopgdp(
            p,
            &p.initial,
            &p.network,
            &BlindHeuristic,
            SearchOptions {
                budget,
                ..Default::default()
            },
            None,
        )
    }
}

impl Planner for AstarLandmarks {
    fn name(&self) -> &str {
        "astar_hl"
    }

    fn solve(&self, p: &HgnProblem, budget: Budget) -> SearchResult {
        classical_astar(
            &p.task,
            &p.initial,
            &p.goal,
            true,
            SearchOptions {
                budget,
                ..Default::default()
            },
        )
    }
}

/// Planners by name. Lookup also accepts the short CLI aliases `blind` and
/// `astar`.
pub struct PlannerRegistry {
    planners: Vec<Box<dyn Planner>>,
}

impl Default for PlannerRegistry {
    fn default() -> Self {
        PlannerRegistry {
            planners: vec![
                Box::new(HopgdpLandmarks),
                Box::new(HopgdpBlind),
                Box::new(AstarLandmarks),
            ],
        }
    }
}

impl PlannerRegistry {
    pub fn register(&mut self, planner: Box<dyn Planner>) {
        self.planners.retain(|p| p.name() != planner.name());
        self.planners.push(planner);
    }

    pub fn get(&self, name: &str) -> Option<&dyn Planner> {
        let name = match name {
            "blind" => "hopgdp_blind",
            "astar" => "astar_hl",
            other => other,
        };
        self.planners
            .iter()
            .find(|p| p.name() == name)
            .map(|p| p.as_ref())
    }

    pub fn names(&self) -> Vec<&str> {
        self.planners.iter().map(|p| p.name()).collect()
    }
}
