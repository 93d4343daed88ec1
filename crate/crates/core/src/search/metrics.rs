use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::trace::DecompositionTrace;
use crate::cost::Cost;
use crate::model::Plan;

/// Resource limits, checked at expansion boundaries.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Budget {
    pub time: Option<Duration>,
    pub max_expansions: Option<u64>,
    pub memory_bytes: Option<usize>,
}

impl Budget {
    pub fn unlimited() -> Budget {
        Budget::default()
    }

    pub fn seconds(s: f64) -> Budget {
        Budget {
            time: Some(Duration::from_secs_f64(s)),
            ..Budget::default()
        }
    }

    pub fn with_max_expansions(mut self, n: u64) -> Budget {
        self.max_expansions = Some(n);
        self
    }

    pub fn with_memory(mut self, bytes: usize) -> Budget {
        self.memory_bytes = Some(bytes);
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AbortReason {
    Time,
    Expansions,
    Memory,
}

pub(crate) struct Limits {
    start: Instant,
    budget: Budget,
}

impl Limits {
    pub(crate) fn new(budget: Budget) -> Limits {
        Limits {
            start: Instant::now(),
            budget,
        }
    }

    pub(crate) fn elapsed(&self) -> Duration {
        self.start.elapsed()
    }

    pub(crate) fn check(&self, expanded: u64, memory: usize) -> Option<AbortReason> {
        if self.budget.max_expansions.is_some_and(|n| expanded >= n) {
            return Some(AbortReason::Expansions);
        }
        if self.budget.memory_bytes.is_some_and(|m| memory > m) {
            return Some(AbortReason::Memory);
        }
        // Reading the clock on every expansion is measurable; every 64th suffices.
        if expanded.is_multiple_of(64)
            && self.budget.time.is_some_and(|t| self.start.elapsed() >= t)
        {
            return Some(AbortReason::Time);
        }
        None
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SearchMetrics {
    pub expanded: u64,
    pub generated: u64,
    pub reopened: u64,
    pub evaluated: u64,
    pub peak_open: u64,
    pub landmark_graphs: u64,
    pub cost: Option<Cost>,
    pub heuristic_seconds: f64,
    pub total_seconds: f64,
    pub h_time_fraction: f64,
}

/// Metrics fields that do not depend on timing, for reproducibility checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeterministicMetrics {
    pub expanded: u64,
    pub generated: u64,
    pub reopened: u64,
    pub evaluated: u64,
    pub peak_open: u64,
    pub cost: Option<Cost>,
}

impl SearchMetrics {
    pub fn deterministic(&self) -> DeterministicMetrics {
        DeterministicMetrics {
            expanded: self.expanded,
            generated: self.generated,
            reopened: self.reopened,
            evaluated: self.evaluated,
            peak_open: self.peak_open,
            cost: self.cost,
        }
    }

    pub(crate) fn finish(&mut self, total: Duration, heuristic: Duration) {
        self.total_seconds = total.as_secs_f64();
        self.heuristic_seconds = heuristic.as_secs_f64().min(self.total_seconds);
        self.h_time_fraction = if self.total_seconds > 0.0 {
            self.heuristic_seconds / self.total_seconds
        } else {
            0.0
        };
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub plan: Plan,
    pub trace: DecompositionTrace,
    pub cost: Cost,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Solved(Solution),
    /// The search space was exhausted.
    Failed,
    Aborted(AbortReason),
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub outcome: Outcome,
    pub metrics: SearchMetrics,
}

impl SearchResult {
    pub fn solution(&self) -> Option<&Solution> {
        match &self.outcome {
            Outcome::Solved(s) => Some(s),
            _ => None,
        }
    }
}
