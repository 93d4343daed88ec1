use serde::{Deserialize, Serialize};

use crate::goals::NodeId;

/// One derivation step from a (state, network) pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceStep {
    Release(NodeId),
    /// Ground action name, e.g. `(pickup a)`.
    Action(String),
    Decompose {
        node: NodeId,
        method: String,
        args: Vec<String>,
    },
}

pub type DecompositionTrace = Vec<TraceStep>;

pub fn trace_to_json(trace: &[TraceStep]) -> String {
    serde_json::to_string_pretty(trace).expect("trace serializes")
}

pub fn trace_from_json(text: &str) -> Result<DecompositionTrace, serde_json::Error> {
    serde_json::from_str(text)
}
