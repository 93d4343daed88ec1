//! Goal formulas, goal networks and HGN methods.

pub mod formula;
pub mod methods;
pub mod network;
pub mod relevance;

pub use formula::{GoalFormula, Literal};
pub use methods::{
    instantiate, parse_methods, relevant_method_instances, GroundMethod, MethodLibrary,
    MethodSchema,
};
pub use network::{GoalNetwork, NetworkKey, NodeId, SubNetwork};
pub use relevance::{action_relevant, relevant_actions};
