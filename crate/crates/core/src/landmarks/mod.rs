//! Relaxed reachability and landmark graphs for states and goal networks.

pub mod export;
pub mod generation;
pub mod graph;
pub mod rpg;

pub use generation::{backchain_candidates, compute_hgn_landmarks, first_achievers};
pub use graph::{Landmark, LandmarkGraph, LmId, OrderingKind};
pub use rpg::{build_rpg, Rpg};
