//! Landmark acceptance, cost partitioning and search heuristics.

pub mod hgn;
pub mod partition;
pub mod status;

pub use hgn::{BlindHeuristic, HeuristicCache, LandmarkHeuristic, NetworkHeuristic, NodeInfo};
pub use partition::{h_l_uniform, uniform_partition};
pub use status::{init_status, progress_status, unreached, LandmarkContext, LandmarkStatus};
