pub mod bench;
pub mod cost;
pub mod goals;
pub mod heuristics;
pub mod landmarks;
pub mod model;
pub mod search;
pub mod sexpr;
pub mod task;

pub use cost::{Cost, Estimate};
