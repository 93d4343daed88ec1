//! Classical planning substrate: parsing, grounding and state transitions.

pub mod domain;
pub mod ground;
pub mod plan;
pub mod problem;
pub mod state;

pub use domain::{parse_domain, DomainModel, OperatorSchema};
pub use ground::{ground, ActionId, GroundAction, GroundTask};
pub use plan::{apply_action, execute_plan, ExecError, Plan};
pub use problem::{parse_problem, Atom, AtomLiteral, ProblemInstance};
pub use state::{FactId, State};
