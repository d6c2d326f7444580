//! Model existence for qualitative constraint networks.
//!
//! An instance is a set of named elements and constraints `(x, y) in R`. A
//! model assigns one base relation to every ordered pair such that every
//! element is equal to itself, every triangle is allowed by the composition
//! table and every constraint holds. [`solve`] decides this by algebraic
//! closure plus backtracking over canonical pairs `i < j`; the reverse pair
//! always carries the converse.

mod assignment;
mod file;
mod instance;
mod network;
mod search;

pub use assignment::{canonical_pairs, pair_index, verify_assignment, Assignment, AssignmentViolation};
pub use file::{model_value, parse_instance, write_instance, write_models, InstanceFileError};
pub use instance::{Constraint, Instance, InstanceError};
pub use network::{algebraic_closure, build_network, Closure, Network};
pub use search::{
    enumerate_models, enumerate_models_with, solve, solve_with, Enumeration, Outcome, SearchStats, SolveOptions,
    SolverError,
};
