//! Maximum flow solvers around a shared arc-paired network representation.
//!
//! The crate provides a bulk-synchronous parallel push-relabel solver with
//! parallel global relabeling ([`par`]), sequential baselines and flow
//! post-processing ([`seq`]), generators for synthetic instances
//! ([`generate`]) and DIMACS-format input and output ([`dimacs`]).

pub mod dimacs;
pub mod generate;
pub mod graph;
pub mod par;
pub mod result;
pub mod seq;

pub use graph::{BuildError, Capacity, FlowAssignment, FlowNetwork, ValidationReport, Violation};
pub use result::{PreflowResult, SolveStats};
