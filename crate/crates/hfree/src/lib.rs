//! Exact solvers, hardness gadgets and brute-force oracles for problems on
//! graphs that exclude subdivided "H" graphs as subgraphs.
//!
//! Modules:
//! - [`graph`]: immutable simple graphs and edits
//! - [`patterns`]: named pattern graphs and subgraph detection
//! - [`oracles`]: exhaustive reference solvers
//! - [`solvers`]: polynomial algorithms on restricted classes
//! - [`reductions`]: reductions and instance generators
//! - [`certify`]: certificate verifiers
//! - [`harness`]: randomized solver-versus-oracle runs

pub mod certify;
pub mod graph;
pub mod harness;
pub mod oracles;
pub mod patterns;
pub mod reductions;
pub mod solvers;

pub use graph::{Graph, GraphError};
