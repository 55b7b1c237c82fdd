//! Certified algorithms for ends, separation, infinite paths and Eulerian
//! conditions on lazily described infinite graphs, with schedule-driven
//! gadget families and a model checker for automatic presentations.

pub mod automatic;
pub mod cli;
pub mod eulerian;
pub mod gadgets;
pub mod graph_core;
pub mod paths;
pub mod separation;

pub use graph_core::{
    ball, degree, finite_components, Ball, EdgeRef, EdgeSet, Fuel, GraphError, GraphOracle,
    Spent, VertexId,
};
