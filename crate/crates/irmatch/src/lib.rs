//! Bounded-cycle matching on directed compatibility graphs, with
//! individual-rationality mechanisms and a Monte Carlo harness that checks
//! the expectation, concentration, and gap bounds empirically.
//!
//! The library models exchange pools as directed graphs whose matchings are
//! vertex-disjoint cycles of bounded length. Vertices are assigned to
//! players at random, and the question is how much a player can gain by
//! matching internally instead of joining the pooled optimum. See the
//! `examples/` directory for one runnable program per capability and the
//! `irmatch` binary for the command-line interface.

pub mod cli;
pub mod decomposition;
pub mod error;
pub mod experiment;
pub mod generators;
pub mod graph;
pub mod mechanisms;
pub mod ownership;
pub mod solver;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};
