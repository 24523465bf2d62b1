//! Uniform sampling of directed graphs with a fixed undirected backbone and
//! bounded directed flag complex simplex counts.
//!
//! `no_std` with `alloc`. File formats, the command line and parallel chains
//! live in the `flagmc` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bitset;
pub mod bounds;
pub mod cliques;
pub mod dagify;
pub mod diagnostics;
pub mod error;
pub mod flag;
pub mod graph;
pub mod indexset;
pub mod mcmc;
pub mod moves;
pub mod oracle;
pub mod stats;

pub use cliques::MaximalCliques;
pub use error::{Error, Result};
pub use flag::{count_simplices, CountDelta, LocalCounter, NeighbourhoodCache, SimplexCounts};
pub use graph::{DirectedGraph, Edge, UndirectedGraph, Vertex};
pub use moves::{MoveKind, MoveMix, Proposer, Transition};
