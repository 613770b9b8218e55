//! Preferential attachment multigraphs, their Pólya-point local limit, and
//! the contact process on both.
//!
//! Everything in this crate is pure computation over explicit random
//! streams (`rand::Rng`), so it builds without `std`; only `alloc` is
//! needed. File formats, the CLI, and experiment orchestration live in the
//! `polya-contact` companion crate.
//!
//! Layout:
//!
//! * [`graphgen`]: model constants, urn weights, and the two graph builders
//!   (urn representation and the direct sequential model).
//! * [`locallimit`]: the Pólya-point tree, its mixed-Poisson degree laws,
//!   and comparison Galton–Watson trees.
//! * [`contact`]: Gillespie and graphical-representation engines, lit/hot
//!   predicates, star and escape trials.
//! * [`oracle`]: exact CTMC computations for graphs with at most 12 vertices.
//! * [`metrics`]: degree tails, BFS distances, balls, local-limit comparison.
//! * [`stats`]: the small amount of descriptive statistics and regression
//!   the rest of the crate needs.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod contact;
mod error;
pub mod graph;
pub mod graphgen;
pub mod locallimit;
mod math;
pub mod metrics;
pub mod oracle;
pub mod stats;
pub mod tree;

pub use error::{Error, Result};
pub use graph::MultiGraph;
pub use graphgen::Constants;
pub use tree::Tree;
