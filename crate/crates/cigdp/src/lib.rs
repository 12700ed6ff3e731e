//! Toolkit for the constrained incremental graph drawing problem.
//!
//! A layered graph comes with a frozen layout for its *original* vertices;
//! a set of *incremental* vertices per layer must be inserted so that the
//! number of arc crossings is minimized while (a) original vertices keep
//! their relative order and (b) no original vertex moves more than `d`
//! positions away from its initial rank.
//!
//! The crate provides the problem model ([`graph`], [`drawing`]), instance
//! text formats and generators ([`instance`], [`generate`]), graph
//! embeddings ([`embedding`]), greedy randomized constructions
//! ([`construct`]), a local search ([`search`]), the multistart driver
//! ([`grasp`]), an exact side ([`milp`]: integer-programming export plus a
//! brute-force optimum for small instances), and evaluation utilities
//! ([`eval`]). SVG rendering lives in [`svg`].

pub mod construct;
pub mod drawing;
pub mod embedding;
pub mod eval;
pub mod fenwick;
pub mod generate;
pub mod graph;
pub mod grasp;
pub mod instance;
pub mod linalg;
pub mod milp;
pub mod search;
pub mod svg;

pub use drawing::Drawing;
pub use graph::{Arc, IncrementalGraph, VertexId};
pub use instance::Instance;
