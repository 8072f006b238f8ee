//! Synthesis and verification of small-depth proof systems.
//!
//! A proof system for a language `L` is a circuit whose range, over all
//! proof inputs, is exactly the length-`n` slice of `L`. This crate builds
//! such circuits from language descriptions and checks them:
//!
//! * [`circuit`]: bounded-fanin AND/OR/NOT circuits, metrics, text format.
//! * [`languages`]: automata and language descriptions with membership oracles.
//! * [`regular`]: interval-tree proof systems for automata and structured
//!   branching programs.
//! * [`counting`]: threshold and exact-count proof systems.
//! * [`graph`]: constant-locality systems for even-degree graphs, undirected
//!   s-t connectivity and directed s-t unreachability.
//! * [`np`]: systems built from NP verifier circuits.
//! * [`combinators`]: closure operations on proof systems.
//! * [`expr`]: composable system descriptions with membership and witnesses.
//! * [`verify`]: soundness, completeness and locality checks.

pub mod bits;
pub mod circuit;
pub mod combinators;
pub mod counting;
pub mod error;
pub mod expr;
pub mod graph;
pub mod interval;
pub mod languages;
pub mod np;
pub mod regular;
pub mod verify;

pub use error::{Error, Result};
