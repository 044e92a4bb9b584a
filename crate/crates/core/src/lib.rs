//! Workbench for query determinacy of regular path queries.
//!
//! The crate evaluates regular path queries over edge-labeled graphs, plays the
//! Escape game (a chase over regular constraints in a red/green doubled
//! signature) to semi-decide finite non-determinacy, compiles grid-tiling
//! instances into determinacy instances, and checks counterexamples.
//!
//! Module map:
//!
//! - [`automata`]: symbols, regular expressions, NFAs, shortlex word enumeration.
//! - [`graphs`]: labeled graphs, chains, recoloring and shade erasure.
//! - [`rpq`]: query evaluation by product reachability and witness extraction.
//! - [`constraints`]: regular constraints, requests and path grafting.
//! - [`escape`]: positions, strategies, plays, traces and bounded search.
//! - [`ogtp`]: the grid tiling problem and its reduction to a determinacy instance.
//! - [`gadget`]: the doubled grid, shade decoration, counterexample checks,
//!   homomorphisms and isomorphism.
//! - [`cli`]: the command-line front end.

pub mod automata;
pub mod cli;
pub mod constraints;
pub mod escape;
pub mod gadget;
pub mod graphs;
pub mod instance;
pub mod ogtp;
pub mod rpq;

mod intern;

pub use automata::{parse_regex, Alphabet, Color, Nfa, Regex, Symbol, Word};
pub use graphs::{EndpointedGraph, LabeledGraph, VertexId};
