//! Spanning trees with few branch vertices.
//!
//! A branch vertex of a tree is a vertex of tree-degree at least three.
//! This crate builds spanning trees with a bounded number of branch
//! vertices in undirected graphs, working through the constructive
//! ingredients of the minimum-degree sufficient condition:
//!
//! * sparse cuts and robust partitions ([`partition`]),
//! * maximum matchings, Gallai–Edmonds sets and 2-matchings ([`matching`]),
//! * star-matchings and star-2-matchings ([`stars`]),
//! * star-cycles and tree stitching ([`assembly`]),
//! * exact small-instance oracles and exhaustive enumerators ([`oracle`]),
//! * extremal instance generators ([`generators`]).
//!
//! Graphs are simple and undirected with dense 0-indexed vertices
//! ([`graph::Graph`]). All threshold comparisons are exact rational
//! arithmetic; nothing in the certified paths uses floating point.

pub mod assembly;
pub mod bipartite;
pub mod enumerate;
pub mod generators;
pub mod graph;
pub mod matching;
pub mod oracle;
pub mod partition;
pub mod ratio;
pub mod stars;
pub mod tree;

pub use graph::{Cut, Graph, GraphError};
pub use ratio::Rat;
pub use tree::{SpanningTree, Tree};
