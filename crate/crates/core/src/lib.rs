//! Rank-expansions of graphs.
//!
//! Given a graph `G` and a rank-decomposition of width `k`, the rank-expansion
//! is a graph `H` of tree-width at most `2k` (path-width at most `k + 1` for
//! linear decompositions) that has `G` as a pivot-minor. This crate builds
//! `H`, the pivot set and the tree-decomposition, and checks all of them
//! with exact GF(2) arithmetic.

pub mod gf2;
pub mod graph;
pub mod iso;
pub mod decomposition;
pub mod expansion;
pub mod driver;
pub mod characterize;
pub mod io;

pub use gf2::{BitMatrix, Gf2Error, Gf2Matrix};
pub use graph::{apply_script, Graph, GraphError, ScriptError, Step, TransformScript};
