//! Upward book embeddings of st-graphs.
//!
//! The crate covers the k-page decision problem (an exact backtracking solver),
//! the Betweenness reduction for k >= 3, constructive 2-page results for
//! special face shapes, and a decision procedure for 2 pages that runs over an
//! SPQR-tree with sphere-cut decompositions of the rigid components.

pub mod book;
pub mod construct;
pub mod decomp;
pub mod fixtures;
pub mod fpt;
pub mod gen;
pub mod graph;
pub mod hardness;
pub mod io;
pub mod render;
pub mod solver;
pub mod special;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
