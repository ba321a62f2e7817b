//! Ordered graphs, traced graphs, constellations, the peeling recursion that
//! finds long induced paths, and the lower-bound construction.

pub mod constellation;
pub mod decomposition;
pub mod error;
pub mod io;
pub mod lowerbound;
pub mod oracle;
pub mod ordered;
pub mod peel;

pub use error::{CoreError, Result};
pub use ordered::{Embedding, OrderedGraph, TracedGraph};
