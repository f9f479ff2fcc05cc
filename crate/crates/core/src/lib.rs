//! Exact computation of zero forcing numbers, algebraic co-ranks (critical
//! ideals of the generalized Laplacian) and minimum-rank-type parameters of
//! small graphs and digraphs.

// matrix code indexes rows and columns together; index loops read better
#![allow(clippy::needless_range_loop)]

pub mod appendix;
pub mod canon;
pub mod classify;
pub mod critical;
pub mod error;
pub mod formats;
pub mod generators;
pub mod graph;
pub mod induced;
pub mod laplacian;
pub mod linalg;
pub mod minrank;
pub mod poly;
pub mod report;
pub mod sweep;
pub mod zero_forcing;

pub use error::{Error, Result};
pub use graph::{Adjacency, AnyGraph, Digraph, Graph};
