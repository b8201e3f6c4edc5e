//! Exact computation of the monodromy quadratic form of a curve germ on a
//! normal surface singularity, starting from a decorated resolution graph or
//! a Nielsen–Thurston graph.
//!
//! The pipeline is: multiplicities → screw numbers → semistable graph →
//! Gram matrix in a homology basis → invariants and characteristic
//! polynomials. No floating point is used anywhere.

pub mod charpoly;
pub mod error;
pub mod graph;
pub mod io;
pub mod linalg;
pub mod multiplicity;
pub mod pipeline;
pub mod quadform;
pub mod screw;
pub mod semistable;

pub use error::{Error, ParseError, Result};
