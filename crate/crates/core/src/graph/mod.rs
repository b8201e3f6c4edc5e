//! Data model for decorated resolution graphs, Nielsen–Thurston graphs and
//! integer chains on the latter.

pub mod chain;
pub mod nt;
pub mod resolution;

pub use chain::{NamedChain, OneChain};
pub use nt::{ArrowSpec, Cell, EdgeSpec, NtArrow, NtEdge, NtGraph, OrbitTag, Piece, PieceSpec, Quotient};
pub use resolution::{
    Arrow, Bamboo, BambooEnd, BambooKind, DeadBranch, Decomposition, Edge, ResolutionGraph, Vertex, VertexClass,
};
