//! Shared combinatorial and arithmetic substrate: exact scalars, intervals,
//! multiindices and parity maps, weighted graphs, enumeration utilities and
//! exact linear algebra.

pub mod combinat;
pub mod exact;
pub mod graph;
pub mod interval;
pub mod linalg;
pub mod multiindex;
pub mod poly;
pub mod rng;

pub use exact::ExactScalar;
pub use graph::WeightedGraph;
pub use interval::IntervalScalar;
pub use multiindex::{MultiIndex, ParityMap};
pub use poly::Poly;
