//! Learning causal orientations on chordal skeletons with interventions of
//! bounded size.
//!
//! The learner starts from an undirected chordal skeleton whose hidden
//! orientation has no immoralities. Each intervention on a vertex set reveals
//! the orientation of every edge crossing the cut, after which the Meek rules
//! propagate what follows. Strategies differ in how they pick the sets:
//!
//! * [`strategies::naive_nonadaptive`] walks a fixed `(n, k)` separating system;
//! * [`strategies::hybrid_adaptive`] colors the remaining graph, walks a
//!   separating system over colors, and scores vertices by the forests that
//!   pairs of color classes induce;
//! * [`strategies::tree_adaptive`] handles trees with single-vertex interventions;
//! * [`strategies::randomized_block`] handles complete graphs by blocks.

pub mod bench;
pub mod graph;
pub mod instances;
pub mod meek;
pub mod oracle;
pub mod sepsys;
pub mod strategies;

pub use graph::{Coloring, Forest, Ordering, Skeleton};
pub use meek::{Dag, Pdag};
pub use oracle::{GroundTruth, Responder, Transcript};
pub use strategies::{Strategy, StrategyResult};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] graph::GraphError),
    #[error(transparent)]
    Meek(#[from] meek::MeekError),
    #[error(transparent)]
    Sepsys(#[from] sepsys::SepsysError),
    #[error(transparent)]
    Bound(#[from] sepsys::BoundError),
    #[error(transparent)]
    Oracle(#[from] oracle::OracleError),
    #[error(transparent)]
    Transcript(#[from] oracle::TranscriptError),
    #[error(transparent)]
    Strategy(#[from] strategies::StrategyError),
    #[error(transparent)]
    Bench(#[from] bench::BenchError),
}
