//! Label-propagation community detection.
//!
//! Three detectors share one CSR [`Graph`](graph::Graph) type and one
//! modularity scorer:
//!
//! * [`rak`]: classic label propagation, strict or random tie-breaking.
//! * [`copra`]: multi-label propagation with belonging coefficients,
//!   projected to one community per vertex.
//! * [`slpa`]: speaker-listener propagation with a per-vertex label memory.
//!
//! Each runs sequentially on one worker or on several worker threads that pull
//! chunks of vertices and update labels in place. Vertices are visited in index
//! order or, with [`VisitOrder::Shuffled`], in a fresh seeded order every
//! iteration.
//!
//! ```
//! use labelprop::graph::preprocess;
//! use labelprop::rak::{rak_detect, RakParams};
//! use labelprop::testkit::{gen_raw, SyntheticGraph};
//!
//! let graph = preprocess(&gen_raw(SyntheticGraph::DisjointCliques { count: 3, size: 5 }));
//! let result = rak_detect(&graph, &RakParams::default());
//! assert_eq!(result.assignment.community_count(), 3);
//! assert!(result.modularity > 0.6);
//! ```

pub mod copra;
pub mod detect;
pub mod graph;
pub mod io;
pub mod prng;
pub mod quality;
pub mod rak;
pub mod slpa;
pub mod tally;
pub mod testkit;

pub use detect::{DetectionResult, VisitOrder};
pub use graph::{preprocess, CommunityAssignment, Graph, VertexId};
pub use quality::modularity;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/graphs.md")]
    mod graphs {}
    #[doc = include_str!("../../../book/src/modularity.md")]
    mod modularity {}
    #[doc = include_str!("../../../book/src/prng.md")]
    mod prng {}
    #[doc = include_str!("../../../book/src/rak.md")]
    mod rak {}
    #[doc = include_str!("../../../book/src/copra.md")]
    mod copra {}
    #[doc = include_str!("../../../book/src/slpa.md")]
    mod slpa {}
    #[doc = include_str!("../../../book/src/parallel.md")]
    mod parallel {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
