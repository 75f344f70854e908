//! Edge-fault-tolerant spanners of weighted hypergraphs.
//!
//! - [`hypercore`]: the hypergraph model, shortest paths under hyperedge
//!   faults, and the `.hg` text format.
//! - [`assoc`]: clique expansion and lifting graph spanners back.
//! - [`baseline`]: greedy and `+2` graph spanners, the peel-off EFT
//!   hyperspanner.
//! - [`eftcluster`]: the randomized clustering construction.
//! - [`additive_eft`]: additive EFT hyperspanners.
//! - [`instances`]: random, high-girth and lower-bound instances.
//! - [`verify`]: brute-force fault oracles and invariant replay.
//! - [`bench`]: size and time scaling runs.

pub mod additive_eft;
pub mod assoc;
pub mod baseline;
pub mod bench;
pub mod eftcluster;
pub mod hypercore;
pub mod instances;
pub mod verify;

pub use hypercore::{EdgeId, FaultSet, HyperPath, Hyperedge, Hypergraph, HypergraphError, Vertex, INF};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/overview.md")]
    struct Overview;
    #[doc = include_str!("../../../book/src/hypergraphs.md")]
    struct Hypergraphs;
    #[doc = include_str!("../../../book/src/associated.md")]
    struct Associated;
    #[doc = include_str!("../../../book/src/peeloff.md")]
    struct Peeloff;
    #[doc = include_str!("../../../book/src/clustering.md")]
    struct Clustering;
    #[doc = include_str!("../../../book/src/verification.md")]
    struct Verification;
    #[doc = include_str!("../../../book/src/lower_bounds.md")]
    struct LowerBounds;
    #[doc = include_str!("../../../book/src/additive.md")]
    struct Additive;
    #[doc = include_str!("../../../book/src/cli.md")]
    struct Cli;
}
