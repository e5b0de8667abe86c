//! Constructive machinery for Berge Hamilton cycles in random subgraph
//! processes of uniform hypergraphs.
//!
//! The crate is `no_std` and only needs `alloc`. It contains:
//!
//! - [`hypergraph`]: the immutable r-uniform [`Hypergraph`] with incidence
//!   index, degree/codegree/neighbourhood queries, connectivity, the
//!   `(k, α)`-expander checker and the minimum-degree condition checkers.
//! - [`generators`]: the host families (complete, two cliques, two cliques
//!   plus a crossing perfect matching, binomial, certified degree-condition
//!   hosts).
//! - [`engine`]: Berge paths and cycles, Pósa rotations, endpoint closures,
//!   the rotation-extension decider, expander extraction and the booster
//!   absorption loop.
//! - [`oracle`]: exact small-instance ground truth driven by bipartite
//!   matching between consecutive vertex pairs and edges.
//! - [`process`]: random edge orderings, hitting times `τ_k` and
//!   `τ_BH`, and single Monte Carlo trials plus their summary.
//! - [`thresholds`] and [`properties`]: numeric evaluation of the `τ_2`
//!   threshold window and the structural properties used to build the
//!   sparse expander.
//!
//! Randomness comes exclusively from [`rng::SplitMix64`] so every result
//! is a pure function of its inputs and seed.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub(crate) mod combin;
pub mod engine;
pub mod error;
pub mod generators;
pub mod hypergraph;
pub mod oracle;
pub mod process;
pub mod properties;
pub mod rng;
pub mod thresholds;

pub use engine::{BergeCycle, BergePath, DecisionOutcome, Provenance, Verdict};
pub use error::{Error, Result};
pub use hypergraph::{Hypergraph, Ratio, VertexSet};
pub use combin::binomial;
pub use rng::SplitMix64;
