//! Reconstruct a scientific landscape from a bibliographic corpus.
//!
//! The crate covers the whole chain from raw references to interdisciplinarity
//! measures:
//!
//! - [`corpus`]: reference/link model, ingestion, title deduplication, on-disk store
//! - [`catalog`]: abstract enrichment from an HTTP catalog with disk cache and rate limiting
//! - [`graph`]: weighted graph container, partitions, GEXF/GraphML/CSV exchange
//! - [`citation`]: citation graph, core filter, rank-size regimes, maximal cliques
//! - [`community`]: modularity, Louvain, bootstrap significance, ARI
//! - [`keywords`]: language detection, tagging, stemming, n-gram candidates, relevance scores
//! - [`semantic`]: keyword co-occurrence network, filtering, semantic communities
//! - [`sweep`]: filter-parameter sensitivity grid and Pareto front
//! - [`measures`]: class probabilities, originality, composition, correlation
//!
//! [`synth`] holds seeded generators for planted test corpora and graphs.

pub mod catalog;
pub mod citation;
pub mod community;
pub mod corpus;
pub mod graph;
pub mod keywords;
pub mod measures;
pub mod semantic;
pub mod sweep;
pub mod synth;
pub mod text;

/// Version of the on-disk formats written by this crate.
pub const FORMAT_VERSION: u32 = 1;

/// Name of the pseudo-random generator behind every seeded operation.
pub const RNG_ALGORITHM: &str = "ChaCha8";

pub use graph::{Graph, Partition};
