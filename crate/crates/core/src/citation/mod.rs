//! Citation graph construction and its structural analytics.

mod cliques;
mod ranksize;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::Corpus;
use crate::graph::Graph;

pub use cliques::maximal_cliques;
pub use ranksize::{fit_regimes, rank_size_fit, RankSizeFit, Regime, RegimeOptions};

#[derive(Debug, Error, PartialEq)]
pub enum CitationError {
    #[error("the corpus has no references")]
    EmptyCorpus,
    #[error("operation requires a directed citation graph")]
    Undirected,
    #[error("rank-size fit needs at least {required} cited nodes, found {available}")]
    InsufficientPoints { required: usize, available: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Node attribute holding the publication year.
pub const YEAR_ATTRIBUTE: &str = "year";
/// Node attribute set to `1` on seed references.
pub const SEED_ATTRIBUTE: &str = "seed";

/// One node per reference (label = title), one unit edge per citation link.
pub fn build_citation_graph(corpus: &Corpus) -> Result<Graph, CitationError> {
    if corpus.is_empty() {
        return Err(CitationError::EmptyCorpus);
    }
    let mut g = Graph::directed();
    for r in corpus.references() {
        g.set_label(&r.id, &r.title);
        if let Some(y) = r.year {
            g.set_attribute(&r.id, YEAR_ATTRIBUTE, &y.to_string());
        }
        if corpus.seed_ids().contains(&r.id) {
            g.set_attribute(&r.id, SEED_ATTRIBUTE, "1");
        }
    }
    for l in corpus.links() {
        g.add_edge(&l.citing_id, &l.cited_id, 1.0)
            .expect("corpus links are valid edges");
    }
    Ok(g)
}

/// Keep nodes cited at least once or citing at least two others, judged on
/// the input graph's degrees (single pass, not iterated).
pub fn core_filter(graph: &Graph) -> Result<Graph, CitationError> {
    if !graph.is_directed() {
        return Err(CitationError::Undirected);
    }
    Ok(graph.induced_subgraph(|i| graph.in_degree_of(i) >= 1 || graph.out_degree_of(i) >= 2))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkStats {
    pub nodes: usize,
    pub edges: usize,
    /// Mean in-degree over nodes cited at least once; absent without citations.
    pub mean_in_degree_all: Option<f64>,
    /// Mean in-degree over seed nodes present in the graph, zeros included.
    pub mean_in_degree_seed: Option<f64>,
    pub cited_nodes: usize,
    pub seed_nodes: usize,
    pub seeds_missing: usize,
    pub has_citations: bool,
}

pub fn network_stats(graph: &Graph, seed_ids: &BTreeSet<String>) -> NetworkStats {
    let n = graph.node_count();
    let cited: Vec<usize> = (0..n)
        .map(|i| graph.in_degree_of(i))
        .filter(|&d| d >= 1)
        .collect();
    let mean = |xs: &[usize]| {
        (!xs.is_empty()).then(|| xs.iter().sum::<usize>() as f64 / xs.len() as f64)
    };
    let seeds: Vec<usize> = seed_ids
        .iter()
        .filter_map(|s| graph.node_index(s))
        .map(|i| graph.in_degree_of(i))
        .collect();
    NetworkStats {
        nodes: n,
        edges: graph.edge_count(),
        mean_in_degree_all: mean(&cited),
        mean_in_degree_seed: mean(&seeds),
        cited_nodes: cited.len(),
        seed_nodes: seeds.len(),
        seeds_missing: seed_ids.len() - seeds.len(),
        has_citations: !cited.is_empty(),
    }
}
