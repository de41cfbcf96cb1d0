//! Keyword co-occurrence network, its four-parameter filter and semantic
//! communities.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::community::{louvain, CommunityError, CommunityResult};
use crate::graph::Graph;
use crate::keywords::KeywordIndex;

/// Order in which [`filter_network`] applies its criteria.
pub const FILTER_ORDER: &str = "doc-frequency window, edge weight, max degree, isolated vertices";
pub const TOP_KEYWORDS: usize = 10;
pub const DEFAULT_NOISE_FLOOR: usize = 4;

#[derive(Debug, Error)]
pub enum SemanticError {
    #[error("the keyword index is empty")]
    EmptyIndex,
    #[error("invalid filter parameters: {0}")]
    InvalidParams(String),
    #[error("the filtered network is empty")]
    EmptyGraph,
    #[error("co-occurrence matrix and keyword index disagree")]
    Mismatch,
    #[error(transparent)]
    Community(#[from] CommunityError),
}

/// Symmetric document co-occurrence counts between kept keywords.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CooccurrenceMatrix {
    /// Keyword keys, aligned with the index the matrix was built from.
    pub keys: Vec<String>,
    pub doc_freq: Vec<usize>,
    /// `(i, j, count)` with `i < j` and `count > 0`, sorted.
    pub entries: Vec<(usize, usize, u64)>,
}

impl CooccurrenceMatrix {
    pub fn get(&self, i: usize, j: usize) -> u64 {
        let key = if i < j { (i, j) } else { (j, i) };
        self.entries
            .binary_search_by(|&(a, b, _)| (a, b).cmp(&key))
            .map(|p| self.entries[p].2)
            .unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn max_weight(&self) -> u64 {
        self.entries.iter().map(|e| e.2).max().unwrap_or(0)
    }
}

/// Count, for every pair of keywords, the documents containing both.
pub fn build_cooccurrence(index: &KeywordIndex) -> Result<CooccurrenceMatrix, SemanticError> {
    if index.is_empty() {
        return Err(SemanticError::EmptyIndex);
    }
    let k = index.len();
    let mut doc_ids: BTreeMap<&str, usize> = BTreeMap::new();
    for docs in &index.postings {
        for d in docs {
            let next = doc_ids.len();
            doc_ids.entry(d.as_str()).or_insert(next);
        }
    }
    let mut per_doc: Vec<Vec<usize>> = vec![Vec::new(); doc_ids.len()];
    let mut keyword_docs: Vec<Vec<usize>> = Vec::with_capacity(k);
    for (i, docs) in index.postings.iter().enumerate() {
        let ds: Vec<usize> = docs.iter().map(|d| doc_ids[d.as_str()]).collect();
        for &d in &ds {
            per_doc[d].push(i);
        }
        keyword_docs.push(ds);
    }
    let rows: Vec<Vec<(usize, usize, u64)>> = (0..k)
        .into_par_iter()
        .map_init(
            || (vec![0u64; k], Vec::new()),
            |(counts, touched), i| {
                for &d in &keyword_docs[i] {
                    for &j in &per_doc[d] {
                        if j > i {
                            if counts[j] == 0 {
                                touched.push(j);
                            }
                            counts[j] += 1;
                        }
                    }
                }
                touched.sort_unstable();
                let row = touched.iter().map(|&j| (i, j, counts[j])).collect();
                for &j in touched.iter() {
                    counts[j] = 0;
                }
                touched.clear();
                row
            },
        )
        .collect();
    Ok(CooccurrenceMatrix {
        keys: index.keywords.iter().map(|k| k.key()).collect(),
        doc_freq: index.keywords.iter().map(|k| k.doc_freq).collect(),
        entries: rows.into_iter().flatten().collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FilterParams {
    /// Vertices with more distinct neighbors than this are dropped.
    pub k_max: usize,
    /// Minimal edge weight.
    pub theta_w: u64,
    pub f_min: usize,
    pub f_max: usize,
}

impl Default for FilterParams {
    fn default() -> Self {
        Self {
            k_max: 1200,
            theta_w: 100,
            f_min: 50,
            f_max: 10_000,
        }
    }
}

impl FilterParams {
    /// Thresholds for a corpus of `documents` abstracts: the default edge and
    /// frequency floors scaled linearly from 200,000 documents (with floors of
    /// 2 and 3), the frequency ceiling set to half the corpus, `k_max` kept.
    pub fn scaled(documents: usize) -> Self {
        let d = Self::default();
        let scale = documents as f64 / 200_000.0;
        let f_min = ((d.f_min as f64 * scale).round() as usize).max(3);
        Self {
            k_max: d.k_max,
            theta_w: ((d.theta_w as f64 * scale).round() as u64).max(2),
            f_min,
            f_max: (documents / 2).max(f_min),
        }
    }

    pub fn validate(&self) -> Result<(), SemanticError> {
        if self.k_max == 0 || self.theta_w == 0 || self.f_min == 0 || self.f_max == 0 {
            return Err(SemanticError::InvalidParams("all parameters must be positive".into()));
        }
        if self.f_min > self.f_max {
            return Err(SemanticError::InvalidParams(format!(
                "f_min {} exceeds f_max {}",
                self.f_min, self.f_max
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilteredNetwork {
    pub graph: Graph,
    /// Set when no vertex survives the filter.
    pub empty: bool,
    pub removed_by_frequency: usize,
    pub removed_by_degree: usize,
    pub removed_isolated: usize,
}

/// Filter the co-occurrence network: keep keywords whose document frequency
/// lies in `[f_min, f_max]`, then edges of weight at least `theta_w`, then
/// drop vertices with more than `k_max` remaining neighbors, then isolated
/// vertices. Node ids are keyword keys, labels their surface forms.
pub fn filter_network(
    matrix: &CooccurrenceMatrix,
    index: &KeywordIndex,
    params: &FilterParams,
) -> Result<FilteredNetwork, SemanticError> {
    params.validate()?;
    if matrix.len() != index.len() {
        return Err(SemanticError::Mismatch);
    }
    let n = matrix.len();
    let in_window: Vec<bool> = matrix
        .doc_freq
        .iter()
        .map(|&f| (params.f_min..=params.f_max).contains(&f))
        .collect();
    let edges: Vec<&(usize, usize, u64)> = matrix
        .entries
        .iter()
        .filter(|&&(i, j, w)| in_window[i] && in_window[j] && w >= params.theta_w)
        .collect();
    let mut degree = vec![0usize; n];
    for &&(i, j, _) in &edges {
        degree[i] += 1;
        degree[j] += 1;
    }
    let hub: Vec<bool> = degree.iter().map(|&d| d > params.k_max).collect();
    let kept_edges: Vec<&(usize, usize, u64)> = edges.into_iter().filter(|&&(i, j, _)| !hub[i] && !hub[j]).collect();
    let mut connected = vec![false; n];
    for &&(i, j, _) in &kept_edges {
        connected[i] = true;
        connected[j] = true;
    }

    let mut graph = Graph::undirected();
    for i in (0..n).filter(|&i| connected[i]) {
        let k = &index.keywords[i];
        let id = &matrix.keys[i];
        graph.set_label(id, &k.surface);
        graph.set_attribute(id, "doc_freq", &k.doc_freq.to_string());
        graph.set_attribute(id, "score", &k.score.to_string());
        graph.set_attribute(id, "lang", &k.language);
    }
    for &&(i, j, w) in &kept_edges {
        graph
            .add_edge(&matrix.keys[i], &matrix.keys[j], w as f64)
            .expect("distinct keywords, positive weight");
    }
    let window_count = in_window.iter().filter(|&&b| b).count();
    let hubs = (0..n).filter(|&i| in_window[i] && hub[i]).count();
    Ok(FilteredNetwork {
        empty: graph.node_count() == 0,
        removed_by_frequency: n - window_count,
        removed_by_degree: hubs,
        removed_isolated: window_count - hubs - graph.node_count(),
        graph,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SemanticCommunity {
    pub id: usize,
    pub size: usize,
    /// Keys of the best-scored members, best first.
    pub top_keywords: Vec<String>,
    /// Surface forms of `top_keywords`.
    pub top_surfaces: Vec<String>,
    pub noise: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SemanticCommunities {
    pub result: CommunityResult,
    pub communities: Vec<SemanticCommunity>,
}

/// Louvain on the filtered network plus a per-community keyword digest.
/// Communities with fewer than `noise_floor` keywords are flagged as noise.
pub fn semantic_communities(
    graph: &Graph,
    index: &KeywordIndex,
    seed: u64,
    noise_floor: usize,
) -> Result<SemanticCommunities, SemanticError> {
    if graph.node_count() == 0 {
        return Err(SemanticError::EmptyGraph);
    }
    let result = louvain(graph, seed)?;
    let by_key: BTreeMap<String, usize> = index.keywords.iter().enumerate().map(|(i, k)| (k.key(), i)).collect();
    let communities = (0..result.partition.num_communities())
        .map(|c| {
            let mut members: Vec<usize> = result
                .partition
                .members(c)
                .into_iter()
                .filter_map(|key| by_key.get(key).copied())
                .collect();
            members.sort_by(|&a, &b| {
                let (ka, kb) = (&index.keywords[a], &index.keywords[b]);
                kb.score
                    .total_cmp(&ka.score)
                    .then_with(|| kb.doc_freq.cmp(&ka.doc_freq))
                    .then_with(|| ka.stems.cmp(&kb.stems))
            });
            members.truncate(TOP_KEYWORDS);
            let size = result.community_sizes[c];
            SemanticCommunity {
                id: c,
                size,
                top_keywords: members.iter().map(|&i| index.keywords[i].key()).collect(),
                top_surfaces: members.iter().map(|&i| index.keywords[i].surface.clone()).collect(),
                noise: size < noise_floor,
            }
        })
        .collect();
    Ok(SemanticCommunities { result, communities })
}
