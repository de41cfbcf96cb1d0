//! Modularity, Louvain community detection and bootstrap significance.
//!
//! Every routine works on the undirected view of its input: directed graphs
//! are symmetrized with reciprocal weights summed.

mod bootstrap;
mod louvain;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError, Partition};

pub use bootstrap::{bootstrap_significance, rewire, BootstrapResult, RewireMode};
pub use louvain::louvain;

#[derive(Debug, Error)]
pub enum CommunityError {
    #[error("modularity is undefined on a graph without edges")]
    Edgeless,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("cannot rewire {edges} edges among {nodes} nodes without duplicates")]
    TooDense { nodes: usize, edges: usize },
    #[error("num_samples must be positive")]
    NoSamples,
}

/// Outcome of a community detection run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommunityResult {
    #[serde(skip)]
    pub partition: Partition,
    pub modularity: f64,
    pub community_sizes: Vec<usize>,
    pub seed: u64,
    pub rng: String,
    /// Modularity after each aggregation level, non-decreasing.
    pub level_modularities: Vec<f64>,
}

impl CommunityResult {
    pub fn num_communities(&self) -> usize {
        self.community_sizes.len()
    }
}

/// Undirected weighted adjacency in dense form, used by all modularity routines.
#[derive(Debug, Clone)]
pub(crate) struct Adjacency {
    pub neighbors: Vec<Vec<(usize, f64)>>,
    /// Weight of the self-loop on each node (aggregated graphs only).
    pub loops: Vec<f64>,
    /// Weighted degree, loops counted twice.
    pub strength: Vec<f64>,
    /// Sum of all edge weights, each edge once (m).
    pub total: f64,
}

impl Adjacency {
    pub fn from_graph(graph: &Graph) -> Self {
        let g = graph.to_undirected();
        let n = g.node_count();
        let mut neighbors = vec![Vec::new(); n];
        let mut total = 0.0;
        for (u, v, w) in g.edge_indices() {
            neighbors[u].push((v, w));
            neighbors[v].push((u, w));
            total += w;
        }
        let strength = neighbors
            .iter()
            .map(|ns| ns.iter().map(|&(_, w)| w).sum())
            .collect();
        Self {
            neighbors,
            loops: vec![0.0; n],
            strength,
            total,
        }
    }

    pub fn len(&self) -> usize {
        self.neighbors.len()
    }

    /// Q for a labeling given as community index per node.
    pub fn modularity(&self, labels: &[usize]) -> f64 {
        let c = labels.iter().map(|&l| l + 1).max().unwrap_or(0);
        let mut inside = vec![0.0; c];
        let mut tot = vec![0.0; c];
        for i in 0..self.len() {
            let li = labels[i];
            tot[li] += self.strength[i];
            inside[li] += 2.0 * self.loops[i];
            for &(j, w) in &self.neighbors[i] {
                if labels[j] == li {
                    inside[li] += w;
                }
            }
        }
        let two_m = 2.0 * self.total;
        inside
            .iter()
            .zip(&tot)
            .map(|(&a, &t)| a / two_m - (t / two_m) * (t / two_m))
            .sum()
    }
}

/// Newman modularity of `partition` on the (symmetrized) weighted graph.
pub fn evaluate_modularity(graph: &Graph, partition: &Partition) -> Result<f64, CommunityError> {
    if graph.edge_count() == 0 {
        return Err(CommunityError::Edgeless);
    }
    let labels = partition.labels_for(graph)?;
    Ok(Adjacency::from_graph(graph).modularity(&dense(&labels)))
}

fn dense(labels: &[usize]) -> Vec<usize> {
    let mut map = std::collections::HashMap::new();
    labels
        .iter()
        .map(|&l| {
            let next = map.len();
            *map.entry(l).or_insert(next)
        })
        .collect()
}

/// Adjusted Rand index between two labelings of the same items.
///
/// Returns 1.0 when both labelings are identical up to relabeling, including
/// the degenerate cases where the chance-corrected denominator vanishes.
pub fn adjusted_rand_index(a: &[usize], b: &[usize]) -> f64 {
    assert_eq!(a.len(), b.len(), "labelings must cover the same items");
    let n = a.len();
    if n < 2 {
        return 1.0;
    }
    let (a, b) = (dense(a), dense(b));
    let ka = a.iter().max().map_or(0, |m| m + 1);
    let kb = b.iter().max().map_or(0, |m| m + 1);
    let mut table = vec![0u64; ka * kb];
    let mut rows = vec![0u64; ka];
    let mut cols = vec![0u64; kb];
    for (&x, &y) in a.iter().zip(&b) {
        table[x * kb + y] += 1;
        rows[x] += 1;
        cols[y] += 1;
    }
    let pairs = |v: u64| (v * v.saturating_sub(1) / 2) as f64;
    let index: f64 = table.iter().map(|&v| pairs(v)).sum();
    let sum_rows: f64 = rows.iter().map(|&v| pairs(v)).sum();
    let sum_cols: f64 = cols.iter().map(|&v| pairs(v)).sum();
    let expected = sum_rows * sum_cols / pairs(n as u64);
    let max_index = 0.5 * (sum_rows + sum_cols);
    let denom = max_index - expected;
    if denom.abs() < f64::EPSILON {
        return if a == b { 1.0 } else { 0.0 };
    }
    (index - expected) / denom
}
