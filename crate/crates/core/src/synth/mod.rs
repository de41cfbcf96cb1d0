//! Seeded generators for synthetic graphs and corpora with known ground truth.

mod corpus;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;

pub use corpus::{
    mini_corpus, synthetic_abstracts, MiniCorpus, MiniCorpusConfig, MiniManifest, TOPIC_VOCABULARIES,
};

fn node(i: usize) -> String {
    format!("n{i:04}")
}

/// G(n, p) with unit weights; node ids `n0000`, `n0001`, ...
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::undirected();
    for i in 0..n {
        g.add_node(&node(i));
    }
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(p) {
                g.add_edge_indices(i, j, 1.0);
            }
        }
    }
    g
}

/// G(n, m): exactly `m` distinct unit-weight edges drawn uniformly.
pub fn random_graph_with_edges(n: usize, m: usize, seed: u64) -> Graph {
    assert!(m <= n * n.saturating_sub(1) / 2, "too many edges requested");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::undirected();
    for i in 0..n {
        g.add_node(&node(i));
    }
    while g.edge_count() < m {
        let a = rng.random_range(0..n);
        let b = rng.random_range(0..n);
        if a != b && g.edge_weight(&node(a), &node(b)).is_none() {
            g.add_edge_indices(a, b, 1.0);
        }
    }
    g
}

/// Stochastic block model with equal blocks. Returns the graph and the planted
/// block of every node index.
pub fn planted_partition(
    blocks: usize,
    block_size: usize,
    p_in: f64,
    p_out: f64,
    seed: u64,
) -> (Graph, Vec<usize>) {
    let n = blocks * block_size;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::undirected();
    let truth: Vec<usize> = (0..n).map(|i| i / block_size).collect();
    for i in 0..n {
        g.add_node(&node(i));
    }
    for i in 0..n {
        for j in i + 1..n {
            let p = if truth[i] == truth[j] { p_in } else { p_out };
            if rng.random_bool(p) {
                g.add_edge_indices(i, j, 1.0);
            }
        }
    }
    (g, truth)
}
