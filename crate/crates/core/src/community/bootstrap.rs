//! Significance of a partition against randomized link structures.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{dense, Adjacency, CommunityError};
use crate::graph::{Graph, Partition};

const MAX_DRAWS_PER_EDGE: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RewireMode {
    /// Every edge gets two fresh uniformly drawn endpoints.
    #[default]
    Uniform,
    /// Double-edge swaps keep every node's degree.
    DegreePreserving,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapResult {
    pub sample_modularities: Vec<f64>,
    pub mean: f64,
    /// Unbiased standard deviation; 0 for a single sample.
    pub std: f64,
    pub num_samples: usize,
    pub mode: RewireMode,
}

/// Evaluate the fixed `partition` on `num_samples` rewired copies of `graph`.
///
/// Sample `k` uses the seed `seed + k`, so results do not depend on how the
/// samples are scheduled across threads.
pub fn bootstrap_significance(
    graph: &Graph,
    partition: &Partition,
    num_samples: usize,
    seed: u64,
    mode: RewireMode,
) -> Result<BootstrapResult, CommunityError> {
    if num_samples == 0 {
        return Err(CommunityError::NoSamples);
    }
    if graph.edge_count() == 0 {
        return Err(CommunityError::Edgeless);
    }
    let undirected = graph.to_undirected();
    let labels = dense(&partition.labels_for(&undirected)?);
    let samples = (0..num_samples as u64)
        .into_par_iter()
        .map(|k| {
            let rewired = rewire(&undirected, seed.wrapping_add(k), mode)?;
            Ok(Adjacency::from_graph(&rewired).modularity(&labels))
        })
        .collect::<Result<Vec<f64>, CommunityError>>()?;
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let std = if samples.len() > 1 {
        (samples.iter().map(|q| (q - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    Ok(BootstrapResult {
        sample_modularities: samples,
        mean,
        std,
        num_samples,
        mode,
    })
}

/// A randomized copy of an undirected graph with the same nodes, edge count
/// and multiset of weights; no self-loops, no parallel edges.
pub fn rewire(graph: &Graph, seed: u64, mode: RewireMode) -> Result<Graph, CommunityError> {
    let graph = graph.to_undirected();
    let n = graph.node_count();
    let edges: Vec<(usize, usize, f64)> = graph.edge_indices().collect();
    let capacity = n.saturating_mul(n.saturating_sub(1)) / 2;
    let too_dense = || CommunityError::TooDense {
        nodes: n,
        edges: edges.len(),
    };
    if edges.len() > capacity {
        return Err(too_dense());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let key = |a: usize, b: usize| if a < b { (a, b) } else { (b, a) };
    let new_edges: Vec<(usize, usize, f64)> = match mode {
        RewireMode::Uniform => {
            let mut taken = HashSet::with_capacity(edges.len());
            let mut out = Vec::with_capacity(edges.len());
            for &(_, _, w) in &edges {
                let mut draws = 0;
                loop {
                    draws += 1;
                    if draws > MAX_DRAWS_PER_EDGE {
                        return Err(too_dense());
                    }
                    let a = rng.random_range(0..n);
                    let b = rng.random_range(0..n);
                    if a != b && taken.insert(key(a, b)) {
                        out.push((a, b, w));
                        break;
                    }
                }
            }
            out
        }
        RewireMode::DegreePreserving => {
            let mut out = edges.clone();
            out.shuffle(&mut rng);
            let mut taken: HashSet<(usize, usize)> = out.iter().map(|&(a, b, _)| key(a, b)).collect();
            let m = out.len();
            if m >= 2 {
                for _ in 0..10 * m {
                    let i = rng.random_range(0..m);
                    let j = rng.random_range(0..m);
                    if i == j {
                        continue;
                    }
                    let (a, b, wi) = out[i];
                    let (c, d, wj) = out[j];
                    let (x, y) = if rng.random_bool(0.5) { ((a, d), (c, b)) } else { ((a, c), (b, d)) };
                    if x.0 == x.1 || y.0 == y.1 {
                        continue;
                    }
                    let (kx, ky) = (key(x.0, x.1), key(y.0, y.1));
                    if kx == ky || taken.contains(&kx) || taken.contains(&ky) {
                        continue;
                    }
                    taken.remove(&key(a, b));
                    taken.remove(&key(c, d));
                    taken.insert(kx);
                    taken.insert(ky);
                    out[i] = (x.0, x.1, wi);
                    out[j] = (y.0, y.1, wj);
                }
            }
            out
        }
    };
    let mut g = Graph::undirected();
    for id in graph.node_ids() {
        g.add_node(id);
    }
    for (a, b, w) in new_edges {
        g.add_edge_indices(a, b, w);
    }
    Ok(g)
}
