//! Two-phase Louvain optimization (local moves, then aggregation), resolution 1.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{evaluate_modularity, Adjacency, CommunityError, CommunityResult};
use crate::graph::{Graph, Partition};
use crate::RNG_ALGORITHM;

// Gains closer than this are ties.
const EPS: f64 = 1e-12;
const MAX_PASSES: usize = 1_000;

/// Louvain community detection, deterministic for a fixed seed.
///
/// Node visit order is shuffled once per level by a seeded ChaCha8 stream;
/// a node moves only on a strictly positive gain, and equal best gains go to
/// the smallest community id.
pub fn louvain(graph: &Graph, seed: u64) -> Result<CommunityResult, CommunityError> {
    if graph.edge_count() == 0 {
        return Err(CommunityError::Edgeless);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut adj = Adjacency::from_graph(graph);
    // community of every original node, in terms of the current level's nodes
    let mut membership: Vec<usize> = (0..adj.len()).collect();
    let mut levels = Vec::new();

    loop {
        let (labels, moved) = local_moves(&adj, &mut rng);
        let (labels, count) = renumber(&labels);
        for m in membership.iter_mut() {
            *m = labels[*m];
        }
        levels.push(adj.modularity(&labels));
        if !moved || count == adj.len() {
            break;
        }
        adj = aggregate(&adj, &labels, count);
    }

    let partition = Partition::from_graph_labels(graph, &membership);
    let modularity = evaluate_modularity(graph, &partition)?;
    Ok(CommunityResult {
        community_sizes: partition.sizes(),
        partition,
        modularity,
        seed,
        rng: RNG_ALGORITHM.to_string(),
        level_modularities: levels,
    })
}

fn local_moves(adj: &Adjacency, rng: &mut ChaCha8Rng) -> (Vec<usize>, bool) {
    let n = adj.len();
    let two_m = 2.0 * adj.total;
    let mut comm: Vec<usize> = (0..n).collect();
    let mut tot: Vec<f64> = adj.strength.clone();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);

    // scratch: weight from the current node to each community
    let mut weight_to = vec![0.0; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut moved_any = false;

    for _ in 0..MAX_PASSES {
        let mut moved = false;
        for &i in &order {
            let ki = adj.strength[i];
            let old = comm[i];
            for &(j, w) in &adj.neighbors[i] {
                let c = comm[j];
                if weight_to[c] == 0.0 {
                    touched.push(c);
                }
                weight_to[c] += w;
            }
            tot[old] -= ki;
            let gain = |c: usize, w: f64| w - tot[c] * ki / two_m;
            let stay = gain(old, weight_to[old]);
            let mut best = old;
            let mut best_gain = stay;
            touched.sort_unstable();
            for &c in &touched {
                if c == old {
                    continue;
                }
                let g = gain(c, weight_to[c]);
                if g > best_gain + EPS || (best != old && (g - best_gain).abs() <= EPS && c < best) {
                    best = c;
                    best_gain = g;
                }
            }
            tot[best] += ki;
            if best != old {
                comm[i] = best;
                moved = true;
            }
            for &c in &touched {
                weight_to[c] = 0.0;
            }
            touched.clear();
        }
        if !moved {
            break;
        }
        moved_any = true;
    }
    (comm, moved_any)
}

/// Dense relabeling in order of first appearance.
fn renumber(labels: &[usize]) -> (Vec<usize>, usize) {
    let mut map = vec![usize::MAX; labels.len()];
    let mut next = 0;
    let out = labels
        .iter()
        .map(|&l| {
            if map[l] == usize::MAX {
                map[l] = next;
                next += 1;
            }
            map[l]
        })
        .collect();
    (out, next)
}

fn aggregate(adj: &Adjacency, labels: &[usize], count: usize) -> Adjacency {
    let mut maps: Vec<std::collections::BTreeMap<usize, f64>> = vec![Default::default(); count];
    let mut loops = vec![0.0; count];
    for i in 0..adj.len() {
        let ci = labels[i];
        loops[ci] += adj.loops[i];
        for &(j, w) in &adj.neighbors[i] {
            let cj = labels[j];
            if ci == cj {
                // each internal edge is seen from both endpoints
                loops[ci] += w / 2.0;
            } else {
                *maps[ci].entry(cj).or_insert(0.0) += w;
            }
        }
    }
    let neighbors: Vec<Vec<(usize, f64)>> = maps.into_iter().map(|m| m.into_iter().collect()).collect();
    let strength = neighbors
        .iter()
        .zip(&loops)
        .map(|(ns, &l)| ns.iter().map(|&(_, w)| w).sum::<f64>() + 2.0 * l)
        .collect();
    Adjacency {
        neighbors,
        loops,
        strength,
        total: adj.total,
    }
}
