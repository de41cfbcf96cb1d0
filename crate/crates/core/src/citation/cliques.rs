//! Maximal clique enumeration on the undirected view of a graph.

use rayon::prelude::*;

use crate::graph::Graph;

/// All maximal cliques with at least `min_size` nodes. Ids are sorted inside
/// each clique; cliques are ordered by size descending, then lexicographically.
pub fn maximal_cliques(graph: &Graph, min_size: usize) -> Vec<Vec<String>> {
    let n = graph.node_count();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            let mut ns: Vec<usize> = graph
                .successors(i)
                .chain(graph.predecessors(i))
                .map(|(j, _)| j)
                .filter(|&j| j != i)
                .collect();
            ns.sort_unstable();
            ns.dedup();
            ns
        })
        .collect();
    let order = degeneracy_order(&adj);
    let mut position = vec![0; n];
    for (p, &v) in order.iter().enumerate() {
        position[v] = p;
    }

    let mut cliques: Vec<Vec<String>> = order
        .par_iter()
        .flat_map_iter(|&v| {
            let (mut p, mut x) = (Vec::new(), Vec::new());
            for &u in &adj[v] {
                if position[u] > position[v] {
                    p.push(u);
                } else {
                    x.push(u);
                }
            }
            let mut found = Vec::new();
            let mut r = vec![v];
            expand(&adj, &mut r, p, x, min_size, &mut found);
            found
        })
        .map(|c| {
            let mut ids: Vec<String> = c.into_iter().map(|i| graph.node_id(i).to_string()).collect();
            ids.sort();
            ids
        })
        .collect();
    cliques.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    cliques
}

/// Pivoting Bron–Kerbosch. `p` and `x` are sorted.
fn expand(
    adj: &[Vec<usize>],
    r: &mut Vec<usize>,
    p: Vec<usize>,
    mut x: Vec<usize>,
    min_size: usize,
    out: &mut Vec<Vec<usize>>,
) {
    if p.is_empty() {
        if x.is_empty() && r.len() >= min_size {
            out.push(r.clone());
        }
        return;
    }
    if r.len() + p.len() < min_size {
        return;
    }
    let pivot = p
        .iter()
        .chain(&x)
        .copied()
        .max_by_key(|&u| (intersection_len(&p, &adj[u]), std::cmp::Reverse(u)))
        .expect("p is nonempty");
    let branch: Vec<usize> = difference(&p, &adj[pivot]);
    let mut p = p;
    for v in branch {
        r.push(v);
        expand(adj, r, intersect(&p, &adj[v]), intersect(&x, &adj[v]), min_size, out);
        r.pop();
        p.retain(|&u| u != v);
        let at = x.binary_search(&v).unwrap_err();
        x.insert(at, v);
    }
}

fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j, mut out) = (0, 0, Vec::new());
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn intersection_len(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

fn difference(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().copied().filter(|u| b.binary_search(u).is_err()).collect()
}

/// Repeatedly remove a minimum-degree vertex (bucket queue).
fn degeneracy_order(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let max_deg = degree.iter().copied().max().unwrap_or(0);
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); max_deg + 1];
    for v in (0..n).rev() {
        buckets[degree[v]].push(v);
    }
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut d = 0;
    while order.len() < n {
        d = d.min(max_deg);
        while buckets[d].is_empty() {
            d += 1;
        }
        let v = buckets[d].pop().expect("bucket nonempty");
        if removed[v] || degree[v] != d {
            continue;
        }
        removed[v] = true;
        order.push(v);
        for &u in &adj[v] {
            if !removed[u] {
                degree[u] -= 1;
                buckets[degree[u]].push(u);
            }
        }
        d = d.saturating_sub(1);
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::erdos_renyi;
    use proptest::prelude::*;

    fn graph(edges: &[(&str, &str)]) -> Graph {
        let mut g = Graph::undirected();
        for (u, v) in edges {
            g.add_edge(u, v, 1.0).unwrap();
        }
        g
    }

    fn ids(cliques: &[&[&str]]) -> Vec<Vec<String>> {
        cliques
            .iter()
            .map(|c| c.iter().map(|s| s.to_string()).collect())
            .collect()
    }

    #[test]
    fn k4() {
        let g = graph(&[("a", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"), ("c", "d")]);
        assert_eq!(maximal_cliques(&g, 3), ids(&[&["a", "b", "c", "d"]]));
    }

    #[test]
    fn path() {
        let g = graph(&[("a", "b"), ("b", "c")]);
        assert_eq!(maximal_cliques(&g, 2), ids(&[&["a", "b"], &["b", "c"]]));
    }

    #[test]
    fn direction_is_ignored() {
        let mut g = Graph::directed();
        for (u, v) in [("a", "b"), ("b", "c"), ("c", "a"), ("a", "c")] {
            g.add_edge(u, v, 1.0).unwrap();
        }
        g.add_node("z");
        assert_eq!(maximal_cliques(&g, 1), ids(&[&["a", "b", "c"], &["z"]]));
    }

    fn brute_force(g: &Graph, min_size: usize) -> Vec<Vec<String>> {
        let n = g.node_count();
        let u = g.to_undirected();
        let adj = |a: usize, b: usize| u.edge_weight(u.node_id(a), u.node_id(b)).is_some();
        let is_clique = |m: u32| {
            (0..n).all(|a| (0..n).all(|b| a == b || m >> a & 1 == 0 || m >> b & 1 == 0 || adj(a, b)))
        };
        let mut out = Vec::new();
        for m in 1u32..(1 << n) {
            if (m.count_ones() as usize) < min_size || !is_clique(m) {
                continue;
            }
            if (0..n).any(|v| m >> v & 1 == 0 && is_clique(m | 1 << v)) {
                continue;
            }
            let mut c: Vec<String> = (0..n).filter(|&v| m >> v & 1 == 1).map(|v| g.node_id(v).to_string()).collect();
            c.sort();
            out.push(c);
        }
        out.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        out
    }

    proptest! {
        #[test]
        fn matches_subset_enumeration(n in 1usize..=10, p in 0.0f64..1.0, seed in any::<u64>(), min in 1usize..4) {
            let g = erdos_renyi(n, p, seed);
            prop_assert_eq!(maximal_cliques(&g, min), brute_force(&g, min));
        }
    }
}
