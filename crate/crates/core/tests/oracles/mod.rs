//! Brute-force reference computations, written independently of the library.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

/// Modularity by the double sum over node pairs on the symmetric adjacency
/// matrix built from an undirected weighted edge list.
pub fn modularity_direct(n: usize, edges: &[(usize, usize, f64)], labels: &[usize]) -> f64 {
    let mut a = vec![vec![0.0; n]; n];
    for &(i, j, w) in edges {
        a[i][j] += w;
        a[j][i] += w;
    }
    let k: Vec<f64> = a.iter().map(|row| row.iter().sum()).collect();
    let two_m: f64 = k.iter().sum();
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if labels[i] == labels[j] {
                q += a[i][j] - k[i] * k[j] / two_m;
            }
        }
    }
    q / two_m
}

/// Every set partition of `n` items as a restricted growth string.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn grow(prefix: &mut Vec<usize>, max: usize, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for c in 0..=max + 1 {
            prefix.push(c);
            grow(prefix, max.max(c), n, out);
            prefix.pop();
        }
    }
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    let mut prefix = vec![0];
    grow(&mut prefix, 0, n, &mut out);
    out
}

/// Highest modularity over all partitions.
pub fn best_modularity(n: usize, edges: &[(usize, usize, f64)]) -> f64 {
    set_partitions(n)
        .iter()
        .map(|p| modularity_direct(n, edges, p))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Maximal cliques of size >= `min_size` by checking every vertex subset.
/// Each clique is sorted; the list is sorted by size (descending) then
/// lexicographically.
pub fn maximal_cliques_brute(adj: &[Vec<bool>], min_size: usize) -> Vec<Vec<usize>> {
    let n = adj.len();
    let is_clique = |mask: u32| {
        (0..n).all(|i| mask & (1 << i) == 0 || (i + 1..n).all(|j| mask & (1 << j) == 0 || adj[i][j]))
    };
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        if mask.count_ones() as usize >= min_size
            && is_clique(mask)
            && (0..n).all(|v| mask & (1 << v) != 0 || !is_clique(mask | (1 << v)))
        {
            out.push((0..n).filter(|&i| mask & (1 << i) != 0).collect::<Vec<_>>());
        }
    }
    out.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    out
}

fn choose2(x: u64) -> f64 {
    (x * x.saturating_sub(1)) as f64 / 2.0
}

/// Adjusted Rand index from the contingency table.
pub fn ari(a: &[usize], b: &[usize]) -> f64 {
    let mut table: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    let mut rows: BTreeMap<usize, u64> = BTreeMap::new();
    let mut cols: BTreeMap<usize, u64> = BTreeMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *table.entry((x, y)).or_default() += 1;
        *rows.entry(x).or_default() += 1;
        *cols.entry(y).or_default() += 1;
    }
    let index: f64 = table.values().map(|&v| choose2(v)).sum();
    let sa: f64 = rows.values().map(|&v| choose2(v)).sum();
    let sb: f64 = cols.values().map(|&v| choose2(v)).sum();
    let expected = sa * sb / choose2(a.len() as u64);
    let max = (sa + sb) / 2.0;
    if max == expected {
        return 1.0;
    }
    (index - expected) / (max - expected)
}

/// Pearson correlation from raw sums.
pub fn pearson_closed(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let sx: f64 = x.iter().sum();
    let sy: f64 = y.iter().sum();
    let sxx: f64 = x.iter().map(|v| v * v).sum();
    let syy: f64 = y.iter().map(|v| v * v).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    (n * sxy - sx * sy) / ((n * sxx - sx * sx).sqrt() * (n * syy - sy * sy).sqrt())
}

/// Relevance of every term with document frequency >= `min_freq`:
/// `ln(1 + f_t) * sum over other kept terms u of (c(t, u) / f_t - f_u / D)^2`.
pub fn keyword_scores(docs: &[BTreeSet<String>], min_freq: usize) -> BTreeMap<String, f64> {
    let d = docs.len() as f64;
    let all: BTreeSet<&String> = docs.iter().flatten().collect();
    let f = |t: &str| docs.iter().filter(|s| s.contains(t)).count();
    let kept: Vec<&String> = all.into_iter().filter(|t| f(t) >= min_freq).collect();
    kept.iter()
        .map(|t| {
            let ft = f(t) as f64;
            let dev: f64 = kept
                .iter()
                .filter(|u| u != &t)
                .map(|u| {
                    let c = docs.iter().filter(|s| s.contains(t.as_str()) && s.contains(u.as_str())).count() as f64;
                    (c / ft - f(u) as f64 / d).powi(2)
                })
                .sum();
            (t.to_string(), (1.0 + ft).ln() * dev)
        })
        .collect()
}

/// Indices of points not dominated by any other (maximize the first two
/// coordinates, minimize the third).
pub fn pareto_pairwise(points: &[(f64, f64, f64)]) -> Vec<usize> {
    let dominates = |a: &(f64, f64, f64), b: &(f64, f64, f64)| {
        a.0 >= b.0 && a.1 >= b.1 && a.2 <= b.2 && (a.0 > b.0 || a.1 > b.1 || a.2 < b.2)
    };
    (0..points.len())
        .filter(|&i| !(0..points.len()).any(|j| j != i && dominates(&points[j], &points[i])))
        .collect()
}

/// Continuous piecewise power law over ranks `1..=n`: exponent `alphas[s]`
/// from rank `starts[s]` (1-based, `starts[0] == 1`), value `y1` at rank 1.
pub fn piecewise_power_law(n: usize, starts: &[usize], alphas: &[f64], y1: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n);
    let mut log_y = y1.ln();
    let mut seg = 0;
    for r in 1..=n {
        if r > 1 {
            while seg + 1 < starts.len() && r >= starts[seg + 1] {
                seg += 1;
            }
            log_y -= alphas[seg] * ((r as f64).ln() - ((r - 1) as f64).ln());
        }
        out.push(log_y.exp());
    }
    out
}
