//! Sensitivity of the semantic network to its filter parameters.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::community::louvain;
use crate::keywords::KeywordIndex;
use crate::semantic::{filter_network, CooccurrenceMatrix, FilterParams};

#[derive(Debug, Error, PartialEq)]
pub enum SweepError {
    #[error("sweep grid list {0} is empty")]
    EmptyList(&'static str),
    #[error("sweep grid list {0} contains a non-positive value")]
    NonPositive(&'static str),
    #[error("no sweep point has a defined modularity")]
    NoValidPoints,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepGrid {
    #[serde(alias = "kmax")]
    pub k_max: Vec<usize>,
    #[serde(alias = "theta")]
    pub theta_w: Vec<u64>,
    #[serde(alias = "fmin")]
    pub f_min: Vec<usize>,
    #[serde(alias = "fmax")]
    pub f_max: Vec<usize>,
    #[serde(default)]
    pub seed: u64,
}

impl SweepGrid {
    pub fn validate(&self) -> Result<(), SweepError> {
        fn check<T: Copy + Default + PartialOrd>(name: &'static str, v: &[T]) -> Result<(), SweepError> {
            if v.is_empty() {
                return Err(SweepError::EmptyList(name));
            }
            if v.iter().any(|&x| x <= T::default()) {
                return Err(SweepError::NonPositive(name));
            }
            Ok(())
        }
        check("k_max", &self.k_max)?;
        check("theta_w", &self.theta_w)?;
        check("f_min", &self.f_min)?;
        check("f_max", &self.f_max)
    }

    /// Cartesian product in grid order (`k_max` outermost, `f_max` innermost).
    pub fn combinations(&self) -> Vec<FilterParams> {
        let mut out = Vec::new();
        for &k_max in &self.k_max {
            for &theta_w in &self.theta_w {
                for &f_min in &self.f_min {
                    for &f_max in &self.f_max {
                        out.push(FilterParams {
                            k_max,
                            theta_w,
                            f_min,
                            f_max,
                        });
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub params: FilterParams,
    /// Position in the full Cartesian product; the Louvain seed is `seed + index`.
    pub index: usize,
    pub num_vertices: usize,
    pub num_edges: usize,
    pub num_communities: usize,
    /// Absent for empty networks.
    pub modularity: Option<f64>,
    /// `sum s_k^2 / (sum s_k)^2` over community sizes; absent for empty networks.
    pub concentration: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepOutcome {
    pub points: Vec<SweepPoint>,
    /// Combinations with `f_min > f_max`, not evaluated.
    pub skipped: Vec<FilterParams>,
}

pub fn concentration(sizes: &[usize]) -> Option<f64> {
    let total: usize = sizes.iter().sum();
    (total > 0).then(|| {
        let sq: f64 = sizes.iter().map(|&s| (s as f64).powi(2)).sum();
        sq / (total as f64).powi(2)
    })
}

/// Evaluate every valid grid combination. Points come back in grid order
/// regardless of scheduling.
pub fn run_sweep(
    matrix: &CooccurrenceMatrix,
    index: &KeywordIndex,
    grid: &SweepGrid,
) -> Result<SweepOutcome, SweepError> {
    grid.validate()?;
    let combos = grid.combinations();
    let (valid, skipped): (Vec<_>, Vec<_>) = combos
        .into_iter()
        .enumerate()
        .partition(|(_, p)| p.f_min <= p.f_max);
    let points = valid
        .into_par_iter()
        .map(|(i, params)| evaluate(matrix, index, params, i, grid.seed.wrapping_add(i as u64)))
        .collect();
    Ok(SweepOutcome {
        points,
        skipped: skipped.into_iter().map(|(_, p)| p).collect(),
    })
}

fn evaluate(matrix: &CooccurrenceMatrix, index: &KeywordIndex, params: FilterParams, i: usize, seed: u64) -> SweepPoint {
    let mut point = SweepPoint {
        params,
        index: i,
        num_vertices: 0,
        num_edges: 0,
        num_communities: 0,
        modularity: None,
        concentration: None,
        error: None,
    };
    let net = match filter_network(matrix, index, &params) {
        Ok(n) => n,
        Err(e) => {
            point.error = Some(e.to_string());
            return point;
        }
    };
    point.num_vertices = net.graph.node_count();
    point.num_edges = net.graph.edge_count();
    if net.empty {
        return point;
    }
    match louvain(&net.graph, seed) {
        Ok(r) => {
            point.num_communities = r.num_communities();
            point.concentration = concentration(&r.community_sizes);
            point.modularity = Some(r.modularity);
        }
        Err(e) => point.error = Some(e.to_string()),
    }
    point
}

/// `a` dominates `b`: no worse on modularity, vertices and concentration,
/// strictly better on at least one.
pub fn dominates(a: &SweepPoint, b: &SweepPoint) -> bool {
    let (Some(qa), Some(qb), Some(ca), Some(cb)) = (a.modularity, b.modularity, a.concentration, b.concentration) else {
        return false;
    };
    let no_worse = qa >= qb && a.num_vertices >= b.num_vertices && ca <= cb;
    let better = qa > qb || a.num_vertices > b.num_vertices || ca < cb;
    no_worse && better
}

/// Non-dominated points among those with a defined modularity, in input order.
pub fn pareto_front(points: &[SweepPoint]) -> Result<Vec<SweepPoint>, SweepError> {
    let mut order: Vec<usize> = (0..points.len())
        .filter(|&i| points[i].modularity.is_some() && points[i].concentration.is_some())
        .collect();
    if order.is_empty() {
        return Err(SweepError::NoValidPoints);
    }
    // Only points earlier in this order can dominate later ones, and anything
    // dominated by a dropped point is dominated by a front point.
    order.sort_by(|&a, &b| {
        let (pa, pb) = (&points[a], &points[b]);
        pb.modularity
            .unwrap()
            .total_cmp(&pa.modularity.unwrap())
            .then_with(|| pb.num_vertices.cmp(&pa.num_vertices))
            .then_with(|| pa.concentration.unwrap().total_cmp(&pb.concentration.unwrap()))
    });
    let mut front: Vec<usize> = Vec::new();
    for i in order {
        if !front.iter().any(|&f| dominates(&points[f], &points[i])) {
            front.push(i);
        }
    }
    front.sort_unstable();
    Ok(front.into_iter().map(|i| points[i].clone()).collect())
}

/// Pareto front restricted to points whose community count lies in `band`.
pub fn pareto_front_within(points: &[SweepPoint], band: (usize, usize)) -> Result<Vec<SweepPoint>, SweepError> {
    let feasible: Vec<SweepPoint> = points
        .iter()
        .filter(|p| (band.0..=band.1).contains(&p.num_communities))
        .cloned()
        .collect();
    pareto_front(&feasible)
}

/// CSV `kmax,theta,fmin,fmax,vertices,communities,modularity,concentration,pareto`.
pub fn render_sweep_csv(points: &[SweepPoint], front: &[SweepPoint], header: &[String]) -> String {
    let mut out: String = header.iter().map(|l| format!("# {l}\n")).collect();
    out.push_str("kmax,theta,fmin,fmax,vertices,communities,modularity,concentration,pareto\n");
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for p in points {
        let on_front = front.iter().any(|f| f.index == p.index);
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            p.params.k_max,
            p.params.theta_w,
            p.params.f_min,
            p.params.f_max,
            p.num_vertices,
            p.num_communities,
            opt(p.modularity),
            opt(p.concentration),
            u8::from(on_front)
        ));
    }
    out
}
