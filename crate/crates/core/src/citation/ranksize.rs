//! Piecewise power-law fits of the rank-size citation curve.

use serde::{Deserialize, Serialize};

use super::{CitationError, YEAR_ATTRIBUTE};
use crate::graph::Graph;

/// Above this many points, breakpoints are first searched on a log-spaced grid.
const EXHAUSTIVE_LIMIT: usize = 2_000;
const COARSE_CANDIDATES: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Regime {
    /// First rank, 1-based.
    pub rank_start: usize,
    /// Last rank, inclusive.
    pub rank_end: usize,
    /// Positive exponent in `ln y = c - alpha ln r`.
    pub alpha: f64,
    pub intercept: f64,
    pub r2: f64,
    pub mean_year: Option<f64>,
}

impl Regime {
    pub fn len(&self) -> usize {
        self.rank_end + 1 - self.rank_start
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, rank: usize) -> bool {
        (self.rank_start..=self.rank_end).contains(&rank)
    }

    pub fn fitted(&self, rank: usize) -> f64 {
        (self.intercept - self.alpha * (rank as f64).ln()).exp()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedNode {
    pub rank: usize,
    pub id: String,
    pub citations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankSizeFit {
    pub regimes: Vec<Regime>,
    pub ranked: Vec<RankedNode>,
}

impl RankSizeFit {
    pub fn regime_of(&self, rank: usize) -> Option<usize> {
        self.regimes.iter().position(|r| r.contains(rank))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegimeOptions {
    pub num_regimes: usize,
    pub min_points: usize,
}

impl Default for RegimeOptions {
    fn default() -> Self {
        Self {
            num_regimes: 3,
            min_points: 10,
        }
    }
}

/// Rank cited nodes by in-degree (descending, ties by id) and fit
/// `num_regimes` contiguous power-law regimes.
pub fn rank_size_fit(
    graph: &Graph,
    num_regimes: usize,
    min_points: usize,
) -> Result<RankSizeFit, CitationError> {
    let mut cited: Vec<(usize, &str)> = (0..graph.node_count())
        .map(|i| (graph.in_degree_of(i), graph.node_id(i)))
        .filter(|&(d, _)| d >= 1)
        .collect();
    cited.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(b.1)));
    let values: Vec<f64> = cited.iter().map(|&(d, _)| d as f64).collect();
    let mut regimes = fit_regimes(&values, num_regimes, min_points)?;
    for reg in &mut regimes {
        let years: Vec<f64> = cited[reg.rank_start - 1..reg.rank_end]
            .iter()
            .filter_map(|&(_, id)| {
                let i = graph.node_index(id)?;
                graph.node_data(i).attributes.get(YEAR_ATTRIBUTE)?.parse::<f64>().ok()
            })
            .collect();
        reg.mean_year = (!years.is_empty()).then(|| years.iter().sum::<f64>() / years.len() as f64);
    }
    let ranked = cited
        .into_iter()
        .enumerate()
        .map(|(i, (d, id))| RankedNode {
            rank: i + 1,
            id: id.to_string(),
            citations: d,
        })
        .collect();
    Ok(RankSizeFit { regimes, ranked })
}

/// Fit a series already sorted by rank (`values[0]` is rank 1). Values must
/// be positive.
pub fn fit_regimes(
    values: &[f64],
    num_regimes: usize,
    min_points: usize,
) -> Result<Vec<Regime>, CitationError> {
    fit_with_limit(values, num_regimes, min_points, EXHAUSTIVE_LIMIT)
}

fn fit_with_limit(
    values: &[f64],
    num_regimes: usize,
    min_points: usize,
    exhaustive_limit: usize,
) -> Result<Vec<Regime>, CitationError> {
    if num_regimes == 0 || min_points == 0 {
        return Err(CitationError::InvalidParameter(
            "num_regimes and min_points must be positive".into(),
        ));
    }
    if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        return Err(CitationError::InvalidParameter(format!(
            "rank-size values must be positive, found {v}"
        )));
    }
    let n = values.len();
    let required = num_regimes * min_points;
    if n < required {
        return Err(CitationError::InsufficientPoints {
            required,
            available: n,
        });
    }
    let xs: Vec<f64> = (1..=n).map(|r| (r as f64).ln()).collect();
    let ys: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let sums = PrefixSums::new(&xs, &ys);

    let candidates = if n <= exhaustive_limit {
        (0..=n).collect()
    } else {
        log_candidates(n, COARSE_CANDIDATES)
    };
    let mut bounds = segment(&sums, &candidates, num_regimes, min_points)
        .expect("enough points guarantee a segmentation");
    refine(&sums, &mut bounds, min_points);

    Ok(bounds
        .windows(2)
        .map(|w| {
            let (slope, intercept, r2) = ols(&xs[w[0]..w[1]], &ys[w[0]..w[1]]);
            Regime {
                rank_start: w[0] + 1,
                rank_end: w[1],
                alpha: -slope,
                intercept,
                r2,
                mean_year: None,
            }
        })
        .collect())
}

/// Two-pass least squares: (slope, intercept, r2).
fn ols(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let r2 = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };
    (slope, intercept, r2)
}

struct PrefixSums {
    x: Vec<f64>,
    y: Vec<f64>,
    xx: Vec<f64>,
    xy: Vec<f64>,
    yy: Vec<f64>,
}

impl PrefixSums {
    fn new(xs: &[f64], ys: &[f64]) -> Self {
        let scan = |f: &dyn Fn(f64, f64) -> f64| {
            let mut acc = 0.0;
            let mut out = Vec::with_capacity(xs.len() + 1);
            out.push(0.0);
            for (&x, &y) in xs.iter().zip(ys) {
                acc += f(x, y);
                out.push(acc);
            }
            out
        };
        Self {
            x: scan(&|x, _| x),
            y: scan(&|_, y| y),
            xx: scan(&|x, _| x * x),
            xy: scan(&|x, y| x * y),
            yy: scan(&|_, y| y * y),
        }
    }

    /// Residual sum of squares of the OLS line over points `a..b`.
    fn cost(&self, a: usize, b: usize) -> f64 {
        let n = (b - a) as f64;
        let d = |v: &[f64]| v[b] - v[a];
        let (sx, sy) = (d(&self.x), d(&self.y));
        let sxx = d(&self.xx) - sx * sx / n;
        let sxy = d(&self.xy) - sx * sy / n;
        let syy = d(&self.yy) - sy * sy / n;
        let res = if sxx > 1e-12 { syy - sxy * sxy / sxx } else { syy };
        res.max(0.0)
    }
}

fn log_candidates(n: usize, count: usize) -> Vec<usize> {
    let mut c: Vec<usize> = (0..count)
        .map(|i| {
            let t = i as f64 / (count - 1) as f64;
            ((n as f64).powf(t)).round() as usize
        })
        .collect();
    c.push(0);
    c.push(n);
    c.sort_unstable();
    c.dedup();
    c
}

/// Optimal boundaries (including 0 and n) restricted to `candidates`.
fn segment(sums: &PrefixSums, candidates: &[usize], k: usize, min_points: usize) -> Option<Vec<usize>> {
    let m = candidates.len();
    let n = *candidates.last()?;
    let mut cost = vec![vec![f64::INFINITY; m]; k + 1];
    let mut from = vec![vec![usize::MAX; m]; k + 1];
    cost[0][0] = 0.0;
    for seg in 1..=k {
        for j in 1..m {
            let end = candidates[j];
            if end < seg * min_points {
                continue;
            }
            for i in 0..j {
                let start = candidates[i];
                if end - start < min_points {
                    break;
                }
                let prev = cost[seg - 1][i];
                if prev.is_finite() {
                    let c = prev + sums.cost(start, end);
                    if c < cost[seg][j] {
                        cost[seg][j] = c;
                        from[seg][j] = i;
                    }
                }
            }
        }
    }
    if !cost[k][m - 1].is_finite() {
        return None;
    }
    let mut bounds = vec![n];
    let mut j = m - 1;
    for seg in (1..=k).rev() {
        j = from[seg][j];
        bounds.push(candidates[j]);
    }
    bounds.reverse();
    Some(bounds)
}

/// Coordinate descent on each interior boundary over every admissible rank.
fn refine(sums: &PrefixSums, bounds: &mut [usize], min_points: usize) {
    loop {
        let mut improved = false;
        for b in 1..bounds.len() - 1 {
            let (lo, hi) = (bounds[b - 1] + min_points, bounds[b + 1] - min_points);
            let total = |p: usize| sums.cost(bounds[b - 1], p) + sums.cost(p, bounds[b + 1]);
            let mut best = bounds[b];
            let mut best_cost = total(best);
            for p in lo..=hi {
                let c = total(p);
                if c < best_cost - 1e-12 {
                    best = p;
                    best_cost = c;
                }
            }
            if best != bounds[b] {
                bounds[b] = best;
                improved = true;
            }
        }
        if !improved {
            break;
        }
    }
}
