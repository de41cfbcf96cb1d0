//! Interdisciplinarity measures built on the citation and semantic
//! classifications.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::Corpus;
use crate::graph::Partition;
use crate::keywords::KeywordIndex;

/// Points of the density grid over [0, 1].
pub const DENSITY_GRID: usize = 256;
pub const BANDWIDTH_RANGE: (f64, f64) = (0.01, 0.2);

#[derive(Debug, Error, PartialEq)]
pub enum MeasureError {
    #[error("correlation needs at least 2 references with both vectors defined, found {0}")]
    TooFewCommon(usize),
    #[error("the originality table is empty")]
    EmptyTable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Citation,
    Semantic,
}

/// Probability vector over classes per reference; `None` marks a reference
/// without evidence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassProbabilities {
    pub classification: Classification,
    pub num_classes: usize,
    pub vectors: BTreeMap<String, Option<Vec<f64>>>,
}

impl ClassProbabilities {
    pub fn defined(&self) -> impl Iterator<Item = (&str, &[f64])> + '_ {
        self.vectors
            .iter()
            .filter_map(|(id, v)| v.as_deref().map(|v| (id.as_str(), v)))
    }

    pub fn undefined_count(&self) -> usize {
        self.vectors.values().filter(|v| v.is_none()).count()
    }

    pub fn get(&self, id: &str) -> Option<&[f64]> {
        self.vectors.get(id).and_then(|v| v.as_deref())
    }
}

fn normalize(counts: Vec<usize>) -> Option<Vec<f64>> {
    let total: usize = counts.iter().sum();
    (total > 0).then(|| counts.iter().map(|&c| c as f64 / total as f64).collect())
}

/// Share of each semantic class among the distinct classified keywords of
/// every reference. Keywords missing from `keyword_partition` do not count.
pub fn semantic_probabilities(corpus: &Corpus, index: &KeywordIndex, keyword_partition: &Partition) -> ClassProbabilities {
    let c = keyword_partition.num_communities();
    let mut counts: BTreeMap<&str, Vec<usize>> = corpus.references().map(|r| (r.id.as_str(), vec![0; c])).collect();
    for (k, docs) in index.keywords.iter().zip(&index.postings) {
        let Some(class) = keyword_partition.community_of(&k.key()) else {
            continue;
        };
        for d in docs {
            if let Some(v) = counts.get_mut(d.as_str()) {
                v[class] += 1;
            }
        }
    }
    ClassProbabilities {
        classification: Classification::Semantic,
        num_classes: c,
        vectors: counts.into_iter().map(|(id, v)| (id.to_string(), normalize(v))).collect(),
    }
}

/// Share of each citation class among the in-citations of every classified
/// reference. Citations from unclassified references are ignored.
pub fn citation_probabilities(corpus: &Corpus, partition: &Partition) -> ClassProbabilities {
    let c = partition.num_communities();
    let mut counts: BTreeMap<&str, Vec<usize>> = partition.iter().map(|(id, _)| (id, vec![0; c])).collect();
    for l in corpus.links() {
        let Some(class) = partition.community_of(&l.citing_id) else {
            continue;
        };
        if let Some(v) = counts.get_mut(l.cited_id.as_str()) {
            v[class] += 1;
        }
    }
    ClassProbabilities {
        classification: Classification::Citation,
        num_classes: c,
        vectors: counts.into_iter().map(|(id, v)| (id.to_string(), normalize(v))).collect(),
    }
}

/// Indicator vector of each reference's own citation class.
pub fn one_hot_citation(partition: &Partition) -> ClassProbabilities {
    let c = partition.num_communities();
    ClassProbabilities {
        classification: Classification::Citation,
        num_classes: c,
        vectors: partition
            .iter()
            .map(|(id, k)| {
                let mut v = vec![0.0; c];
                v[k] = 1.0;
                (id.to_string(), Some(v))
            })
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OriginalityEntry {
    pub id: String,
    pub value: f64,
    /// Citation class used for stratification, when known.
    pub class: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OriginalityTable {
    pub classification: Classification,
    pub num_classes: usize,
    pub entries: Vec<OriginalityEntry>,
    /// References skipped for lack of evidence.
    pub excluded: usize,
}

impl OriginalityTable {
    /// Attach citation classes; references outside `partition` keep `None`.
    pub fn with_classes(mut self, partition: &Partition) -> Self {
        for e in &mut self.entries {
            e.class = partition.community_of(&e.id);
        }
        self
    }
}

/// `1 - sum p^2` of a probability vector.
pub fn herfindahl_originality(p: &[f64]) -> f64 {
    1.0 - p.iter().map(|x| x * x).sum::<f64>()
}

pub fn originality(probabilities: &ClassProbabilities) -> OriginalityTable {
    OriginalityTable {
        classification: probabilities.classification,
        num_classes: probabilities.num_classes,
        entries: probabilities
            .defined()
            .map(|(id, p)| OriginalityEntry {
                id: id.to_string(),
                value: herfindahl_originality(p),
                class: None,
            })
            .collect(),
        excluded: probabilities.undefined_count(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassDensity {
    pub class: usize,
    pub count: usize,
    pub mean: f64,
    /// Absent for classes with fewer than two members.
    pub bandwidth: Option<f64>,
    pub density: Option<Vec<f64>>,
}

/// The evaluation grid: `DENSITY_GRID` evenly spaced points from 0 to 1.
pub fn density_grid() -> Vec<f64> {
    (0..DENSITY_GRID).map(|i| i as f64 / (DENSITY_GRID - 1) as f64).collect()
}

/// Type-7 (linear interpolation) sample quantile of sorted data.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

fn sample_std(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
}

/// Silverman's rule of thumb, clipped to [`BANDWIDTH_RANGE`]. A zero
/// interquartile range falls back to the standard deviation; a constant
/// sample gets the smallest bandwidth.
pub fn silverman_bandwidth(xs: &[f64]) -> f64 {
    let mut sorted = xs.to_vec();
    sorted.sort_by(f64::total_cmp);
    let sd = sample_std(xs);
    let iqr = quantile(&sorted, 0.75) - quantile(&sorted, 0.25);
    let mut lo = sd.min(iqr / 1.34);
    if lo <= 0.0 {
        lo = sd;
    }
    if lo <= 0.0 {
        return BANDWIDTH_RANGE.0;
    }
    let h = 0.9 * lo * (xs.len() as f64).powf(-0.2);
    h.clamp(BANDWIDTH_RANGE.0, BANDWIDTH_RANGE.1)
}

/// Gaussian kernel density of `xs` on `grid`.
pub fn gaussian_kde(xs: &[f64], bandwidth: f64, grid: &[f64]) -> Vec<f64> {
    let norm = 1.0 / (xs.len() as f64 * bandwidth * (2.0 * std::f64::consts::PI).sqrt());
    grid.iter()
        .map(|&g| {
            norm * xs
                .iter()
                .map(|&x| (-0.5 * ((g - x) / bandwidth).powi(2)).exp())
                .sum::<f64>()
        })
        .collect()
}

/// Per citation class: mean originality and a smoothed density.
/// Entries without a class are ignored.
pub fn originality_distributions(table: &OriginalityTable) -> Result<Vec<ClassDensity>, MeasureError> {
    if table.entries.is_empty() {
        return Err(MeasureError::EmptyTable);
    }
    let mut by_class: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for e in &table.entries {
        if let Some(c) = e.class {
            by_class.entry(c).or_default().push(e.value);
        }
    }
    let grid = density_grid();
    Ok(by_class
        .into_iter()
        .map(|(class, xs)| {
            let mean = xs.iter().sum::<f64>() / xs.len() as f64;
            let (bandwidth, density) = if xs.len() >= 2 {
                let h = silverman_bandwidth(&xs);
                (Some(h), Some(gaussian_kde(&xs, h, &grid)))
            } else {
                (None, None)
            };
            ClassDensity {
                class,
                count: xs.len(),
                mean,
                bandwidth,
                density,
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompositionMatrix {
    /// Citation class to mean semantic vector.
    pub rows: BTreeMap<usize, Vec<f64>>,
    /// Members with a defined semantic vector, per citation class.
    pub members: BTreeMap<usize, usize>,
    /// Citation classes without any such member.
    pub omitted: Vec<usize>,
}

/// Mean semantic vector of the members of each citation class.
pub fn composition(semantic: &ClassProbabilities, citation_partition: &Partition) -> CompositionMatrix {
    let mut sums: BTreeMap<usize, (Vec<f64>, usize)> = BTreeMap::new();
    for (id, class) in citation_partition.iter() {
        if let Some(v) = semantic.get(id) {
            let (acc, n) = sums.entry(class).or_insert_with(|| (vec![0.0; semantic.num_classes], 0));
            for (a, x) in acc.iter_mut().zip(v) {
                *a += x;
            }
            *n += 1;
        }
    }
    let omitted = (0..citation_partition.num_communities())
        .filter(|c| !sums.contains_key(c))
        .collect();
    let members = sums.iter().map(|(&c, (_, n))| (c, *n)).collect();
    let rows = sums
        .into_iter()
        .map(|(c, (acc, n))| (c, acc.into_iter().map(|a| a / n as f64).collect()))
        .collect();
    CompositionMatrix { rows, members, omitted }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationSummary {
    pub min: f64,
    pub mean: f64,
    pub max: f64,
    pub decile_10: f64,
    pub decile_90: f64,
    pub defined: usize,
    pub undefined: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationMatrix {
    /// `entries[k][k2]`: semantic class `k` against citation class `k2`;
    /// `None` when either series has zero variance.
    pub entries: Vec<Vec<Option<f64>>>,
    pub common_references: usize,
    pub summary: Option<CorrelationSummary>,
}

/// Pearson correlation with unbiased covariance and variance estimates;
/// `None` for a constant series.
pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    let cov = sxy / (n - 1.0);
    let (vx, vy) = (sxx / (n - 1.0), syy / (n - 1.0));
    (vx > 0.0 && vy > 0.0).then(|| (cov / (vx.sqrt() * vy.sqrt())).clamp(-1.0, 1.0))
}

/// Correlation between every semantic class share and every citation class
/// indicator over the references where both vectors are defined.
pub fn correlation_matrix(
    semantic: &ClassProbabilities,
    citation: &ClassProbabilities,
) -> Result<CorrelationMatrix, MeasureError> {
    let common: BTreeSet<&str> = semantic
        .defined()
        .map(|(id, _)| id)
        .filter(|id| citation.get(id).is_some())
        .collect();
    if common.len() < 2 {
        return Err(MeasureError::TooFewCommon(common.len()));
    }
    let column = |p: &ClassProbabilities, k: usize| -> Vec<f64> {
        common.iter().map(|id| p.get(id).expect("common")[k]).collect()
    };
    let sem_cols: Vec<Vec<f64>> = (0..semantic.num_classes).map(|k| column(semantic, k)).collect();
    let cit_cols: Vec<Vec<f64>> = (0..citation.num_classes).map(|k| column(citation, k)).collect();
    let entries: Vec<Vec<Option<f64>>> = sem_cols
        .iter()
        .map(|s| cit_cols.iter().map(|c| pearson(s, c)).collect())
        .collect();
    let mut values: Vec<f64> = entries.iter().flatten().flatten().copied().collect();
    let undefined = entries.iter().flatten().filter(|e| e.is_none()).count();
    values.sort_by(f64::total_cmp);
    let summary = (!values.is_empty()).then(|| CorrelationSummary {
        min: values[0],
        mean: values.iter().sum::<f64>() / values.len() as f64,
        max: values[values.len() - 1],
        decile_10: quantile(&values, 0.1),
        decile_90: quantile(&values, 0.9),
        defined: values.len(),
        undefined,
    });
    Ok(CorrelationMatrix {
        entries,
        common_references: common.len(),
        summary,
    })
}
