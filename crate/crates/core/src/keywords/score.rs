//! Relevance scores from document-level co-occurrence profiles.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use super::{DocumentCandidates, Keyword, KeywordError, KeywordIndex};

/// Identifier of the scoring formula, recorded in output metadata.
pub const SCORE_VERSION: &str = "score_v1";

struct Stats<'a> {
    doc_freq: usize,
    surfaces: BTreeMap<&'a str, usize>,
    languages: BTreeMap<&'static str, usize>,
    docs: Vec<usize>,
}

/// Score candidates with document frequency at least `min_freq`:
///
/// `score(t) = ln(1 + f_t) * sum over t' != t of (c(t,t')/f_t - f_t'/D)^2`
///
/// where `c` counts documents holding both candidates, `D` is the number of
/// documents and `t'` ranges over the scored candidates. Keywords come out in
/// key order.
pub fn score_documents(docs: &[DocumentCandidates], min_freq: usize) -> Result<KeywordIndex, KeywordError> {
    let d = docs.len();
    if d < 2 {
        return Err(KeywordError::TooFewDocuments(d));
    }
    let mut stats: HashMap<&[String], Stats> = HashMap::new();
    for (i, doc) in docs.iter().enumerate() {
        for (stems, surfaces) in &doc.ngrams {
            let s = stats.entry(stems.as_slice()).or_insert_with(|| Stats {
                doc_freq: 0,
                surfaces: BTreeMap::new(),
                languages: BTreeMap::new(),
                docs: Vec::new(),
            });
            s.doc_freq += 1;
            s.docs.push(i);
            *s.languages.entry(doc.language.code()).or_insert(0) += 1;
            for (surface, n) in surfaces {
                *s.surfaces.entry(surface.as_str()).or_insert(0) += n;
            }
        }
    }
    let mut kept: Vec<(&[String], Stats)> = stats.into_iter().filter(|(_, s)| s.doc_freq >= min_freq).collect();
    if kept.is_empty() {
        return Err(KeywordError::NoCandidates { min_freq });
    }
    kept.sort_by(|a, b| a.0.cmp(b.0));

    let k = kept.len();
    let freq: Vec<u64> = kept.iter().map(|(_, s)| s.doc_freq as u64).collect();
    let mut per_doc: Vec<Vec<u32>> = vec![Vec::new(); d];
    for (t, (_, s)) in kept.iter().enumerate() {
        for &doc in &s.docs {
            per_doc[doc].push(t as u32);
        }
    }
    let sum_sq: u128 = freq.iter().map(|&f| (f as u128) * (f as u128)).sum();
    let df = d as f64;

    let scores: Vec<f64> = (0..k)
        .into_par_iter()
        .map_init(
            || (vec![0u64; k], Vec::<u32>::new()),
            |(counts, touched), t| {
                for &doc in &kept[t].1.docs {
                    for &u in &per_doc[doc] {
                        if counts[u as usize] == 0 {
                            touched.push(u);
                        }
                        counts[u as usize] += 1;
                    }
                }
                touched.sort_unstable();
                let ft = freq[t] as f64;
                let mut deviation = 0.0;
                let mut cooc_sq: u128 = 0;
                for &u in touched.iter() {
                    let u = u as usize;
                    if u != t {
                        let fu = freq[u];
                        deviation += (counts[u] as f64 / ft - fu as f64 / df).powi(2);
                        cooc_sq += (fu as u128) * (fu as u128);
                    }
                    counts[u] = 0;
                }
                touched.clear();
                // candidates never seen with t contribute (f'/D)^2 each
                let rest = sum_sq - (freq[t] as u128) * (freq[t] as u128) - cooc_sq;
                deviation += rest as f64 / (df * df);
                (1.0 + ft).ln() * deviation
            },
        )
        .collect();

    let mut keywords = Vec::with_capacity(k);
    let mut postings = Vec::with_capacity(k);
    for ((stems, s), score) in kept.into_iter().zip(scores) {
        let surface = s
            .surfaces
            .iter()
            .max_by(|a, b| a.1.cmp(b.1).then_with(|| b.0.cmp(a.0)))
            .map(|(s, _)| s.to_string())
            .unwrap_or_else(|| stems.join(" "));
        let language = s
            .languages
            .iter()
            .max_by(|a, b| a.1.cmp(b.1).then_with(|| b.0.cmp(a.0)))
            .map(|(l, _)| l.to_string())
            .expect("a kept candidate occurs somewhere");
        let mut ids: Vec<String> = s.docs.iter().map(|&i| docs[i].id.clone()).collect();
        ids.sort();
        keywords.push(Keyword {
            stems: stems.to_vec(),
            surface,
            language,
            doc_freq: s.doc_freq,
            score,
        });
        postings.push(ids);
    }
    Ok(KeywordIndex {
        keywords,
        postings,
        documents: d,
    })
}

/// Keep the `kw` best keywords ordered by score (descending), then document
/// frequency (descending), then stems (ascending).
pub fn select_top(index: KeywordIndex, kw: usize) -> KeywordIndex {
    let KeywordIndex {
        keywords,
        postings,
        documents,
    } = index;
    let mut pairs: Vec<(Keyword, Vec<String>)> = keywords.into_iter().zip(postings).collect();
    pairs.sort_by(|(a, _), (b, _)| {
        b.score
            .total_cmp(&a.score)
            .then_with(|| b.doc_freq.cmp(&a.doc_freq))
            .then_with(|| a.stems.cmp(&b.stems))
    });
    pairs.truncate(kw);
    let (keywords, postings) = pairs.into_iter().unzip();
    KeywordIndex {
        keywords,
        postings,
        documents,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::keywords::Language;
    use proptest::prelude::*;

    fn doc(id: &str, grams: &[&str]) -> DocumentCandidates {
        DocumentCandidates::from_stems(id, Language::En, grams.iter().copied())
    }

    fn score_of(index: &KeywordIndex, key: &str) -> f64 {
        index.keywords[index.position(key).unwrap()].score
    }

    #[test]
    fn ubiquitous_term_scores_zero() {
        let docs = [doc("1", &["a", "b"]), doc("2", &["a", "c"]), doc("3", &["a", "c"]), doc("4", &["a"])];
        let idx = score_documents(&docs, 1).unwrap();
        assert_eq!(score_of(&idx, "a"), 0.0);
        assert!(score_of(&idx, "b") > 0.0);
    }

    #[test]
    fn log_factor_ratio() {
        // x in 2 documents, y in 8, z in all 16
        let mut docs = vec![];
        for i in 0..16 {
            let mut g = vec![];
            if i < 2 {
                g.push("x");
            }
            if (2..10).contains(&i) {
                g.push("y");
            }
            g.push("z");
            docs.push(doc(&format!("{i:02}"), &g));
        }
        let idx = score_documents(&docs, 1).unwrap();
        let (sx, sy) = (score_of(&idx, "x"), score_of(&idx, "y"));
        // deviations: x -> (0 - 8/16)^2 + (1 - 1)^2, y -> (0 - 2/16)^2 + 0
        let dx = 0.25;
        let dy = 1.0 / 64.0;
        assert!((sx / dx - 3f64.ln()).abs() < 1e-12);
        assert!((sy / dy - 9f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn same_profile_different_frequency() {
        // x always appears with z (f_z = 8 of 16); only f_x differs
        let corpus = |fx: usize| -> Vec<DocumentCandidates> {
            (0..16)
                .map(|i| {
                    let mut g = vec![];
                    if i < fx {
                        g.push("x");
                    }
                    if i < 8 {
                        g.push("z");
                    }
                    doc(&format!("{i:02}"), &g)
                })
                .collect()
        };
        let a = score_of(&score_documents(&corpus(2), 1).unwrap(), "x");
        let b = score_of(&score_documents(&corpus(8), 1).unwrap(), "x");
        assert!((a / b - 3f64.ln() / 9f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn errors() {
        assert!(matches!(score_documents(&[doc("1", &["a"])], 1), Err(KeywordError::TooFewDocuments(1))));
        assert!(matches!(
            score_documents(&[doc("1", &["a"]), doc("2", &["b"])], 2),
            Err(KeywordError::NoCandidates { min_freq: 2 })
        ));
    }

    #[test]
    fn selection_order() {
        let kw = |s: &str, f: usize, score: f64| Keyword {
            stems: s.split(' ').map(String::from).collect(),
            surface: s.into(),
            language: "en".into(),
            doc_freq: f,
            score,
        };
        let idx = KeywordIndex {
            keywords: vec![kw("b", 3, 1.0), kw("a", 3, 1.0), kw("c", 5, 1.0), kw("d", 1, 2.0)],
            postings: vec![vec![]; 4],
            documents: 5,
        };
        let keys: Vec<String> = select_top(idx.clone(), 10).keywords.iter().map(|k| k.key()).collect();
        assert_eq!(keys, vec!["d", "c", "a", "b"]);
        assert_eq!(select_top(idx, 1).keywords[0].key(), "d");
    }

    fn brute(docs: &[Vec<u8>], min_freq: usize) -> BTreeMap<u8, f64> {
        let d = docs.len() as f64;
        let f = |t: u8| docs.iter().filter(|g| g.contains(&t)).count();
        let c = |a: u8, b: u8| docs.iter().filter(|g| g.contains(&a) && g.contains(&b)).count();
        let terms: Vec<u8> = (0..8).filter(|&t| f(t) >= min_freq && f(t) > 0).collect();
        terms
            .iter()
            .map(|&t| {
                let ft = f(t) as f64;
                let s: f64 = terms
                    .iter()
                    .filter(|&&u| u != t)
                    .map(|&u| (c(t, u) as f64 / ft - f(u) as f64 / d).powi(2))
                    .sum();
                (t, (1.0 + ft).ln() * s)
            })
            .collect()
    }

    proptest! {
        #[test]
        fn matches_direct_sum(
            raw in prop::collection::vec(prop::collection::btree_set(0u8..8, 0..6), 2..12),
            min_freq in 1usize..3,
        ) {
            let docs: Vec<Vec<u8>> = raw.iter().map(|s| s.iter().copied().collect()).collect();
            let dc: Vec<DocumentCandidates> = docs
                .iter()
                .enumerate()
                .map(|(i, g)| DocumentCandidates::from_stems(format!("{i:02}"), Language::En, g.iter().map(|t| format!("t{t}"))))
                .collect();
            let expected = brute(&docs, min_freq);
            match score_documents(&dc, min_freq) {
                Ok(idx) => {
                    prop_assert_eq!(idx.len(), expected.len());
                    for (t, s) in expected {
                        let got = score_of(&idx, &format!("t{t}"));
                        prop_assert!((got - s).abs() < 1e-12);
                        prop_assert!(got >= 0.0);
                    }
                    for (k, p) in idx.keywords.iter().zip(&idx.postings) {
                        prop_assert_eq!(k.doc_freq, p.len());
                    }
                }
                Err(_) => prop_assert!(expected.is_empty()),
            }
        }
    }
}
