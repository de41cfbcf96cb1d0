use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::{CitationLink, Corpus, Reference};
use crate::text::normalize_title;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DedupReport {
    /// References absorbed into a surviving record.
    pub merged: usize,
    /// Links that became duplicates or self-links after retargeting.
    pub links_dropped: usize,
}

/// Merge references whose normalized titles coincide.
///
/// The smallest id survives; the longest abstract is kept; other missing
/// fields are filled from the absorbed records in id order. Links and seeds
/// are retargeted to the survivor.
pub fn dedup_by_title(corpus: &Corpus) -> (Corpus, DedupReport) {
    let mut groups: BTreeMap<String, Vec<&Reference>> = BTreeMap::new();
    for r in corpus.references() {
        groups.entry(normalize_title(&r.title)).or_default().push(r);
    }
    let mut survivor_of: HashMap<&str, &str> = HashMap::new();
    let mut merged_refs = Vec::with_capacity(groups.len());
    let mut report = DedupReport::default();
    for members in groups.values() {
        // references() iterates in id order, so members[0] has the smallest id
        let head = members[0];
        let mut merged = head.clone();
        for other in &members[1..] {
            survivor_of.insert(other.id.as_str(), head.id.as_str());
            report.merged += 1;
            let longer = other.abstract_text.as_deref().map_or(0, str::len)
                > merged.abstract_text.as_deref().map_or(0, str::len);
            if longer {
                merged.abstract_text = other.abstract_text.clone();
            }
            if merged.year.is_none() {
                merged.year = other.year;
            }
            if merged.authors.is_empty() {
                merged.authors = other.authors.clone();
            }
            if merged.language.is_none() {
                merged.language = other.language.clone();
            }
        }
        merged_refs.push(merged);
    }
    let resolve = |id: &str| survivor_of.get(id).copied().unwrap_or(id).to_string();
    let links: Vec<CitationLink> = corpus
        .links()
        .iter()
        .map(|l| CitationLink::new(resolve(&l.citing_id), resolve(&l.cited_id)))
        .collect();
    let seeds: Vec<String> = corpus.seed_ids().iter().map(|s| resolve(s)).collect();
    let before = links.len();
    let (out, _) = Corpus::build(merged_refs, links, seeds)
        .expect("merging a valid corpus preserves its invariants");
    report.links_dropped = before - out.links().len();
    (out, report)
}
