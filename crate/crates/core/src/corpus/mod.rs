//! References, citation links, ingestion, deduplication and persistence.

mod dedup;
mod ingest;
mod store;

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::text::collapse_whitespace;

pub use dedup::{dedup_by_title, DedupReport};
pub use ingest::{ingest, parse_links, parse_references, IngestDiagnostics};
pub use store::{Store, StoreMeta};

pub const MIN_YEAR: i32 = 1500;
pub const MAX_YEAR: i32 = 2100;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{file}:{line}: {message}")]
    Malformed {
        file: String,
        line: u64,
        message: String,
    },
    #[error("duplicate reference id `{0}`")]
    DuplicateId(String),
    #[error("invalid reference `{id}`: {reason}")]
    InvalidReference { id: String, reason: String },
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CorpusError {
    pub(crate) fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        CorpusError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

/// One citable work.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reference {
    pub id: String,
    pub title: String,
    #[serde(rename = "abstract", default, skip_serializing_if = "Option::is_none")]
    pub abstract_text: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub year: Option<i32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub authors: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub language: Option<String>,
    #[serde(default)]
    pub source: String,
}

impl Reference {
    pub fn new(id: impl Into<String>, title: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            title: title.into(),
            abstract_text: None,
            year: None,
            authors: Vec::new(),
            language: None,
            source: String::new(),
        }
    }

    pub fn with_abstract(mut self, text: impl Into<String>) -> Self {
        self.abstract_text = Some(text.into());
        self
    }

    pub fn has_abstract(&self) -> bool {
        self.abstract_text
            .as_deref()
            .is_some_and(|a| !a.trim().is_empty())
    }

    /// Normalize whitespace in the title and check field invariants.
    pub fn validated(mut self) -> Result<Self, CorpusError> {
        let invalid = |reason: &str| CorpusError::InvalidReference {
            id: self.id.clone(),
            reason: reason.to_string(),
        };
        if self.id.is_empty() {
            return Err(invalid("empty id"));
        }
        let title = collapse_whitespace(&self.title);
        if title.is_empty() {
            return Err(invalid("empty title"));
        }
        if let Some(y) = self.year {
            if !(MIN_YEAR..=MAX_YEAR).contains(&y) {
                return Err(invalid(&format!("year {y} outside [{MIN_YEAR}, {MAX_YEAR}]")));
            }
        }
        self.title = title;
        Ok(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CitationLink {
    pub citing_id: String,
    pub cited_id: String,
}

impl CitationLink {
    pub fn new(citing: impl Into<String>, cited: impl Into<String>) -> Self {
        Self {
            citing_id: citing.into(),
            cited_id: cited.into(),
        }
    }
}

/// What happened to links while a corpus was assembled.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkReport {
    pub duplicate_links: usize,
    pub self_links: usize,
    pub dangling_links: usize,
    pub unknown_seeds: usize,
}

/// An immutable, validated collection of references and citation links.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Corpus {
    references: BTreeMap<String, Reference>,
    links: Vec<CitationLink>,
    seed_ids: BTreeSet<String>,
}

impl Corpus {
    /// Assemble a corpus, enforcing every invariant: unique ids, no self-links,
    /// no duplicate links, no dangling endpoints, seeds drawn from the references.
    pub fn build(
        references: impl IntoIterator<Item = Reference>,
        links: impl IntoIterator<Item = CitationLink>,
        seed_ids: impl IntoIterator<Item = String>,
    ) -> Result<(Self, LinkReport), CorpusError> {
        let mut refs = BTreeMap::new();
        for r in references {
            let r = r.validated()?;
            if refs.contains_key(&r.id) {
                return Err(CorpusError::DuplicateId(r.id));
            }
            refs.insert(r.id.clone(), r);
        }
        let mut report = LinkReport::default();
        let mut seen = HashSet::new();
        let mut kept = Vec::new();
        for link in links {
            if link.citing_id == link.cited_id {
                report.self_links += 1;
                continue;
            }
            if !refs.contains_key(&link.citing_id) || !refs.contains_key(&link.cited_id) {
                report.dangling_links += 1;
                continue;
            }
            if !seen.insert(link.clone()) {
                report.duplicate_links += 1;
                continue;
            }
            kept.push(link);
        }
        let mut seeds = BTreeSet::new();
        for s in seed_ids {
            if refs.contains_key(&s) {
                seeds.insert(s);
            } else {
                report.unknown_seeds += 1;
            }
        }
        Ok((
            Self {
                references: refs,
                links: kept,
                seed_ids: seeds,
            },
            report,
        ))
    }

    pub fn references(&self) -> impl Iterator<Item = &Reference> + '_ {
        self.references.values()
    }

    pub fn reference(&self, id: &str) -> Option<&Reference> {
        self.references.get(id)
    }

    pub fn len(&self) -> usize {
        self.references.len()
    }

    pub fn is_empty(&self) -> bool {
        self.references.is_empty()
    }

    pub fn links(&self) -> &[CitationLink] {
        &self.links
    }

    pub fn seed_ids(&self) -> &BTreeSet<String> {
        &self.seed_ids
    }

    /// Counts and abstract coverage.
    pub fn stats(&self) -> CorpusStats {
        let with_abstract = self.references().filter(|r| r.has_abstract()).count();
        let n = self.len();
        CorpusStats {
            references: n,
            with_abstract,
            abstract_coverage: if n == 0 {
                0.0
            } else {
                with_abstract as f64 / n as f64
            },
            links: self.links.len(),
            seeds: self.seed_ids.len(),
        }
    }

    /// Apply `f` to every reference. Ids must not change.
    pub(crate) fn map_references<F: FnMut(&mut Reference)>(&mut self, mut f: F) {
        for r in self.references.values_mut() {
            f(r);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub references: usize,
    pub with_abstract: usize,
    pub abstract_coverage: f64,
    pub links: usize,
    pub seeds: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn refs(ids: &[&str]) -> Vec<Reference> {
        ids.iter().map(|id| Reference::new(*id, format!("Title {id}"))).collect()
    }

    #[test]
    fn duplicate_links_collapse() {
        let links = vec![
            CitationLink::new("a", "b"),
            CitationLink::new("a", "b"),
            CitationLink::new("b", "c"),
        ];
        let (c, report) = Corpus::build(refs(&["a", "b", "c"]), links, []).unwrap();
        assert_eq!(c.links().len(), 2);
        assert_eq!(report.duplicate_links, 1);
    }

    #[test]
    fn self_link_rejected() {
        let (c, report) = Corpus::build(refs(&["a"]), vec![CitationLink::new("a", "a")], []).unwrap();
        assert!(c.links().is_empty());
        assert_eq!(report.self_links, 1);
    }

    #[test]
    fn dangling_links_dropped() {
        let (c, report) = Corpus::build(refs(&["a"]), vec![CitationLink::new("a", "zz")], []).unwrap();
        assert!(c.links().is_empty());
        assert_eq!(report.dangling_links, 1);
    }

    #[test]
    fn duplicate_id_is_an_error() {
        let err = Corpus::build(refs(&["a", "a"]), vec![], []).unwrap_err();
        assert!(matches!(err, CorpusError::DuplicateId(id) if id == "a"));
    }

    #[test]
    fn invalid_fields_rejected() {
        let mut r = Reference::new("a", "   ");
        assert!(r.clone().validated().is_err());
        r.title = "ok".into();
        r.year = Some(1200);
        assert!(r.validated().is_err());
    }

    #[test]
    fn stats_coverage() {
        let mut rs = refs(&["a", "b", "c", "d"]);
        rs[0].abstract_text = Some("text".into());
        rs[2].abstract_text = Some("more".into());
        rs[3].abstract_text = Some("   ".into());
        let (c, _) = Corpus::build(rs, vec![], []).unwrap();
        let s = c.stats();
        assert_eq!(s.with_abstract, 2);
        assert_eq!(s.abstract_coverage, 0.5);

        let empty = Corpus::default().stats();
        assert_eq!(empty.references, 0);
        assert_eq!(empty.abstract_coverage, 0.0);
    }

    #[test]
    fn seeds_must_exist() {
        let (c, report) =
            Corpus::build(refs(&["a", "b"]), vec![], ["a".to_string(), "q".to_string()]).unwrap();
        assert_eq!(c.seed_ids().len(), 1);
        assert_eq!(report.unknown_seeds, 1);
    }
}
