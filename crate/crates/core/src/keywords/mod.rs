//! Relevant keyword extraction: language detection, tagging and stemming,
//! n-gram candidates under grammatical rules, relevance scoring.

mod io;
mod language;
pub mod porter;
mod score;
mod tagger;

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{Corpus, Reference};

pub use io::{read_index, render_keywords_csv, render_postings, write_index};
pub use language::{
    detect_language, sentences, stopword_checksums, tokenize, Language, DETECTION_THRESHOLD, STOPWORDS_EN_SHA256,
    STOPWORDS_FR_SHA256,
};
pub use score::{score_documents, select_top, SCORE_VERSION};
pub use tagger::{ExternalTagger, LexiconTagger, Tag, TaggedToken, Tagger};

/// Longest n-gram considered.
pub const MAX_NGRAM: usize = 4;

#[derive(Debug, Error)]
pub enum KeywordError {
    #[error("unsupported language {0:?}")]
    UnsupportedLanguage(String),
    #[error("scoring needs at least 2 documents with abstracts in a supported language, found {0}")]
    TooFewDocuments(usize),
    #[error("no candidate reaches the minimal document frequency {min_freq}")]
    NoCandidates { min_freq: usize },
    #[error("external tagger {program}: {message}")]
    Tagger { program: String, message: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Keyword {
    pub stems: Vec<String>,
    /// Most frequent surface form, ties to the lexicographically smallest.
    pub surface: String,
    pub language: String,
    pub doc_freq: usize,
    pub score: f64,
}

impl Keyword {
    /// Stems joined by single spaces; the keyword's identity.
    pub fn key(&self) -> String {
        self.stems.join(" ")
    }
}

/// Scored keywords with the documents containing each one.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct KeywordIndex {
    pub keywords: Vec<Keyword>,
    /// Sorted document ids, aligned with `keywords`.
    pub postings: Vec<Vec<String>>,
    /// Number of documents the scores were computed over.
    pub documents: usize,
}

impl KeywordIndex {
    pub fn len(&self) -> usize {
        self.keywords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keywords.is_empty()
    }

    pub fn position(&self, key: &str) -> Option<usize> {
        self.keywords.iter().position(|k| k.key() == key)
    }

    /// Keyword keys present in each document.
    pub fn document_keywords(&self) -> BTreeMap<&str, BTreeSet<String>> {
        let mut out: BTreeMap<&str, BTreeSet<String>> = BTreeMap::new();
        for (k, docs) in self.keywords.iter().zip(&self.postings) {
            for d in docs {
                out.entry(d.as_str()).or_default().insert(k.key());
            }
        }
        out
    }
}

/// Tokenize, tag and stem a text in `language` ("en" or "fr") with the
/// bundled tagger.
pub fn tag_and_stem(text: &str, language: &str) -> Result<Vec<TaggedToken>, KeywordError> {
    let lang: Language = language.parse()?;
    Ok(LexiconTagger.tag(&sentences(text), lang)?.into_iter().flatten().collect())
}

fn allowed(tag: Tag, language: Language) -> bool {
    match language {
        Language::En => matches!(tag, Tag::Noun | Tag::Ger | Tag::Adj),
        Language::Fr => matches!(tag, Tag::Noun | Tag::Adj),
    }
}

/// Every window of 1 to 4 tokens whose tags are all allowed, as
/// (stems, surface) pairs, in text order.
fn windows(tokens: &[TaggedToken], language: Language) -> impl Iterator<Item = (Vec<String>, String)> + '_ {
    (0..tokens.len()).flat_map(move |start| {
        let run = tokens[start..]
            .iter()
            .take(MAX_NGRAM)
            .take_while(|t| allowed(t.tag, language))
            .count();
        (1..=run).map(move |n| {
            let w = &tokens[start..start + n];
            let stems = w.iter().map(|t| t.stem.clone()).collect();
            let surface = w.iter().map(|t| t.surface.as_str()).collect::<Vec<_>>().join(" ");
            (stems, surface)
        })
    })
}

/// Distinct candidate stem n-grams of a token sequence, sorted.
pub fn extract_candidates(tokens: &[TaggedToken], language: Language) -> Vec<Vec<String>> {
    let set: BTreeSet<Vec<String>> = windows(tokens, language).map(|(s, _)| s).collect();
    set.into_iter().collect()
}

/// Candidates of one document: each distinct stem n-gram once, with the
/// surface forms seen for it.
#[derive(Debug, Clone, PartialEq)]
pub struct DocumentCandidates {
    pub id: String,
    pub language: Language,
    pub ngrams: BTreeMap<Vec<String>, BTreeMap<String, usize>>,
}

impl DocumentCandidates {
    /// A document from plain candidate sets, surfaces equal to stems.
    pub fn from_stems<I, S>(id: impl Into<String>, language: Language, ngrams: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let ngrams = ngrams
            .into_iter()
            .map(|g| {
                let g = g.as_ref();
                let stems = g.split(' ').map(str::to_string).collect();
                (stems, BTreeMap::from([(g.to_string(), 1)]))
            })
            .collect();
        Self {
            id: id.into(),
            language,
            ngrams,
        }
    }
}

/// Detect, tag and extract one abstract. `None` when the reference has no
/// abstract or its language is not recognized.
pub fn process_document(reference: &Reference, tagger: &dyn Tagger) -> Result<Option<DocumentCandidates>, KeywordError> {
    let Some(text) = reference.abstract_text.as_deref() else {
        return Ok(None);
    };
    let sents = sentences(text);
    let all: Vec<String> = sents.iter().flatten().cloned().collect();
    let Some(language) = language::detect_tokens(&all) else {
        return Ok(None);
    };
    let mut ngrams: BTreeMap<Vec<String>, BTreeMap<String, usize>> = BTreeMap::new();
    for tokens in tagger.tag(&sents, language)? {
        for (stems, surface) in windows(&tokens, language) {
            *ngrams.entry(stems).or_default().entry(surface).or_insert(0) += 1;
        }
    }
    Ok(Some(DocumentCandidates {
        id: reference.id.clone(),
        language,
        ngrams,
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeywordParams {
    /// Number of keywords kept after scoring.
    pub kw: usize,
    /// Minimal document frequency for a candidate to be scored.
    pub min_freq: usize,
}

impl Default for KeywordParams {
    fn default() -> Self {
        Self { kw: 50_000, min_freq: 3 }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct KeywordDiagnostics {
    pub with_abstract: usize,
    pub by_language: BTreeMap<String, usize>,
    pub unknown_language: usize,
    pub candidates: usize,
    pub scored: usize,
    pub kept: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KeywordRun {
    pub index: KeywordIndex,
    pub diagnostics: KeywordDiagnostics,
}

/// Candidates of every abstract in the corpus, in id order, plus language
/// counts. Documents are processed in parallel.
pub fn corpus_candidates(
    corpus: &Corpus,
    tagger: &dyn Tagger,
) -> Result<(Vec<DocumentCandidates>, KeywordDiagnostics), KeywordError> {
    let refs: Vec<&Reference> = corpus.references().filter(|r| r.has_abstract()).collect();
    let processed = refs
        .par_iter()
        .map(|r| process_document(r, tagger))
        .collect::<Result<Vec<_>, _>>()?;
    let mut diag = KeywordDiagnostics {
        with_abstract: refs.len(),
        ..Default::default()
    };
    let docs: Vec<DocumentCandidates> = processed.into_iter().flatten().collect();
    diag.unknown_language = refs.len() - docs.len();
    for d in &docs {
        *diag.by_language.entry(d.language.code().to_string()).or_insert(0) += 1;
    }
    Ok((docs, diag))
}

/// Score every candidate of the corpus with the bundled tagger (unsorted,
/// nothing truncated).
pub fn score_keywords(corpus: &Corpus, min_candidate_freq: usize) -> Result<KeywordIndex, KeywordError> {
    let (docs, _) = corpus_candidates(corpus, &LexiconTagger)?;
    score_documents(&docs, min_candidate_freq)
}

/// The full extraction: candidates, scores, top-`kw` selection.
pub fn extract_keywords(corpus: &Corpus, params: &KeywordParams, tagger: &dyn Tagger) -> Result<KeywordRun, KeywordError> {
    let (docs, mut diagnostics) = corpus_candidates(corpus, tagger)?;
    diagnostics.candidates = docs
        .iter()
        .flat_map(|d| d.ngrams.keys())
        .collect::<BTreeSet<_>>()
        .len();
    let scored = score_documents(&docs, params.min_freq)?;
    diagnostics.scored = scored.len();
    let index = select_top(scored, params.kw);
    diagnostics.kept = index.len();
    Ok(KeywordRun { index, diagnostics })
}
