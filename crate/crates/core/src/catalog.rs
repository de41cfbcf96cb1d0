//! Abstract enrichment from an external bibliographic catalog.
//!
//! Wire protocol: `GET {base_url}?title=<normalized title>` answers either a
//! JSON object with optional `title`, `abstract`, `year` and `authors`
//! fields, or HTTP 404.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::corpus::{Corpus, MAX_YEAR, MIN_YEAR};
use crate::text::normalize_title;

/// Environment variable overriding [`ProviderConfig::cache_dir`].
pub const CACHE_ENV: &str = "SCHOLNET_CACHE";

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("invalid provider configuration: {0}")]
    InvalidConfig(String),
    #[error("cache directory {path}: {source}")]
    Cache {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProviderConfig {
    pub name: String,
    pub base_url: String,
    /// Maximum requests per second.
    pub rate_limit: f64,
    /// Per-request timeout in seconds.
    pub timeout: f64,
    pub cache_dir: PathBuf,
    /// Lookups in flight at once.
    #[serde(default = "default_concurrency")]
    pub concurrency: usize,
}

fn default_concurrency() -> usize {
    4
}

impl ProviderConfig {
    pub fn validate(&self) -> Result<(), CatalogError> {
        let bad = |m: &str| Err(CatalogError::InvalidConfig(m.to_string()));
        if !(self.rate_limit > 0.0 && self.rate_limit.is_finite()) {
            return bad("rate_limit must be positive");
        }
        if !(self.timeout > 0.0 && self.timeout.is_finite()) {
            return bad("timeout must be positive");
        }
        if self.concurrency == 0 {
            return bad("concurrency must be at least 1");
        }
        if self.base_url.is_empty() {
            return bad("base_url is empty");
        }
        Ok(())
    }

    /// Apply the cache directory override from the environment, if set.
    pub fn with_env_overrides(mut self) -> Self {
        if let Some(dir) = std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()) {
            self.cache_dir = PathBuf::from(dir);
        }
        self
    }
}

/// Catalog record for one title.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
pub struct CatalogRecord {
    #[serde(default)]
    pub title: Option<String>,
    #[serde(default, rename = "abstract")]
    pub abstract_text: Option<String>,
    #[serde(default)]
    pub year: Option<i32>,
    #[serde(default)]
    pub authors: Option<Vec<String>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EnrichDiagnostics {
    /// References lacking an abstract.
    pub missing_abstract: usize,
    /// Distinct normalized titles looked up.
    pub lookups: usize,
    pub cache_hits: usize,
    pub requests: usize,
    pub matched: usize,
    pub not_found: usize,
    pub title_mismatch: usize,
    pub malformed: usize,
    pub errors: usize,
    pub abstracts_filled: usize,
    pub years_filled: usize,
    pub authors_filled: usize,
    /// `(normalized title, message)` for failed lookups.
    pub error_log: Vec<(String, String)>,
}

enum Lookup {
    Found(String),
    NotFound,
    Failed(String),
}

/// Spaces request start times at least `1 / rate` seconds apart.
struct RateLimiter {
    interval: Duration,
    next: Mutex<Option<Instant>>,
}

impl RateLimiter {
    fn new(rate: f64) -> Self {
        Self {
            interval: Duration::from_secs_f64(1.0 / rate),
            next: Mutex::new(None),
        }
    }

    fn acquire(&self) {
        let slot = {
            let mut next = self.next.lock().expect("rate limiter poisoned");
            let now = Instant::now();
            let slot = next.map_or(now, |n| n.max(now));
            *next = Some(slot + self.interval);
            slot
        };
        let now = Instant::now();
        if slot > now {
            std::thread::sleep(slot - now);
        }
    }
}

struct Cache {
    dir: PathBuf,
}

impl Cache {
    fn key(title: &str) -> String {
        hex::encode(Sha256::digest(title.as_bytes()))
    }

    fn get(&self, title: &str) -> Option<Lookup> {
        let key = Self::key(title);
        if self.dir.join(format!("{key}.404")).exists() {
            return Some(Lookup::NotFound);
        }
        fs::read_to_string(self.dir.join(format!("{key}.json"))).ok().map(Lookup::Found)
    }

    fn put(&self, title: &str, entry: &Lookup) -> std::io::Result<()> {
        let key = Self::key(title);
        let (name, body) = match entry {
            Lookup::Found(body) => (format!("{key}.json"), body.as_str()),
            Lookup::NotFound => (format!("{key}.404"), ""),
            Lookup::Failed(_) => return Ok(()),
        };
        let tmp = self.dir.join(format!(".{name}.{}.tmp", std::process::id()));
        fs::write(&tmp, body)?;
        fs::rename(&tmp, self.dir.join(name))
    }
}

fn fetch(agent: &ureq::Agent, base_url: &str, title: &str) -> Lookup {
    match agent.get(base_url).query("title", title).call() {
        Ok(mut resp) => match resp.status().as_u16() {
            200 => match resp.body_mut().read_to_string() {
                Ok(body) => Lookup::Found(body),
                Err(e) => Lookup::Failed(format!("reading body: {e}")),
            },
            404 => Lookup::NotFound,
            code => Lookup::Failed(format!("HTTP status {code}")),
        },
        Err(e) => Lookup::Failed(e.to_string()),
    }
}

/// Fill missing abstracts (and absent years and authors) from the catalog.
///
/// Only references without an abstract are looked up, once per distinct
/// normalized title. A record is used only when its own title, if present,
/// normalizes to the query. Network failures leave the affected references
/// untouched and are reported in the diagnostics; they are never cached.
pub fn enrich(corpus: &Corpus, provider: &ProviderConfig) -> Result<(Corpus, EnrichDiagnostics), CatalogError> {
    provider.validate()?;
    let mut diag = EnrichDiagnostics::default();
    let mut wanted: BTreeSet<String> = BTreeSet::new();
    for r in corpus.references().filter(|r| !r.has_abstract()) {
        diag.missing_abstract += 1;
        let t = normalize_title(&r.title);
        if !t.is_empty() {
            wanted.insert(t);
        }
    }
    diag.lookups = wanted.len();
    if wanted.is_empty() {
        return Ok((corpus.clone(), diag));
    }
    fs::create_dir_all(&provider.cache_dir).map_err(|source| CatalogError::Cache {
        path: provider.cache_dir.display().to_string(),
        source,
    })?;
    let cache = Cache {
        dir: provider.cache_dir.clone(),
    };

    let mut results: BTreeMap<String, Lookup> = BTreeMap::new();
    let mut pending = Vec::new();
    for t in wanted {
        match cache.get(&t) {
            Some(hit) => {
                diag.cache_hits += 1;
                results.insert(t, hit);
            }
            None => pending.push(t),
        }
    }
    diag.requests = pending.len();

    if !pending.is_empty() {
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .timeout_global(Some(Duration::from_secs_f64(provider.timeout)))
            .http_status_as_error(false)
            .build()
            .into();
        let limiter = RateLimiter::new(provider.rate_limit);
        let cursor = AtomicUsize::new(0);
        let fetched = Mutex::new(Vec::with_capacity(pending.len()));
        std::thread::scope(|s| {
            for _ in 0..provider.concurrency.min(pending.len()) {
                s.spawn(|| loop {
                    let i = cursor.fetch_add(1, Ordering::Relaxed);
                    let Some(title) = pending.get(i) else {
                        break;
                    };
                    limiter.acquire();
                    let mut entry = fetch(&agent, &provider.base_url, title);
                    if let Err(e) = cache.put(title, &entry) {
                        entry = Lookup::Failed(format!("cache write: {e}"));
                    }
                    fetched.lock().expect("results poisoned").push((title.clone(), entry));
                });
            }
        });
        results.extend(fetched.into_inner().expect("results poisoned"));
    }

    let mut records: BTreeMap<String, CatalogRecord> = BTreeMap::new();
    for (title, entry) in results {
        match entry {
            Lookup::NotFound => diag.not_found += 1,
            Lookup::Failed(message) => {
                diag.errors += 1;
                diag.error_log.push((title, message));
            }
            Lookup::Found(body) => match serde_json::from_str::<CatalogRecord>(&body) {
                Err(_) => diag.malformed += 1,
                Ok(rec) if rec.title.as_deref().is_some_and(|rt| normalize_title(rt) != title) => {
                    diag.title_mismatch += 1
                }
                Ok(rec) => {
                    diag.matched += 1;
                    records.insert(title, rec);
                }
            },
        }
    }

    let mut out = corpus.clone();
    out.map_references(|r| {
        if r.has_abstract() {
            return;
        }
        let Some(rec) = records.get(&normalize_title(&r.title)) else {
            return;
        };
        if let Some(a) = rec.abstract_text.as_deref().filter(|a| !a.trim().is_empty()) {
            r.abstract_text = Some(a.to_string());
            diag.abstracts_filled += 1;
        }
        if let Some(y) = rec.year.filter(|y| r.year.is_none() && (MIN_YEAR..=MAX_YEAR).contains(y)) {
            r.year = Some(y);
            diag.years_filled += 1;
        }
        if let Some(a) = rec.authors.as_ref().filter(|a| r.authors.is_empty() && !a.is_empty()) {
            r.authors = a.clone();
            diag.authors_filled += 1;
        }
    });
    Ok((out, diag))
}

/// Cache file stem for a normalized title.
pub fn cache_key(normalized_title: &str) -> String {
    Cache::key(normalized_title)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn limiter_spaces_requests() {
        let l = RateLimiter::new(50.0);
        let start = Instant::now();
        for _ in 0..6 {
            l.acquire();
        }
        assert!(start.elapsed() >= Duration::from_millis(100));
    }

    #[test]
    fn config_validation() {
        let mut c = ProviderConfig {
            name: "stub".into(),
            base_url: "http://127.0.0.1:1/".into(),
            rate_limit: 1.0,
            timeout: 1.0,
            cache_dir: "x".into(),
            concurrency: 1,
        };
        assert!(c.validate().is_ok());
        c.rate_limit = 0.0;
        assert!(c.validate().is_err());
        c.rate_limit = 1.0;
        c.timeout = -1.0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn nothing_to_do_without_missing_abstracts() {
        let refs = [crate::corpus::Reference::new("a", "T").with_abstract("x")];
        let (corpus, _) = Corpus::build(refs, Vec::<crate::corpus::CitationLink>::new(), Vec::<String>::new()).unwrap();
        let c = ProviderConfig {
            name: "stub".into(),
            base_url: "http://127.0.0.1:1/".into(),
            rate_limit: 1.0,
            timeout: 1.0,
            cache_dir: "/nonexistent/never/created".into(),
            concurrency: 1,
        };
        let (out, d) = enrich(&corpus, &c).unwrap();
        assert_eq!(out, corpus);
        assert_eq!((d.requests, d.lookups), (0, 0));
    }
}
