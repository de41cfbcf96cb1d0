//! Directory store: `refs.jsonl`, `links.csv`, `meta.json`.
//!
//! References are append-only JSON lines; the id index is rebuilt on load.

use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{parse_links, parse_references, Corpus, CorpusError, Reference};
use crate::FORMAT_VERSION;

pub const REFS_FILE: &str = "refs.jsonl";
pub const LINKS_FILE: &str = "links.csv";
pub const META_FILE: &str = "meta.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoreMeta {
    pub schema_version: u32,
    pub references: usize,
    pub links: usize,
    pub seed_ids: Vec<String>,
    #[serde(default, skip_serializing_if = "serde_json::Map::is_empty")]
    pub generator: serde_json::Map<String, serde_json::Value>,
}

#[derive(Debug, Clone)]
pub struct Store {
    dir: PathBuf,
}

impl Store {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn refs_path(&self) -> PathBuf {
        self.dir.join(REFS_FILE)
    }

    pub fn links_path(&self) -> PathBuf {
        self.dir.join(LINKS_FILE)
    }

    pub fn meta_path(&self) -> PathBuf {
        self.dir.join(META_FILE)
    }

    /// Write a full corpus. `header` lines become `#` comments at the top of
    /// the line-oriented files and the `generator` object of `meta.json`.
    pub fn write(&self, corpus: &Corpus, header: &[(String, String)]) -> Result<(), CorpusError> {
        fs::create_dir_all(&self.dir).map_err(|e| CorpusError::io(&self.dir, e))?;
        let comments: String = header.iter().map(|(k, v)| format!("# {k}: {v}\n")).collect();

        let mut refs = comments.clone();
        for r in corpus.references() {
            refs.push_str(&serde_json::to_string(r).expect("reference serializes"));
            refs.push('\n');
        }
        self.write_file(&self.refs_path(), &refs)?;

        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["citing_id", "cited_id"]).expect("in-memory write");
        for l in corpus.links() {
            w.write_record([&l.citing_id, &l.cited_id]).expect("in-memory write");
        }
        let body = String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8");
        self.write_file(&self.links_path(), &(comments + &body))?;

        let meta = StoreMeta {
            schema_version: FORMAT_VERSION,
            references: corpus.len(),
            links: corpus.links().len(),
            seed_ids: corpus.seed_ids().iter().cloned().collect(),
            generator: header
                .iter()
                .map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone())))
                .collect(),
        };
        self.write_meta(&meta)
    }

    fn write_file(&self, path: &Path, text: &str) -> Result<(), CorpusError> {
        fs::write(path, text).map_err(|e| CorpusError::io(path, e))
    }

    fn write_meta(&self, meta: &StoreMeta) -> Result<(), CorpusError> {
        let mut text = serde_json::to_string_pretty(meta).expect("meta serializes");
        text.push('\n');
        self.write_file(&self.meta_path(), &text)
    }

    pub fn read_meta(&self) -> Result<StoreMeta, CorpusError> {
        let path = self.meta_path();
        let text = fs::read_to_string(&path).map_err(|e| CorpusError::io(&path, e))?;
        serde_json::from_str(&text).map_err(|e| CorpusError::Malformed {
            file: path.display().to_string(),
            line: e.line() as u64,
            message: e.to_string(),
        })
    }

    /// Load the corpus, rebuilding the id index from `refs.jsonl`.
    pub fn load(&self) -> Result<Corpus, CorpusError> {
        let meta = self.read_meta()?;
        let refs_path = self.refs_path();
        let links_path = self.links_path();
        let refs = parse_references(
            &fs::read_to_string(&refs_path).map_err(|e| CorpusError::io(&refs_path, e))?,
            &refs_path.display().to_string(),
        )?;
        let links = parse_links(
            &fs::read_to_string(&links_path).map_err(|e| CorpusError::io(&links_path, e))?,
            &links_path.display().to_string(),
        )?;
        let (corpus, _) = Corpus::build(refs, links, meta.seed_ids)?;
        Ok(corpus)
    }

    /// Append references to an existing store and refresh the counts in `meta.json`.
    /// Ids already present are rejected.
    pub fn append_references(&self, new_refs: &[Reference]) -> Result<(), CorpusError> {
        let corpus = self.load()?;
        let mut lines = String::new();
        let mut fresh = std::collections::HashSet::new();
        for r in new_refs {
            let r = r.clone().validated()?;
            if corpus.reference(&r.id).is_some() || !fresh.insert(r.id.clone()) {
                return Err(CorpusError::DuplicateId(r.id));
            }
            lines.push_str(&serde_json::to_string(&r).expect("reference serializes"));
            lines.push('\n');
        }
        let path = self.refs_path();
        let mut f = OpenOptions::new()
            .append(true)
            .open(&path)
            .map_err(|e| CorpusError::io(&path, e))?;
        f.write_all(lines.as_bytes())
            .map_err(|e| CorpusError::io(&path, e))?;
        let mut meta = self.read_meta()?;
        meta.references = corpus.len() + new_refs.len();
        self.write_meta(&meta)
    }
}
