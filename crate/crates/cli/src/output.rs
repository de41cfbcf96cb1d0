//! Metadata headers and small file writers shared by all stages.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use scholnet::Partition;
use serde::Serialize;
use serde_json::{Map, Value};

pub const TOOL: &str = concat!("scholnet ", env!("CARGO_PKG_VERSION"));

/// Provenance written at the top of every output file.
#[derive(Debug, Clone)]
pub struct Meta {
    pub stage: &'static str,
    pub seed: u64,
    pub params: Vec<(String, String)>,
}

impl Meta {
    pub fn new(stage: &'static str, seed: u64) -> Self {
        Self {
            stage,
            seed,
            params: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.push((key.to_string(), value.to_string()));
        self
    }

    pub fn pairs(&self) -> Vec<(String, String)> {
        let mut out = vec![
            ("tool".to_string(), TOOL.to_string()),
            ("format_version".to_string(), scholnet::FORMAT_VERSION.to_string()),
            ("stage".to_string(), self.stage.to_string()),
            ("rng".to_string(), scholnet::RNG_ALGORITHM.to_string()),
            ("seed".to_string(), self.seed.to_string()),
        ];
        out.extend(self.params.iter().cloned());
        out
    }

    /// `key: value` lines, to be written as comments.
    pub fn lines(&self) -> Vec<String> {
        self.pairs().into_iter().map(|(k, v)| format!("{k}: {v}")).collect()
    }

    pub fn comment_block(&self) -> String {
        self.lines().iter().map(|l| format!("# {l}\n")).collect()
    }

    fn json(&self) -> Value {
        Value::Object(self.pairs().into_iter().map(|(k, v)| (k, Value::String(v))).collect())
    }
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// A JSON document whose `meta` member carries the header.
pub fn write_json<T: Serialize>(path: &Path, meta: &Meta, body: &T) -> Result<()> {
    let mut doc = Map::new();
    doc.insert("meta".into(), meta.json());
    match serde_json::to_value(body)? {
        Value::Object(fields) => doc.extend(fields),
        other => {
            doc.insert("data".into(), other);
        }
    }
    let mut text = serde_json::to_string_pretty(&Value::Object(doc))?;
    text.push('\n');
    write_text(path, &text)
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// CSV `node_id,community`, nodes in id order.
pub fn render_partition(partition: &Partition, meta: &Meta) -> String {
    let mut out = meta.comment_block();
    out.push_str("node_id,community\n");
    for (id, c) in partition.iter() {
        out.push_str(&csv_field(id));
        out.push(',');
        out.push_str(&c.to_string());
        out.push('\n');
    }
    out
}

pub fn read_partition(path: &Path) -> Result<Partition> {
    let text = read_text(path)?;
    let mut pairs = BTreeMap::new();
    let mut seen_header = false;
    for (n, line) in text.lines().enumerate() {
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        if !seen_header {
            seen_header = true;
            if line.trim() != "node_id,community" {
                bail!("{}:{}: expected header `node_id,community`", path.display(), n + 1);
            }
            continue;
        }
        let (id, c) = line
            .rsplit_once(',')
            .with_context(|| format!("{}:{}: expected two fields", path.display(), n + 1))?;
        let c: usize = c
            .trim()
            .parse()
            .with_context(|| format!("{}:{}: bad community label", path.display(), n + 1))?;
        pairs.insert(unquote(id), c);
    }
    Ok(Partition::new(pairs)?)
}

pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn unquote(s: &str) -> String {
    match s.strip_prefix('"').and_then(|s| s.strip_suffix('"')) {
        Some(inner) => inner.replace("\"\"", "\""),
        None => s.to_string(),
    }
}

pub fn opt_num(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}
