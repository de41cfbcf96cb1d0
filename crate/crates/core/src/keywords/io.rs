//! Keyword table (CSV) and postings file exchange.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use super::{Keyword, KeywordError, KeywordIndex};

fn comments(header: &[String]) -> String {
    header.iter().map(|l| format!("# {l}\n")).collect()
}

/// CSV `stems,surface,lang,doc_freq,score` in index order, preceded by the
/// header lines and a `documents: D` comment.
pub fn render_keywords_csv(index: &KeywordIndex, header: &[String]) -> String {
    let mut out = comments(header);
    out.push_str(&format!("# documents: {}\n", index.documents));
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["stems", "surface", "lang", "doc_freq", "score"])
        .expect("write to memory");
    for k in &index.keywords {
        w.write_record([
            k.key(),
            k.surface.clone(),
            k.language.clone(),
            k.doc_freq.to_string(),
            k.score.to_string(),
        ])
        .expect("write to memory");
    }
    out.push_str(&String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8 input"));
    out
}

/// One line per keyword: `stems<TAB>doc_id[,doc_id...]`.
pub fn render_postings(index: &KeywordIndex, header: &[String]) -> String {
    let mut out = comments(header);
    for (k, docs) in index.keywords.iter().zip(&index.postings) {
        out.push_str(&k.key());
        out.push('\t');
        out.push_str(&docs.join(","));
        out.push('\n');
    }
    out
}

pub fn write_index(
    index: &KeywordIndex,
    keywords_path: &Path,
    postings_path: &Path,
    header: &[String],
) -> Result<(), KeywordError> {
    let write = |p: &Path, text: String| {
        fs::write(p, text).map_err(|source| KeywordError::Io {
            path: p.display().to_string(),
            source,
        })
    };
    write(keywords_path, render_keywords_csv(index, header))?;
    write(postings_path, render_postings(index, header))
}

/// Read a keyword table and its postings back into an index.
pub fn read_index(keywords_path: &Path, postings_path: &Path) -> Result<KeywordIndex, KeywordError> {
    let read = |p: &Path| {
        fs::read_to_string(p).map_err(|source| KeywordError::Io {
            path: p.display().to_string(),
            source,
        })
    };
    let parse_err = |p: &Path, message: String| KeywordError::Parse {
        path: p.display().to_string(),
        message,
    };
    let table = read(keywords_path)?;
    let documents = table
        .lines()
        .take_while(|l| l.starts_with('#'))
        .find_map(|l| l.strip_prefix("# documents: "))
        .map(|v| v.trim().parse::<usize>())
        .transpose()
        .map_err(|e| parse_err(keywords_path, format!("documents count: {e}")))?
        .unwrap_or(0);

    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(table.as_bytes());
    let mut keywords = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| parse_err(keywords_path, e.to_string()))?;
        let field = |j: usize| rec.get(j).unwrap_or("");
        let number = |j: usize, what: &str| -> Result<f64, KeywordError> {
            field(j)
                .parse::<f64>()
                .map_err(|e| parse_err(keywords_path, format!("row {}: {what}: {e}", i + 1)))
        };
        keywords.push(Keyword {
            stems: field(0).split(' ').map(str::to_string).collect(),
            surface: field(1).to_string(),
            language: field(2).to_string(),
            doc_freq: number(3, "doc_freq")? as usize,
            score: number(4, "score")?,
        });
    }

    let postings_text = read(postings_path)?;
    let mut postings: HashMap<&str, Vec<String>> = HashMap::new();
    for line in postings_text.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty()) {
        let (key, docs) = line
            .split_once('\t')
            .ok_or_else(|| parse_err(postings_path, format!("missing tab in {line:?}")))?;
        let docs = docs.split(',').filter(|d| !d.is_empty()).map(str::to_string).collect();
        postings.insert(key, docs);
    }
    let postings = keywords
        .iter()
        .map(|k| {
            postings
                .remove(k.key().as_str())
                .ok_or_else(|| parse_err(postings_path, format!("no postings for {:?}", k.key())))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(KeywordIndex {
        keywords,
        postings,
        documents,
    })
}
