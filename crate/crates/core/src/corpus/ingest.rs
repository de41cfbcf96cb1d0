use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{CitationLink, Corpus, CorpusError, LinkReport, Reference};

/// Counts gathered while reading the input files.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestDiagnostics {
    pub references: usize,
    pub links_read: usize,
    pub links_kept: usize,
    #[serde(flatten)]
    pub links: LinkReport,
}

/// Parse a line-delimited JSON reference file. Blank lines and lines starting
/// with `#` are skipped.
pub fn parse_references(text: &str, file: &str) -> Result<Vec<Reference>, CorpusError> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let line_no = n as u64 + 1;
        let r: Reference = serde_json::from_str(trimmed).map_err(|e| CorpusError::Malformed {
            file: file.to_string(),
            line: line_no,
            message: e.to_string(),
        })?;
        let r = match r.validated() {
            Ok(r) => r,
            Err(CorpusError::InvalidReference { id, reason }) => {
                return Err(CorpusError::Malformed {
                    file: file.to_string(),
                    line: line_no,
                    message: format!("reference `{id}`: {reason}"),
                })
            }
            Err(e) => return Err(e),
        };
        out.push(r);
    }
    Ok(out)
}

/// Parse a `citing_id,cited_id` CSV file (with header; `#` comment lines allowed).
pub fn parse_links(text: &str, file: &str) -> Result<Vec<CitationLink>, CorpusError> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let malformed = |line: u64, message: String| CorpusError::Malformed {
        file: file.to_string(),
        line,
        message,
    };
    let headers = reader
        .headers()
        .map_err(|e| malformed(1, e.to_string()))?
        .clone();
    if headers.len() < 2 || &headers[0] != "citing_id" || &headers[1] != "cited_id" {
        return Err(malformed(1, "expected header `citing_id,cited_id`".into()));
    }
    let mut out = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            malformed(line, e.to_string())
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.len() != 2 {
            return Err(malformed(line, format!("expected 2 fields, found {}", record.len())));
        }
        if record[0].is_empty() || record[1].is_empty() {
            return Err(malformed(line, "empty id".into()));
        }
        out.push(CitationLink::new(&record[0], &record[1]));
    }
    Ok(out)
}

fn read(path: &Path) -> Result<String, CorpusError> {
    fs::read_to_string(path).map_err(|e| CorpusError::io(path, e))
}

/// Read references and links from disk into a validated corpus.
///
/// Seeds come from `seeds_path` (one id per line) when given, otherwise from
/// references whose `source` is `seed`.
pub fn ingest(
    refs_path: &Path,
    links_path: &Path,
    seeds_path: Option<&Path>,
) -> Result<(Corpus, IngestDiagnostics), CorpusError> {
    let refs = parse_references(&read(refs_path)?, &refs_path.display().to_string())?;
    let links = parse_links(&read(links_path)?, &links_path.display().to_string())?;
    let seeds: Vec<String> = match seeds_path {
        Some(p) => read(p)?
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(String::from)
            .collect(),
        None => refs
            .iter()
            .filter(|r| r.source == "seed")
            .map(|r| r.id.clone())
            .collect(),
    };
    let links_read = links.len();
    let (corpus, report) = Corpus::build(refs, links, seeds)?;
    let diagnostics = IngestDiagnostics {
        references: corpus.len(),
        links_read,
        links_kept: corpus.links().len(),
        links: report,
    };
    Ok((corpus, diagnostics))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn malformed_json_reports_line() {
        let text = "{\"id\":\"a\",\"title\":\"A\"}\n\n{\"id\":\"b\",\n";
        match parse_references(text, "refs.jsonl") {
            Err(CorpusError::Malformed { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_title_is_malformed() {
        match parse_references("{\"id\":\"a\"}", "refs.jsonl") {
            Err(CorpusError::Malformed { line, .. }) => assert_eq!(line, 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bad_year_is_malformed() {
        let text = "{\"id\":\"a\",\"title\":\"A\",\"year\":3000}";
        assert!(matches!(
            parse_references(text, "r"),
            Err(CorpusError::Malformed { line: 1, .. })
        ));
    }

    #[test]
    fn links_header_and_rows() {
        let links = parse_links("# comment\nciting_id,cited_id\na,b\nb , c\n", "l").unwrap();
        assert_eq!(links, vec![CitationLink::new("a", "b"), CitationLink::new("b", "c")]);
        assert!(parse_links("from,to\na,b\n", "l").is_err());
        match parse_links("citing_id,cited_id\na,b\na,b,c\n", "l") {
            Err(CorpusError::Malformed { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn ingest_from_files() {
        let dir = tempfile::tempdir().unwrap();
        let refs = dir.path().join("refs.jsonl");
        let links = dir.path().join("links.csv");
        fs::write(
            &refs,
            "{\"id\":\"a\",\"title\":\"A\",\"source\":\"seed\"}\n{\"id\":\"b\",\"title\":\"B\"}\n{\"id\":\"c\",\"title\":\"C\"}\n",
        )
        .unwrap();
        fs::write(&links, "citing_id,cited_id\na,b\na,b\nb,c\nc,c\nc,x\n").unwrap();
        let (corpus, d) = ingest(&refs, &links, None).unwrap();
        assert_eq!(corpus.links().len(), 2);
        assert_eq!(d.links.duplicate_links, 1);
        assert_eq!(d.links.self_links, 1);
        assert_eq!(d.links.dangling_links, 1);
        assert_eq!(corpus.seed_ids().len(), 1);

        let dup = dir.path().join("dup.jsonl");
        fs::write(&dup, "{\"id\":\"a\",\"title\":\"A\"}\n{\"id\":\"a\",\"title\":\"B\"}\n").unwrap();
        assert!(matches!(
            ingest(&dup, &links, None),
            Err(CorpusError::DuplicateId(id)) if id == "a"
        ));
    }
}
