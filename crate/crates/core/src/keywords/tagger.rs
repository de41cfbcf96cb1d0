//! Part-of-speech tagging and stemming.

use std::collections::HashMap;
use std::fmt;
use std::io::{BufRead, BufReader, Write};
use std::process::{Command, Stdio};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::language::Language;
use super::{porter, KeywordError};

const LEXICON_EN: &str = include_str!("../../data/lexicon_en.tsv");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Tag {
    Noun,
    Adj,
    Ger,
    Other,
}

impl Tag {
    pub fn as_str(self) -> &'static str {
        match self {
            Tag::Noun => "NOUN",
            Tag::Adj => "ADJ",
            Tag::Ger => "GER",
            Tag::Other => "OTHER",
        }
    }

    pub fn parse(s: &str) -> Option<Tag> {
        match s {
            "NOUN" => Some(Tag::Noun),
            "ADJ" => Some(Tag::Adj),
            "GER" => Some(Tag::Ger),
            "OTHER" => Some(Tag::Other),
            _ => None,
        }
    }

    /// Map a foreign tag set (Penn Treebank, TreeTagger French) onto ours.
    pub fn from_external(tag: &str) -> Tag {
        let t = tag.trim();
        if let Some(own) = Tag::parse(t) {
            return own;
        }
        if t == "VBG" || t == "VER:ppre" {
            Tag::Ger
        } else if t.starts_with("NN") || t == "NOM" || t == "NAM" {
            Tag::Noun
        } else if t.starts_with("JJ") || t == "ADJ" {
            Tag::Adj
        } else {
            Tag::Other
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaggedToken {
    pub surface: String,
    pub stem: String,
    pub tag: Tag,
}

/// Tags whole documents given as tokenized sentences.
pub trait Tagger: Sync {
    fn tag(&self, sentences: &[Vec<String>], language: Language) -> Result<Vec<Vec<TaggedToken>>, KeywordError>;

    /// Short description recorded in output metadata.
    fn name(&self) -> String;
}

fn default_stem(token: &str, language: Language) -> String {
    match language {
        Language::En => porter::stem(token),
        Language::Fr => token.to_string(),
    }
}

/// Bundled English tagger: word lexicon first, then suffix rules, else NOUN.
/// French tokens are tagged OTHER.
#[derive(Debug, Clone, Copy, Default)]
pub struct LexiconTagger;

fn lexicon() -> &'static HashMap<&'static str, Tag> {
    static LEXICON: OnceLock<HashMap<&str, Tag>> = OnceLock::new();
    LEXICON.get_or_init(|| {
        LEXICON_EN
            .lines()
            .filter_map(|l| {
                let (w, t) = l.split_once('\t')?;
                Some((w, Tag::parse(t.trim())?))
            })
            .collect()
    })
}

impl LexiconTagger {
    pub fn tag_word(&self, token: &str, language: Language) -> Tag {
        if language != Language::En || Language::En.is_stopword(token) {
            return Tag::Other;
        }
        if let Some(&t) = lexicon().get(token) {
            return t;
        }
        if token.ends_with("ing") {
            Tag::Ger
        } else if ["ous", "al", "ive", "ic"].iter().any(|s| token.ends_with(s)) {
            Tag::Adj
        } else {
            Tag::Noun
        }
    }

    pub fn lexicon_size() -> usize {
        lexicon().len()
    }
}

impl Tagger for LexiconTagger {
    fn tag(&self, sentences: &[Vec<String>], language: Language) -> Result<Vec<Vec<TaggedToken>>, KeywordError> {
        Ok(sentences
            .iter()
            .map(|s| {
                s.iter()
                    .map(|t| TaggedToken {
                        surface: t.clone(),
                        stem: default_stem(t, language),
                        tag: self.tag_word(t, language),
                    })
                    .collect()
            })
            .collect())
    }

    fn name(&self) -> String {
        "lexicon".into()
    }
}

/// Line-oriented subprocess tagger.
///
/// Input: one token per line, blank line after each sentence. Output: one
/// line `token<TAB>tag[<TAB>lemma]` per input token; blank lines are ignored.
/// A lemma other than `<unknown>` replaces the built-in stem. Languages not
/// listed in `languages` fall back to [`LexiconTagger`].
#[derive(Debug, Clone)]
pub struct ExternalTagger {
    pub program: String,
    pub args: Vec<String>,
    pub languages: Vec<Language>,
}

impl ExternalTagger {
    pub fn new(program: impl Into<String>, args: Vec<String>, languages: Vec<Language>) -> Self {
        Self {
            program: program.into(),
            args,
            languages,
        }
    }

    fn run(&self, sentences: &[Vec<String>], language: Language) -> Result<Vec<Vec<TaggedToken>>, KeywordError> {
        let failed = |message: String| KeywordError::Tagger {
            program: self.program.clone(),
            message,
        };
        let mut child = Command::new(&self.program)
            .args(&self.args)
            .env("SCHOLNET_LANG", language.code())
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::null())
            .spawn()
            .map_err(|e| failed(e.to_string()))?;
        let mut input = String::new();
        for s in sentences {
            for t in s {
                input.push_str(t);
                input.push('\n');
            }
            input.push('\n');
        }
        let mut stdin = child.stdin.take().expect("piped stdin");
        let writer = std::thread::spawn(move || stdin.write_all(input.as_bytes()));
        let stdout = child.stdout.take().expect("piped stdout");
        let mut lines = Vec::new();
        for line in BufReader::new(stdout).lines() {
            let line = line.map_err(|e| failed(e.to_string()))?;
            if !line.trim().is_empty() {
                lines.push(line);
            }
        }
        writer
            .join()
            .expect("writer thread")
            .map_err(|e| failed(format!("writing tokens: {e}")))?;
        let status = child.wait().map_err(|e| failed(e.to_string()))?;
        if !status.success() {
            return Err(failed(format!("exited with {status}")));
        }
        let expected: usize = sentences.iter().map(Vec::len).sum();
        if lines.len() != expected {
            return Err(failed(format!("expected {expected} tagged lines, got {}", lines.len())));
        }
        let mut out = Vec::with_capacity(sentences.len());
        let mut it = lines.into_iter();
        for s in sentences {
            let mut tagged = Vec::with_capacity(s.len());
            for token in s {
                let line = it.next().expect("counted");
                let mut cols = line.split('\t');
                let _echo = cols.next();
                let tag = cols
                    .next()
                    .map(Tag::from_external)
                    .ok_or_else(|| failed(format!("missing tag in line {line:?}")))?;
                let stem = match cols.next().map(str::trim) {
                    Some(l) if !l.is_empty() && l != "<unknown>" => l.to_lowercase(),
                    _ => default_stem(token, language),
                };
                tagged.push(TaggedToken {
                    surface: token.clone(),
                    stem,
                    tag,
                });
            }
            out.push(tagged);
        }
        Ok(out)
    }
}

impl Tagger for ExternalTagger {
    fn tag(&self, sentences: &[Vec<String>], language: Language) -> Result<Vec<Vec<TaggedToken>>, KeywordError> {
        if self.languages.contains(&language) {
            self.run(sentences, language)
        } else {
            LexiconTagger.tag(sentences, language)
        }
    }

    fn name(&self) -> String {
        format!("external:{}", self.program)
    }
}
