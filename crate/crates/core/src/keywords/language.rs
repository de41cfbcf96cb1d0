//! Tokenization and stop-word language detection.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::KeywordError;

const STOPWORDS_EN: &str = include_str!("../../data/stopwords_en.txt");
const STOPWORDS_FR: &str = include_str!("../../data/stopwords_fr.txt");

/// SHA-256 of the embedded stop-word files, as shipped.
pub const STOPWORDS_EN_SHA256: &str = "6288660e8756eecc0cf36df88397135201da743f9caf45e74a94351347f6e4af";
pub const STOPWORDS_FR_SHA256: &str = "e3a8fc29a81f1a21f3653cc0a134e50959b50cbd133bb300fb2e072fcc1b393c";

/// Minimal stop-word fraction for a language to be recognized.
pub const DETECTION_THRESHOLD: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Language {
    En,
    Fr,
}

impl Language {
    pub const ALL: [Language; 2] = [Language::En, Language::Fr];

    pub fn code(self) -> &'static str {
        match self {
            Language::En => "en",
            Language::Fr => "fr",
        }
    }

    pub fn stopwords(self) -> &'static HashSet<&'static str> {
        static EN: OnceLock<HashSet<&str>> = OnceLock::new();
        static FR: OnceLock<HashSet<&str>> = OnceLock::new();
        let (cell, raw) = match self {
            Language::En => (&EN, STOPWORDS_EN),
            Language::Fr => (&FR, STOPWORDS_FR),
        };
        cell.get_or_init(|| raw.lines().map(str::trim).filter(|l| !l.is_empty()).collect())
    }

    pub fn is_stopword(self, word: &str) -> bool {
        self.stopwords().contains(word)
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Language {
    type Err = KeywordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "en" => Ok(Language::En),
            "fr" => Ok(Language::Fr),
            other => Err(KeywordError::UnsupportedLanguage(other.to_string())),
        }
    }
}

/// Hex SHA-256 of the embedded stop-word lists, in `Language::ALL` order.
pub fn stopword_checksums() -> [(Language, String); 2] {
    let digest = |s: &str| hex::encode(Sha256::digest(s.as_bytes()));
    [
        (Language::En, digest(STOPWORDS_EN)),
        (Language::Fr, digest(STOPWORDS_FR)),
    ]
}

/// Lowercase word tokens: split on every non-letter, drop tokens shorter
/// than two letters.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphabetic())
        .filter(|t| t.chars().count() >= 2)
        .map(str::to_lowercase)
        .collect()
}

/// Split on sentence punctuation, then tokenize each sentence.
pub fn sentences(text: &str) -> Vec<Vec<String>> {
    text.split(['.', '!', '?', ';', ':'])
        .map(tokenize)
        .filter(|s| !s.is_empty())
        .collect()
}

/// The language whose stop words make up the largest share of the tokens,
/// if that share reaches [`DETECTION_THRESHOLD`]. Ties go to English.
pub fn detect_language(text: &str) -> Option<Language> {
    detect_tokens(&tokenize(text))
}

pub(crate) fn detect_tokens(tokens: &[String]) -> Option<Language> {
    if tokens.is_empty() {
        return None;
    }
    let mut best: Option<(Language, f64)> = None;
    for lang in Language::ALL {
        let hits = tokens.iter().filter(|t| lang.is_stopword(t)).count();
        let score = hits as f64 / tokens.len() as f64;
        if score >= DETECTION_THRESHOLD && best.is_none_or(|(_, s)| score > s) {
            best = Some((lang, score));
        }
    }
    best.map(|(l, _)| l)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn detects_languages() {
        assert_eq!(detect_language("the model of the city and its growth"), Some(Language::En));
        assert_eq!(detect_language("la ville et le modèle de la croissance"), Some(Language::Fr));
        assert_eq!(detect_language("zxqv qqq"), None);
        assert_eq!(detect_language(""), None);
    }

    #[test]
    fn tokenizer_splits_hyphens_and_drops_short() {
        assert_eq!(tokenize("Scale-free networks, a 2x test"), vec!["scale", "free", "networks", "test"]);
        assert_eq!(sentences("One two. Three; x").len(), 2);
    }

    #[test]
    fn checksums_match_shipped_lists() {
        let [(_, en), (_, fr)] = stopword_checksums();
        assert_eq!(en, STOPWORDS_EN_SHA256);
        assert_eq!(fr, STOPWORDS_FR_SHA256);
        assert!((100..=200).contains(&Language::En.stopwords().len()));
        assert!((100..=200).contains(&Language::Fr.stopwords().len()));
    }
}
