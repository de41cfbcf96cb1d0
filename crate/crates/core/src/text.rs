//! Small text helpers shared by the corpus and catalog layers.

/// Normalize a title for cross-source matching.
///
/// Lowercases (Unicode-aware), replaces every non-alphanumeric character with
/// a space and collapses runs of whitespace.
pub fn normalize_title(title: &str) -> String {
    let mut out = String::with_capacity(title.len());
    let mut pending_space = false;
    for ch in title.chars() {
        if ch.is_alphanumeric() {
            if pending_space && !out.is_empty() {
                out.push(' ');
            }
            pending_space = false;
            out.extend(ch.to_lowercase());
        } else {
            pending_space = true;
        }
    }
    out
}

/// Collapse internal whitespace and trim.
pub fn collapse_whitespace(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn punctuation_and_case_vanish() {
        assert_eq!(normalize_title("Urban Growth."), "urban growth");
        assert_eq!(normalize_title("  urban   growth "), "urban growth");
        assert_eq!(normalize_title("Scale-free networks"), "scale free networks");
        assert_eq!(normalize_title("Évolution des Villes"), "évolution des villes");
        assert_eq!(normalize_title("!!!"), "");
    }

    #[test]
    fn collapse() {
        assert_eq!(collapse_whitespace("  a \t b\n"), "a b");
    }
}
