//! Comment readability: Flesch Reading Ease over the unit's comments and
//! docstrings.
//!
//! `FRE = 206.835 - 1.015 * (words / sentences) - 84.6 * (syllables / words)`
//!
//! Sentences are runs of terminal punctuation (`.`, `!`, `?`), floored at one
//! when any word exists. Syllables use vowel-group counting with a silent-`e`
//! adjustment, floored at one per word. No comment text at all scores 0.

use super::SourceUnit;

/// Flesch Reading Ease of the concatenated comment/docstring text.
pub fn comment_readability(unit: &SourceUnit) -> f64 {
    let text = comment_text(unit);
    let words: Vec<&str> = text
        .split_whitespace()
        .filter(|w| w.chars().any(|c| c.is_alphanumeric()))
        .collect();
    if words.is_empty() {
        return 0.0;
    }
    let sentences = sentence_count(&text).max(1) as f64;
    let syllables: u64 = words.iter().map(|w| syllables_in(w)).sum();
    let word_count = words.len() as f64;
    206.835 - 1.015 * (word_count / sentences) - 84.6 * (syllables as f64 / word_count)
}

/// All comment and docstring text of the unit, newline-joined. Falls back to
/// pure `#`-comment lines when the unit did not parse.
pub(crate) fn comment_text(unit: &SourceUnit) -> String {
    let mut parts: Vec<String> = Vec::new();
    match unit.tree() {
        Some(tree) => {
            super::walk_nodes(tree, |node| {
                if node.kind() == "comment" {
                    parts.push(strip_comment_marker(&unit.text[node.byte_range()]));
                }
            });
            for (content, _) in super::text::docstring_spans(unit) {
                parts.push(content);
            }
        }
        None => {
            for line in unit.text.lines() {
                let trimmed = line.trim_start();
                if trimmed.starts_with('#') {
                    parts.push(strip_comment_marker(trimmed));
                }
            }
        }
    }
    parts.join("\n")
}

fn strip_comment_marker(comment: &str) -> String {
    comment.trim_start_matches('#').trim().to_string()
}

fn sentence_count(text: &str) -> u64 {
    let mut count = 0;
    let mut in_run = false;
    for c in text.chars() {
        if matches!(c, '.' | '!' | '?') {
            if !in_run {
                count += 1;
                in_run = true;
            }
        } else {
            in_run = false;
        }
    }
    count
}

/// Vowel-group syllable estimate with silent-`e` adjustment; at least 1.
fn syllables_in(word: &str) -> u64 {
    let letters: String = word
        .chars()
        .filter(|c| c.is_ascii_alphabetic())
        .collect::<String>()
        .to_ascii_lowercase();
    if letters.is_empty() {
        return 1;
    }
    let is_vowel = |c: u8| matches!(c, b'a' | b'e' | b'i' | b'o' | b'u' | b'y');
    let bytes = letters.as_bytes();
    let mut groups: u64 = 0;
    let mut prev_vowel = false;
    for &b in bytes {
        let v = is_vowel(b);
        if v && !prev_vowel {
            groups += 1;
        }
        prev_vowel = v;
    }
    if groups > 1 && letters.ends_with('e') && !letters.ends_with("le") {
        groups -= 1;
    }
    groups.max(1)
}
