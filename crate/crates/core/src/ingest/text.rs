//! Identifier splitting and stopword filtering.

use std::collections::HashSet;
use std::sync::OnceLock;

const STOPWORDS: &str = include_str!("stopwords.txt");

fn stopwords() -> &'static HashSet<&'static str> {
    static SET: OnceLock<HashSet<&'static str>> = OnceLock::new();
    SET.get_or_init(|| {
        STOPWORDS
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .collect()
    })
}

pub fn is_stopword(word: &str) -> bool {
    word.chars().count() <= 1 || stopwords().contains(word)
}

/// Splits an identifier into lowercase words.
///
/// Boundaries are lower-to-upper transitions, any non-letter character, and
/// the last capital of an acronym run followed by a lowercase letter
/// (`parseHTTPResponse` gives `parse`, `http`, `response`). Digits and
/// punctuation are dropped.
pub fn split_camel_case(word: &str) -> Vec<String> {
    let mut out = Vec::new();
    for run in word.split(|c: char| !c.is_alphabetic()) {
        let chars: Vec<char> = run.chars().collect();
        let mut start = 0;
        for i in 1..chars.len() {
            let (prev, cur) = (chars[i - 1], chars[i]);
            let lower_to_upper = prev.is_lowercase() && cur.is_uppercase();
            let acronym_end =
                prev.is_uppercase() && cur.is_uppercase() && chars.get(i + 1).is_some_and(|n| n.is_lowercase());
            if lower_to_upper || acronym_end {
                out.push(chars[start..i].iter().collect::<String>().to_lowercase());
                start = i;
            }
        }
        if start < chars.len() {
            out.push(chars[start..].iter().collect::<String>().to_lowercase());
        }
    }
    out
}

/// Drops stopwords, Java keywords, accessor verbs and single characters.
pub fn remove_stopwords<S: AsRef<str>>(words: &[S]) -> Vec<String> {
    words
        .iter()
        .map(AsRef::as_ref)
        .filter(|w| !is_stopword(w))
        .map(str::to_string)
        .collect()
}
