use std::collections::HashSet;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::{Token, TokenKind};

/// Shipped abbreviation list, one lowercase entry per line.
pub const ABBREVIATIONS: &str = include_str!("../../data/abbreviations.txt");

const CLOSERS: &[&str] = &["\"", "'", ")", "]", "}", "\u{201D}", "\u{2019}", "\u{00BB}"];

/// Half-open range of token indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }
}

fn abbreviations() -> &'static HashSet<&'static str> {
    static SET: OnceLock<HashSet<&'static str>> = OnceLock::new();
    SET.get_or_init(|| {
        ABBREVIATIONS
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .collect()
    })
}

pub fn is_abbreviation(word_with_period: &str) -> bool {
    abbreviations().contains(word_with_period.to_lowercase().as_str())
}

fn is_terminal(t: &Token) -> bool {
    t.kind == TokenKind::Punctuation && matches!(t.surface.as_str(), "." | "!" | "?")
}

/// Segments a token stream into sentences.
///
/// A sentence ends after a run of `.`, `!` or `?` tokens plus any closing
/// quotes or brackets that follow it. A lone `.` directly after a listed
/// abbreviation is not a boundary. Trailing tokens without a terminator form
/// the last sentence.
pub fn split_sentences(tokens: &[Token]) -> Vec<Span> {
    let mut spans = Vec::new();
    let mut start = 0;
    let mut i = 0;
    while i < tokens.len() {
        if !is_terminal(&tokens[i]) {
            i += 1;
            continue;
        }
        if tokens[i].surface == "." && i > 0 && tokens[i - 1].kind == TokenKind::Word {
            let candidate = format!("{}.", tokens[i - 1].lowercase);
            let next_is_terminal = tokens.get(i + 1).is_some_and(is_terminal);
            if is_abbreviation(&candidate) && !next_is_terminal {
                i += 1;
                continue;
            }
        }
        let mut end = i + 1;
        while end < tokens.len() && is_terminal(&tokens[end]) {
            end += 1;
        }
        while end < tokens.len() && CLOSERS.contains(&tokens[end].surface.as_str()) {
            end += 1;
        }
        spans.push(Span { start, end });
        start = end;
        i = end;
    }
    if start < tokens.len() {
        spans.push(Span {
            start,
            end: tokens.len(),
        });
    }
    spans
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textproc::tokenize;

    fn spans(raw: &str) -> Vec<(usize, usize)> {
        split_sentences(&tokenize(raw))
            .into_iter()
            .map(|s| (s.start, s.end))
            .collect()
    }

    #[test]
    fn two_sentences() {
        assert_eq!(spans("Hi. Bye."), vec![(0, 2), (2, 4)]);
    }

    #[test]
    fn no_terminator_is_one_sentence() {
        assert_eq!(spans("no punctuation here"), vec![(0, 3)]);
    }

    #[test]
    fn empty_is_no_sentences() {
        assert!(split_sentences(&[]).is_empty());
    }

    #[test]
    fn abbreviations_do_not_split() {
        assert_eq!(spans("Mr. Smith left. He said e.g. this."), vec![(0, 5), (5, 11)]);
    }

    #[test]
    fn terminal_runs_and_closing_quotes() {
        // He said "wow?!" Then left.
        assert_eq!(spans("He said \"wow?!\" Then left."), vec![(0, 7), (7, 10)]);
        assert_eq!(spans("Wait... what"), vec![(0, 4), (4, 5)]);
    }

    #[test]
    fn list_has_about_fifty_entries() {
        let n = abbreviations().len();
        assert!((50..=70).contains(&n), "{n}");
        assert!(abbreviations().iter().all(|a| a.ends_with('.') && a.to_lowercase() == *a));
    }
}
