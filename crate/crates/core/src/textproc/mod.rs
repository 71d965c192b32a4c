//! Deterministic text processing shared by the metrics and the register tagger.

mod ngrams;
mod porter;
mod sentences;
mod syllables;
mod tokenize;

use serde::{Deserialize, Serialize};

pub use ngrams::{ngrams, NgramCounts, NgramError};
pub use porter::stem;
pub use sentences::{is_abbreviation, split_sentences, Span, ABBREVIATIONS};
pub use syllables::count_syllables;
pub use tokenize::tokenize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TokenKind {
    Word,
    Punctuation,
    Number,
    Symbol,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    pub kind: TokenKind,
    pub lowercase: String,
}

impl Token {
    pub fn new(surface: impl Into<String>) -> Self {
        let surface = surface.into();
        let kind = tokenize::classify(&surface);
        let lowercase = surface.to_lowercase();
        Token {
            surface,
            kind,
            lowercase,
        }
    }

    pub fn is_word(&self) -> bool {
        self.kind == TokenKind::Word
    }

    /// Words and numbers: the terms compared by the overlap metrics.
    pub fn is_term(&self) -> bool {
        matches!(self.kind, TokenKind::Word | TokenKind::Number)
    }
}

/// A text with its tokenization and sentence structure cached.
#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    raw: String,
    tokens: Vec<Token>,
    sentences: Vec<Span>,
    word_count: usize,
    char_count: usize,
}

impl Document {
    pub fn new(raw: impl Into<String>) -> Self {
        let raw = raw.into();
        let tokens = tokenize(&raw);
        let sentences = split_sentences(&tokens);
        let words = tokens.iter().filter(|t| t.is_word());
        let word_count = words.clone().count();
        let char_count = words
            .map(|t| t.surface.chars().filter(|c| c.is_alphanumeric()).count())
            .sum();
        Document {
            raw,
            tokens,
            sentences,
            word_count,
            char_count,
        }
    }

    pub fn raw(&self) -> &str {
        &self.raw
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn sentences(&self) -> &[Span] {
        &self.sentences
    }

    /// Number of word tokens (punctuation, numbers and symbols excluded).
    pub fn word_count(&self) -> usize {
        self.word_count
    }

    /// Letters and digits inside word tokens.
    pub fn char_count(&self) -> usize {
        self.char_count
    }

    pub fn words(&self) -> impl Iterator<Item = &Token> {
        self.tokens.iter().filter(|t| t.is_word())
    }

    /// Lowercased word and number tokens, in order.
    pub fn terms(&self) -> Vec<&str> {
        self.tokens
            .iter()
            .filter(|t| t.is_term())
            .map(|t| t.lowercase.as_str())
            .collect()
    }

    pub fn syllable_count(&self) -> usize {
        self.words().map(|t| count_syllables(&t.surface)).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.word_count == 0 || self.sentences.is_empty()
    }
}

impl From<&str> for Document {
    fn from(raw: &str) -> Self {
        Document::new(raw)
    }
}
