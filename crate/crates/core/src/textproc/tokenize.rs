use super::{Token, TokenKind};

const UNICODE_PUNCTUATION: &str = "\u{2018}\u{2019}\u{201C}\u{201D}\u{2013}\u{2014}\u{2026}\u{00AB}\u{00BB}\u{00A1}\u{00BF}\u{2022}";

fn is_punctuation_char(c: char) -> bool {
    (c.is_ascii_punctuation() && !"$+<=>^`|~".contains(c)) || UNICODE_PUNCTUATION.contains(c)
}

pub(super) fn classify(surface: &str) -> TokenKind {
    if surface.chars().any(char::is_alphabetic) {
        TokenKind::Word
    } else if surface.chars().any(|c| c.is_ascii_digit() || c.is_numeric()) {
        TokenKind::Number
    } else if !surface.is_empty() && surface.chars().all(is_punctuation_char) {
        TokenKind::Punctuation
    } else {
        TokenKind::Symbol
    }
}

/// Splits `raw` into tokens.
///
/// Whitespace separates chunks. Every non-alphanumeric character at either end
/// of a chunk becomes its own token; everything between the first and last
/// alphanumeric character (apostrophes, hyphens, inner periods) stays in one.
pub fn tokenize(raw: &str) -> Vec<Token> {
    let mut out = Vec::new();
    for chunk in raw.split_whitespace() {
        let chars: Vec<(usize, char)> = chunk.char_indices().collect();
        let first = chars.iter().position(|(_, c)| c.is_alphanumeric());
        let Some(first) = first else {
            out.extend(chars.iter().map(|(_, c)| Token::new(c.to_string())));
            continue;
        };
        let last = chars.iter().rposition(|(_, c)| c.is_alphanumeric()).unwrap();
        out.extend(chars[..first].iter().map(|(_, c)| Token::new(c.to_string())));
        let start = chars[first].0;
        let end = chars[last].0 + chars[last].1.len_utf8();
        out.push(Token::new(&chunk[start..end]));
        out.extend(chars[last + 1..].iter().map(|(_, c)| Token::new(c.to_string())));
    }
    out
}
