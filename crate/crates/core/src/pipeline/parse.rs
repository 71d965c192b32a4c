const QUOTE_PAIRS: [(char, char); 4] = [('"', '"'), ('\'', '\''), ('\u{201C}', '\u{201D}'), ('\u{2018}', '\u{2019}')];

fn strip_quote_pair(s: &str) -> &str {
    for (open, close) in QUOTE_PAIRS {
        if let Some(inner) = s.strip_prefix(open).and_then(|r| r.strip_suffix(close)) {
            return inner;
        }
    }
    s
}

const LABEL: &str = "rewritten text:";

/// Cleans a rewrite response: trims whitespace, drops a leading
/// "Rewritten text:" label (any case), then one matched pair of surrounding
/// quotes.
pub fn trim_response(raw: &str) -> String {
    let mut s = raw.trim();
    if s.len() >= LABEL.len() && s.is_char_boundary(LABEL.len()) && s[..LABEL.len()].eq_ignore_ascii_case(LABEL) {
        s = s[LABEL.len()..].trim_start();
    }
    strip_quote_pair(s).trim().to_string()
}

fn strip_bullet(s: &str) -> &str {
    let s = s.trim_start_matches(['-', '*', '\u{2022}', '\u{2013}']).trim_start();
    let digits = s.chars().take_while(char::is_ascii_digit).count();
    if digits > 0 {
        if let Some(rest) = s[digits..].strip_prefix(['.', ')']) {
            return rest.trim_start();
        }
    }
    s
}

/// Splits a descriptor listing on commas and newlines, strips list bullets,
/// numbering, quotes, a leading "and" and trailing periods, lowercases, drops
/// empties and removes repeats (first occurrence kept).
pub fn parse_descriptors(raw: &str) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for item in raw.split([',', '\n']) {
        let mut s = strip_bullet(item.trim()).trim();
        s = strip_quote_pair(s).trim();
        s = s.trim_end_matches('.').trim_end();
        s = strip_quote_pair(s).trim();
        let lower = s.to_lowercase();
        let word = lower.strip_prefix("and ").unwrap_or(&lower).trim().to_string();
        if !word.is_empty() && !out.contains(&word) {
            out.push(word);
        }
    }
    out
}

/// A response that repeats the prompt it was given is probably an echo
/// rather than a rewrite.
pub fn is_suspect(response: &str, prompt: &str) -> bool {
    !prompt.is_empty() && response.contains(prompt)
}
