use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::catalog::{FeatureCatalog, Matcher, Normalization, Slot, TokenClass};
use super::BiberError;
use crate::textproc::{Document, Token, TokenKind};

/// Per-feature rates for one text.
///
/// Most entries are occurrences per 1000 words; entries produced by
/// `Normalization::Raw` rules carry their statistic directly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub catalog_version: String,
    pub rates: Vec<f64>,
    pub doc_words: usize,
}

fn norm_form(t: &Token) -> String {
    t.lowercase.replace('\u{2019}', "'")
}

fn ends_with_any(word: &str, suffixes: &[String], min_stem: usize) -> bool {
    let len = word.chars().count();
    suffixes.iter().any(|s| {
        let s = s.replace('\u{2019}', "'");
        word.ends_with(&s) && len >= s.chars().count() + min_stem
    })
}

fn slot_matches(slot: &Slot, form: &str) -> bool {
    match slot {
        Slot::Any => true,
        Slot::Lexicon(words) => words.iter().any(|w| w == form),
        Slot::Suffix(suffixes) => ends_with_any(form, suffixes, 1),
    }
}

/// Tags `doc` with every rule in `catalog`.
pub fn extract_features(doc: &Document, catalog: &FeatureCatalog) -> Result<FeatureVector, BiberError> {
    let words = doc.word_count();
    if words == 0 {
        return Err(BiberError::EmptyDocument);
    }
    let tokens = doc.tokens();
    let forms: Vec<String> = tokens.iter().map(norm_form).collect();
    let word_forms: Vec<&str> = tokens
        .iter()
        .zip(&forms)
        .filter(|(t, _)| t.is_word())
        .map(|(_, f)| f.as_str())
        .collect();

    let rates = catalog
        .features
        .iter()
        .map(|rule| {
            let count = match &rule.matcher {
                Matcher::Lexicon { words } => {
                    let set: HashSet<&str> = words.iter().map(String::as_str).collect();
                    word_forms.iter().filter(|f| set.contains(**f)).count() as f64
                }
                Matcher::Suffix { suffixes, min_stem } => word_forms
                    .iter()
                    .filter(|f| ends_with_any(f, suffixes, *min_stem))
                    .count() as f64,
                Matcher::Bigram { first, second } => (1..tokens.len())
                    .filter(|&i| {
                        tokens[i - 1].is_word()
                            && tokens[i].is_word()
                            && slot_matches(first, &forms[i - 1])
                            && slot_matches(second, &forms[i])
                    })
                    .count() as f64,
                Matcher::Punctuation { chars } => tokens
                    .iter()
                    .filter(|t| t.kind == TokenKind::Punctuation && chars.contains(&t.surface))
                    .count() as f64,
                Matcher::TypeTokenRatio { window } => {
                    let head = &word_forms[..word_forms.len().min((*window).max(1))];
                    let types: HashSet<&&str> = head.iter().collect();
                    types.len() as f64 / head.len() as f64
                }
                Matcher::MeanWordLength => doc.char_count() as f64 / words as f64,
                Matcher::TokenClass { class, min_len } => tokens
                    .iter()
                    .filter(|t| match class {
                        TokenClass::Number => t.kind == TokenKind::Number,
                        TokenClass::Capitalized => {
                            t.is_word() && t.surface.chars().next().is_some_and(char::is_uppercase)
                        }
                        TokenClass::LongWord => {
                            t.is_word()
                                && t.surface.chars().filter(|c| c.is_alphanumeric()).count() >= *min_len
                        }
                    })
                    .count() as f64,
            };
            match rule.normalization {
                Normalization::Per1000Words => 1000.0 * count / words as f64,
                Normalization::Per1000Tokens => 1000.0 * count / tokens.len() as f64,
                Normalization::Raw => count,
            }
        })
        .collect();

    Ok(FeatureVector {
        catalog_version: catalog.version.clone(),
        rates,
        doc_words: words,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_rule(json_matcher: &str, norm: &str) -> FeatureCatalog {
        FeatureCatalog::from_json(&format!(
            r#"{{"version":"t","features":[{{"name":"f","matcher":{json_matcher},"normalization":"{norm}"}}]}}"#
        ))
        .unwrap()
    }

    #[test]
    fn first_person_rate() {
        let c = one_rule(
            r#"{"kind":"lexicon","words":["i","me","my","we","us","our"]}"#,
            "per_1000_words",
        );
        let fv = extract_features(&Document::new("I think you know."), &c).unwrap();
        assert_eq!(fv.rates, vec![250.0]);
        assert_eq!(fv.doc_words, 4);
    }

    #[test]
    fn absent_feature_is_zero() {
        let c = one_rule(r#"{"kind":"lexicon","words":["zebra"]}"#, "per_1000_words");
        let fv = extract_features(&Document::new("nothing to see"), &c).unwrap();
        assert_eq!(fv.rates, vec![0.0]);
    }

    #[test]
    fn empty_document() {
        let c = FeatureCatalog::builtin();
        assert_eq!(
            extract_features(&Document::new(""), &c),
            Err(BiberError::EmptyDocument)
        );
        assert_eq!(
            extract_features(&Document::new("?! 42"), &c),
            Err(BiberError::EmptyDocument)
        );
    }

    #[test]
    fn punctuation_normalizes_by_tokens() {
        let c = one_rule(r#"{"kind":"punctuation","chars":["?"]}"#, "per_1000_tokens");
        // tokens: why ? really ? -> 2 of 4
        let fv = extract_features(&Document::new("why? really?"), &c).unwrap();
        assert_eq!(fv.rates, vec![500.0]);
    }

    #[test]
    fn bigram_and_suffix_rules() {
        let c = one_rule(
            r#"{"kind":"bigram","first":{"lexicon":["think"]},"second":{"lexicon":["you","it"]}}"#,
            "per_1000_words",
        );
        // "think, you" is broken by punctuation and does not count
        let fv = extract_features(&Document::new("I think you know. I think, you see. think it"), &c).unwrap();
        assert_eq!(fv.rates, vec![1000.0 * 2.0 / 10.0]);

        let c = one_rule(r#"{"kind":"suffix","suffixes":["n't"],"min_stem":1}"#, "per_1000_words");
        let fv = extract_features(&Document::new("I don’t and can't but won"), &c).unwrap();
        assert_eq!(fv.rates, vec![1000.0 * 2.0 / 6.0]);
    }

    #[test]
    fn ratio_features() {
        let c = one_rule(r#"{"kind":"type_token_ratio","window":3}"#, "raw");
        let fv = extract_features(&Document::new("a a b c c"), &c).unwrap();
        assert!((fv.rates[0] - 2.0 / 3.0).abs() < 1e-15);
        let c = one_rule(r#"{"kind":"mean_word_length"}"#, "raw");
        let fv = extract_features(&Document::new("ab abcd, 7"), &c).unwrap();
        assert_eq!(fv.rates, vec![3.0]);
    }

    #[test]
    fn builtin_rates_are_finite_and_nonnegative() {
        let c = FeatureCatalog::builtin();
        let fv = extract_features(
            &Document::new("Well, I think you're right! The committee's recommendations, however, were NOT implemented in 2019."),
            &c,
        )
        .unwrap();
        assert_eq!(fv.rates.len(), c.len());
        assert!(fv.rates.iter().all(|r| r.is_finite() && *r >= 0.0));
        let idx = |n: &str| c.names().iter().position(|x| *x == n).unwrap();
        assert!(fv.rates[idx("first_person_pronouns")] > 0.0);
        assert!(fv.rates[idx("nominalizations")] > 0.0);
        assert!(fv.rates[idx("numbers")] > 0.0);
        assert!(fv.rates[idx("exclamation_marks")] > 0.0);
    }
}
