use std::collections::HashMap;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NgramError {
    #[error("n-gram order must be at least 1")]
    InvalidN,
}

/// Multiset of n-grams, keyed by the token sequence.
pub type NgramCounts = HashMap<Vec<String>, usize>;

/// All contiguous n-grams of `tokens` with multiplicity.
pub fn ngrams<S: AsRef<str>>(tokens: &[S], n: usize) -> Result<NgramCounts, NgramError> {
    if n == 0 {
        return Err(NgramError::InvalidN);
    }
    let mut counts = NgramCounts::new();
    for window in tokens.windows(n) {
        let key = window.iter().map(|s| s.as_ref().to_string()).collect();
        *counts.entry(key).or_insert(0) += 1;
    }
    Ok(counts)
}
