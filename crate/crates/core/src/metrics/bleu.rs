use std::collections::HashMap;

use super::rouge::counts;
use super::MetricError;
use crate::textproc::Document;

/// Sentence BLEU over n = 1..4 against one or more references.
///
/// Modified precisions clip each n-gram count by its maximum count in any
/// single reference. A zero precision for n >= 2 is replaced by
/// `(0 + 1) / (total + 1)`; a zero unigram precision gives 0. The brevity
/// penalty `exp(1 - r/c)` applies when the candidate is shorter than the
/// closest reference length (ties prefer the shorter reference). An empty
/// candidate scores 0.
pub fn bleu(candidate: &Document, references: &[Document]) -> Result<f64, MetricError> {
    if references.is_empty() {
        return Err(MetricError::NoReferences);
    }
    let c = candidate.terms();
    if c.is_empty() {
        return Ok(0.0);
    }
    let refs: Vec<Vec<&str>> = references.iter().map(|r| r.terms()).collect();

    let mut log_sum = 0.0;
    for n in 1..=4 {
        let cand = counts(&c, n);
        let mut max_ref: HashMap<&[&str], usize> = HashMap::new();
        for r in &refs {
            for (g, k) in counts(r, n) {
                let e = max_ref.entry(g).or_insert(0);
                *e = (*e).max(k);
            }
        }
        let total: usize = cand.values().sum();
        let clipped: usize = cand
            .iter()
            .map(|(g, &k)| k.min(max_ref.get(g).copied().unwrap_or(0)))
            .sum();
        let p = if clipped > 0 {
            clipped as f64 / total as f64
        } else if n == 1 {
            return Ok(0.0);
        } else {
            1.0 / (total as f64 + 1.0)
        };
        log_sum += p.ln();
    }
    let geo = (log_sum / 4.0).exp();

    let c_len = c.len();
    let r_len = refs
        .iter()
        .map(Vec::len)
        .min_by_key(|&l| (l.abs_diff(c_len), l))
        .unwrap();
    let bp = if c_len < r_len {
        (1.0 - r_len as f64 / c_len as f64).exp()
    } else {
        1.0
    };
    Ok(bp * geo)
}
