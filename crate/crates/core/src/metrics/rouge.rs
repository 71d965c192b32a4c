use std::collections::HashMap;

use super::f1;
use crate::textproc::Document;

pub(crate) fn counts<'a>(terms: &'a [&'a str], n: usize) -> HashMap<&'a [&'a str], usize> {
    let mut out = HashMap::new();
    if n == 0 {
        return out;
    }
    for w in terms.windows(n) {
        *out.entry(w).or_insert(0) += 1;
    }
    out
}

/// ROUGE-N F1 with clipped n-gram matches.
pub fn rouge_n(candidate: &Document, reference: &Document, n: usize) -> f64 {
    let (c, r) = (candidate.terms(), reference.terms());
    let (cc, rc) = (counts(&c, n), counts(&r, n));
    let c_total: usize = cc.values().sum();
    let r_total: usize = rc.values().sum();
    if c_total == 0 || r_total == 0 {
        return 0.0;
    }
    let overlap: usize = cc
        .iter()
        .map(|(g, &k)| k.min(rc.get(g).copied().unwrap_or(0)))
        .sum();
    f1(overlap as f64 / c_total as f64, overlap as f64 / r_total as f64)
}

pub(crate) fn lcs_len(a: &[&str], b: &[&str]) -> usize {
    let mut prev = vec![0usize; b.len() + 1];
    let mut cur = vec![0usize; b.len() + 1];
    for x in a {
        for (j, y) in b.iter().enumerate() {
            cur[j + 1] = if x == y {
                prev[j] + 1
            } else {
                prev[j + 1].max(cur[j])
            };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// ROUGE-L F1 from the longest common subsequence.
pub fn rouge_l(candidate: &Document, reference: &Document) -> f64 {
    let (c, r) = (candidate.terms(), reference.terms());
    if c.is_empty() || r.is_empty() {
        return 0.0;
    }
    let l = lcs_len(&c, &r) as f64;
    f1(l / c.len() as f64, l / r.len() as f64)
}

/// ROUGE-1, ROUGE-2 and ROUGE-L of `output` with `target` as the reference.
pub fn overlap_rouge(output: &Document, target: &Document) -> (f64, f64, f64) {
    (
        rouge_n(output, target, 1),
        rouge_n(output, target, 2),
        rouge_l(output, target),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d(s: &str) -> Document {
        Document::new(s)
    }

    #[test]
    fn hand_examples() {
        assert_eq!(rouge_n(&d("the cat sat"), &d("The cat sat."), 1), 1.0);
        assert_eq!(rouge_n(&d("a b"), &d("c d"), 1), 0.0);
        assert!((rouge_n(&d("a b c"), &d("a b d"), 1) - 2.0 / 3.0).abs() < 1e-15);
        assert!((rouge_l(&d("a x b"), &d("a b")) - 0.8).abs() < 1e-15);
        assert_eq!(rouge_l(&d(""), &d("a b")), 0.0);
        assert_eq!(overlap_rouge(&d("a b"), &d("a c")), (0.5, 0.0, 0.5));
        assert_eq!(overlap_rouge(&d("x y"), &d("p q")), (0.0, 0.0, 0.0));
    }

    proptest! {
        #[test]
        fn symmetric_and_self_identical(a in "[a-d]( [a-d]){0,7}", b in "[a-d]( [a-d]){0,7}") {
            let (da, db) = (d(&a), d(&b));
            for n in 1..=2 {
                prop_assert!((rouge_n(&da, &db, n) - rouge_n(&db, &da, n)).abs() < 1e-15);
            }
            prop_assert!((rouge_l(&da, &db) - rouge_l(&db, &da)).abs() < 1e-15);
            let (r1, r2, rl) = overlap_rouge(&da, &da);
            prop_assert_eq!(r1, 1.0);
            prop_assert_eq!(rl, 1.0);
            if da.terms().len() >= 2 { prop_assert_eq!(r2, 1.0); }
        }
    }
}
