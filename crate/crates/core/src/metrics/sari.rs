use std::collections::{HashMap, HashSet};

use super::{f1, MetricError};
use crate::textproc::Document;

type Grams<'a> = HashMap<&'a [&'a str], f64>;

fn grams<'a>(terms: &'a [&'a str], n: usize, weight: f64) -> Grams<'a> {
    let mut out = Grams::new();
    for w in terms.windows(n) {
        *out.entry(w).or_insert(0.0) += weight;
    }
    out
}

fn intersect<'a>(a: &Grams<'a>, b: &Grams<'a>) -> Grams<'a> {
    a.iter()
        .filter_map(|(g, &x)| {
            let m = x.min(b.get(g).copied().unwrap_or(0.0));
            (m > 0.0).then_some((*g, m))
        })
        .collect()
}

fn subtract<'a>(a: &Grams<'a>, b: &Grams<'a>) -> Grams<'a> {
    a.iter()
        .filter_map(|(g, &x)| {
            let m = x - b.get(g).copied().unwrap_or(0.0);
            (m > 0.0).then_some((*g, m))
        })
        .collect()
}

/// (F_keep, P_del, F_add) for one n-gram order.
fn sari_ngram<'a>(input: &'a [&'a str], cand: &'a [&'a str], refs: &'a [Vec<&'a str>], n: usize) -> (f64, f64, f64) {
    let num_refs = refs.len() as f64;
    let mut r_counts = Grams::new();
    for r in refs {
        for (g, k) in grams(r, n, 1.0) {
            *r_counts.entry(g).or_insert(0.0) += k;
        }
    }
    let s_rep = grams(input, n, num_refs);
    let c_rep = grams(cand, n, num_refs);

    let keep = intersect(&s_rep, &c_rep);
    let keep_good = intersect(&keep, &r_counts);
    let keep_all = intersect(&s_rep, &r_counts);
    let get = |m: &Grams, g: &[&str]| m.get(g).copied().unwrap_or(0.0);
    let keep_p = if keep.is_empty() {
        1.0
    } else {
        keep.iter().map(|(g, k)| get(&keep_good, g) / k).sum::<f64>() / keep.len() as f64
    };
    let keep_r = if keep_all.is_empty() {
        1.0
    } else {
        keep.keys().map(|g| get(&keep_good, g)).sum::<f64>() / keep_all.values().sum::<f64>()
    };

    let del = subtract(&s_rep, &c_rep);
    let del_good = subtract(&del, &r_counts);
    let del_p = if del.is_empty() {
        1.0
    } else {
        del.iter().map(|(g, k)| get(&del_good, g) / k).sum::<f64>() / del.len() as f64
    };

    let s_set: HashSet<&[&str]> = s_rep.keys().copied().collect();
    let c_set: HashSet<&[&str]> = c_rep.keys().copied().collect();
    let r_set: HashSet<&[&str]> = r_counts.keys().copied().collect();
    let add: HashSet<_> = c_set.difference(&s_set).copied().collect();
    let add_good = add.intersection(&r_set).count() as f64;
    let add_all = r_set.difference(&s_set).count();
    let add_p = if add.is_empty() { 1.0 } else { add_good / add.len() as f64 };
    let add_r = if add_all == 0 { 1.0 } else { add_good / add_all as f64 };

    (f1(keep_p, keep_r), del_p, f1(add_p, add_r))
}

/// SARI on a 0..1 scale: the mean of F_keep, P_del and F_add, each averaged
/// over n = 1..4.
///
/// Input and candidate counts are scaled by the number of references so that
/// reference counts act as fractions. Components whose numerator and
/// denominator are both empty count as 1, so a candidate identical to input
/// and reference scores 1.
pub fn sari(input: &Document, candidate: &Document, references: &[Document]) -> Result<f64, MetricError> {
    if references.is_empty() {
        return Err(MetricError::NoReferences);
    }
    let s = input.terms();
    let c = candidate.terms();
    let refs: Vec<Vec<&str>> = references.iter().map(|r| r.terms()).collect();
    let (mut keep, mut del, mut add) = (0.0, 0.0, 0.0);
    for n in 1..=4 {
        let (k, d, a) = sari_ngram(&s, &c, &refs, n);
        keep += k;
        del += d;
        add += a;
    }
    Ok((keep / 4.0 + del / 4.0 + add / 4.0) / 3.0)
}
