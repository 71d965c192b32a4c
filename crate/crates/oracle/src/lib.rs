//! Brute-force reference implementations used to cross-check `regstyle`.
//!
//! Everything here trades speed for obviousness: n-gram counts come from
//! linear scans, the longest common subsequence from subset enumeration, and
//! METEOR alignments from enumerating every one-to-one partial matching. Inputs
//! are plain lowercase term lists, so nothing depends on the main crate.

/// Number of occurrences of `gram` in `terms`.
fn occurrences(terms: &[&str], gram: &[&str]) -> usize {
    if gram.len() > terms.len() {
        return 0;
    }
    (0..=terms.len() - gram.len())
        .filter(|&i| &terms[i..i + gram.len()] == gram)
        .count()
}

/// Distinct n-grams of `terms` in first-occurrence order.
fn distinct<'a>(terms: &'a [&'a str], n: usize) -> Vec<&'a [&'a str]> {
    let mut out: Vec<&[&str]> = Vec::new();
    if n == 0 || n > terms.len() {
        return out;
    }
    for i in 0..=terms.len() - n {
        let g = &terms[i..i + n];
        if !out.contains(&g) {
            out.push(g);
        }
    }
    out
}

fn total_grams(terms: &[&str], n: usize) -> usize {
    (terms.len() + 1).saturating_sub(n)
}

fn harmonic(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

pub fn rouge_n(cand: &[&str], reference: &[&str], n: usize) -> f64 {
    let (tc, tr) = (total_grams(cand, n), total_grams(reference, n));
    if tc == 0 || tr == 0 {
        return 0.0;
    }
    let hits: usize = distinct(cand, n)
        .into_iter()
        .map(|g| occurrences(cand, g).min(occurrences(reference, g)))
        .sum();
    harmonic(hits as f64 / tc as f64, hits as f64 / tr as f64)
}

fn is_subsequence(needle: &[&str], hay: &[&str]) -> bool {
    let mut it = hay.iter();
    needle.iter().all(|w| it.any(|h| h == w))
}

/// LCS length by trying every subset of the shorter side. Inputs beyond 20
/// terms are rejected.
pub fn lcs_len(a: &[&str], b: &[&str]) -> usize {
    let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    assert!(short.len() <= 20, "oracle LCS is exponential");
    let mut best = 0;
    for mask in 0u32..(1 << short.len()) {
        let k = mask.count_ones() as usize;
        if k <= best {
            continue;
        }
        let sub: Vec<&str> = (0..short.len())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| short[i])
            .collect();
        if is_subsequence(&sub, long) {
            best = k;
        }
    }
    best
}

pub fn rouge_l(cand: &[&str], reference: &[&str]) -> f64 {
    if cand.is_empty() || reference.is_empty() {
        return 0.0;
    }
    let l = lcs_len(cand, reference) as f64;
    harmonic(l / cand.len() as f64, l / reference.len() as f64)
}

/// Sentence BLEU, n = 1..4, max-reference clipping, add-one smoothing of zero
/// higher-order precisions, closest-reference brevity penalty.
pub fn bleu(cand: &[&str], refs: &[Vec<&str>]) -> f64 {
    assert!(!refs.is_empty());
    if cand.is_empty() {
        return 0.0;
    }
    let mut precisions = Vec::new();
    for n in 1..=4 {
        let total = total_grams(cand, n);
        let clipped: usize = distinct(cand, n)
            .into_iter()
            .map(|g| {
                let allowed = refs.iter().map(|r| occurrences(r, g)).max().unwrap();
                occurrences(cand, g).min(allowed)
            })
            .sum();
        let p = match (clipped, n) {
            (0, 1) => return 0.0,
            (0, _) => 1.0 / (total as f64 + 1.0),
            _ => clipped as f64 / total as f64,
        };
        precisions.push(p);
    }
    let geo = precisions.iter().product::<f64>().powf(0.25);
    let c = cand.len();
    let mut r = refs[0].len();
    for other in refs {
        let l = other.len();
        if l.abs_diff(c) < r.abs_diff(c) || (l.abs_diff(c) == r.abs_diff(c) && l < r) {
            r = l;
        }
    }
    let bp = if c < r { (1.0 - r as f64 / c as f64).exp() } else { 1.0 };
    bp * geo
}

/// SARI on a 0..1 scale, following the widely used reference implementation:
/// input and candidate counts are multiplied by the number of references, the
/// keep recall divides by the kept-and-wanted total, deletion is scored by
/// precision only, addition uses n-gram sets, and any component whose
/// numerator and denominator are both empty counts as 1.
pub fn sari(input: &[&str], cand: &[&str], refs: &[Vec<&str>]) -> f64 {
    assert!(!refs.is_empty());
    let m = refs.len() as f64;
    let mut sums = [0.0f64; 3];
    for n in 1..=4 {
        let mut universe: Vec<&[&str]> = distinct(input, n);
        for g in distinct(cand, n).into_iter().chain(refs.iter().flat_map(|r| distinct(r, n))) {
            if !universe.contains(&g) {
                universe.push(g);
            }
        }
        let s = |g: &[&str]| occurrences(input, g) as f64 * m;
        let c = |g: &[&str]| occurrences(cand, g) as f64 * m;
        let r = |g: &[&str]| refs.iter().map(|x| occurrences(x, g)).sum::<usize>() as f64;

        // keep
        let (mut kp_sum, mut kp_n, mut k_good, mut k_all) = (0.0, 0usize, 0.0, 0.0);
        for &g in &universe {
            let keep = s(g).min(c(g));
            if keep > 0.0 {
                kp_sum += keep.min(r(g)) / keep;
                kp_n += 1;
                k_good += keep.min(r(g));
            }
            k_all += s(g).min(r(g));
        }
        let keep_p = if kp_n == 0 { 1.0 } else { kp_sum / kp_n as f64 };
        let keep_r = if k_all == 0.0 { 1.0 } else { k_good / k_all };

        // delete
        let (mut dp_sum, mut dp_n) = (0.0, 0usize);
        for &g in &universe {
            let del = s(g) - c(g);
            if del > 0.0 {
                dp_sum += (del - r(g)).max(0.0) / del;
                dp_n += 1;
            }
        }
        let del_p = if dp_n == 0 { 1.0 } else { dp_sum / dp_n as f64 };

        // add
        let (mut added, mut added_good, mut wanted) = (0usize, 0usize, 0usize);
        for &g in &universe {
            let (in_s, in_c, in_r) = (s(g) > 0.0, c(g) > 0.0, r(g) > 0.0);
            if in_c && !in_s {
                added += 1;
                if in_r {
                    added_good += 1;
                }
            }
            if in_r && !in_s {
                wanted += 1;
            }
        }
        let add_p = if added == 0 { 1.0 } else { added_good as f64 / added as f64 };
        let add_r = if wanted == 0 { 1.0 } else { added_good as f64 / wanted as f64 };

        sums[0] += harmonic(keep_p, keep_r);
        sums[1] += del_p;
        sums[2] += harmonic(add_p, add_r);
    }
    sums.iter().map(|x| x / 4.0).sum::<f64>() / 3.0
}

/// Statistics of the best METEOR alignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlignmentStats {
    pub exact: usize,
    pub matches: usize,
    pub chunks: usize,
}

fn count_chunks(pairs: &[Option<usize>]) -> usize {
    let mut chunks = 0;
    let mut last: Option<(usize, usize)> = None;
    for (i, p) in pairs.iter().enumerate() {
        if let Some(j) = *p {
            let continues = matches!(last, Some((li, lj)) if li + 1 == i && lj + 1 == j);
            if !continues {
                chunks += 1;
            }
            last = Some((i, j));
        }
    }
    chunks
}

/// Best alignment by exhaustive search: most exact matches, then most
/// matches, then fewest chunks. Terms may pair when their forms are equal or
/// their supplied stems are equal.
pub fn meteor_alignment(cand: &[&str], reference: &[&str], cand_stems: &[&str], ref_stems: &[&str]) -> AlignmentStats {
    fn walk(
        i: usize,
        ctx: &(&[&str], &[&str], &[&str], &[&str]),
        used: &mut Vec<bool>,
        pairs: &mut Vec<Option<usize>>,
        best: &mut Option<(usize, usize, usize)>,
    ) {
        let (cand, reference, cs, rs) = *ctx;
        if i == cand.len() {
            let exact = pairs
                .iter()
                .enumerate()
                .filter(|(k, p)| p.is_some_and(|j| cand[*k] == reference[j]))
                .count();
            let total = pairs.iter().flatten().count();
            let chunks = count_chunks(pairs);
            let better = match best {
                None => true,
                Some((e, t, ch)) => (exact, total, std::cmp::Reverse(chunks)) > (*e, *t, std::cmp::Reverse(*ch)),
            };
            if better {
                *best = Some((exact, total, chunks));
            }
            return;
        }
        pairs[i] = None;
        walk(i + 1, ctx, used, pairs, best);
        for j in 0..reference.len() {
            if !used[j] && (cand[i] == reference[j] || cs[i] == rs[j]) {
                used[j] = true;
                pairs[i] = Some(j);
                walk(i + 1, ctx, used, pairs, best);
                pairs[i] = None;
                used[j] = false;
            }
        }
    }
    let mut best = None;
    walk(
        0,
        &(cand, reference, cand_stems, ref_stems),
        &mut vec![false; reference.len()],
        &mut vec![None; cand.len()],
        &mut best,
    );
    let (exact, matches, chunks) = best.unwrap();
    AlignmentStats { exact, matches, chunks }
}

pub fn meteor(cand: &[&str], reference: &[&str], cand_stems: &[&str], ref_stems: &[&str]) -> f64 {
    if cand.is_empty() || reference.is_empty() {
        return 0.0;
    }
    let a = meteor_alignment(cand, reference, cand_stems, ref_stems);
    if a.matches == 0 {
        return 0.0;
    }
    let m = a.matches as f64;
    let p = m / cand.len() as f64;
    let r = m / reference.len() as f64;
    let fmean = 10.0 * p * r / (r + 9.0 * p);
    let frag = a.chunks as f64 / m;
    fmean * (1.0 - 0.5 * frag * frag * frag)
}

/// Indices of non-dominated points (both coordinates maximized), by checking
/// every pair.
pub fn pareto_indices(points: &[(f64, f64)]) -> Vec<usize> {
    (0..points.len())
        .filter(|&i| {
            !points.iter().any(|q| {
                let p = points[i];
                q.0 >= p.0 && q.1 >= p.1 && (q.0 > p.0 || q.1 > p.1)
            })
        })
        .collect()
}

/// Reference tokenizer written as a character state machine.
///
/// Returns `(surface, kind)` with kind one of `word`, `number`,
/// `punctuation`, `symbol`.
pub fn reference_tokenize(raw: &str) -> Vec<(String, &'static str)> {
    let mut out = Vec::new();
    let mut chunk = String::new();
    let flush = |chunk: &mut String, out: &mut Vec<(String, &'static str)>| {
        if chunk.is_empty() {
            return;
        }
        let chars: Vec<char> = chunk.chars().collect();
        let mut lead = 0;
        while lead < chars.len() && !chars[lead].is_alphanumeric() {
            lead += 1;
        }
        if lead == chars.len() {
            for c in &chars {
                out.push(with_kind(c.to_string()));
            }
        } else {
            let mut trail = chars.len();
            while !chars[trail - 1].is_alphanumeric() {
                trail -= 1;
            }
            for c in &chars[..lead] {
                out.push(with_kind(c.to_string()));
            }
            out.push(with_kind(chars[lead..trail].iter().collect()));
            for c in &chars[trail..] {
                out.push(with_kind(c.to_string()));
            }
        }
        chunk.clear();
    };
    for c in raw.chars() {
        if c.is_whitespace() {
            flush(&mut chunk, &mut out);
        } else {
            chunk.push(c);
        }
    }
    flush(&mut chunk, &mut out);
    out
}

fn with_kind(surface: String) -> (String, &'static str) {
    const PUNCT: &str = "!\"#%&'()*,-./:;?@[\\]_{}\u{2018}\u{2019}\u{201C}\u{201D}\u{2013}\u{2014}\u{2026}\u{00AB}\u{00BB}\u{00A1}\u{00BF}\u{2022}";
    let kind = if surface.chars().any(char::is_alphabetic) {
        "word"
    } else if surface.chars().any(char::is_numeric) {
        "number"
    } else if surface.chars().all(|c| PUNCT.contains(c)) {
        "punctuation"
    } else {
        "symbol"
    };
    (surface, kind)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_values() {
        assert!((rouge_n(&["a", "b", "c"], &["a", "b", "d"], 1) - 2.0 / 3.0).abs() < 1e-15);
        assert!((rouge_l(&["a", "x", "b"], &["a", "b"]) - 0.8).abs() < 1e-15);
        assert_eq!(lcs_len(&["a", "b", "c", "d"], &["b", "d", "a"]), 2);
        let b = bleu(&["the", "cat", "sat"], &[vec!["the", "cat", "sat", "down"]]);
        assert!((b - (-1.0f64 / 3.0).exp()).abs() < 1e-15);
        assert_eq!(meteor(&["x"], &["y"], &["x"], &["y"]), 0.0);
        let four = ["one", "two", "three", "four"];
        assert_eq!(meteor(&four, &four, &four, &four), 0.9921875);
    }

    #[test]
    fn pareto_fixture() {
        let pts = [(1.0, 0.0), (0.0, 1.0), (0.3, 0.3), (0.4, 0.4)];
        assert_eq!(pareto_indices(&pts), vec![0, 1, 3]);
    }

    #[test]
    fn tokenizer_fixture() {
        assert_eq!(
            reference_tokenize("don't stop!"),
            vec![("don't".into(), "word"), ("stop".into(), "word"), ("!".into(), "punctuation")]
        );
    }
}

pub mod cases {
    //! Seeded random small cases for equivalence checks.

    use rand_core::{RngCore, SeedableRng};
    use rand_xoshiro::SplitMix64;

    /// Small vocabulary with stem collisions ("cat"/"cats", "run"/"runs"/"running").
    pub const VOCAB: [&str; 10] = ["the", "a", "cat", "cats", "run", "runs", "running", "dog", "sat", "on"];

    #[derive(Debug, Clone)]
    pub struct RandomCase {
        pub input: Vec<String>,
        pub candidate: Vec<String>,
        pub references: Vec<Vec<String>>,
    }

    fn below(rng: &mut SplitMix64, n: u64) -> u64 {
        rng.next_u64() % n
    }

    fn sentence(rng: &mut SplitMix64, max_len: u64) -> Vec<String> {
        let len = below(rng, max_len + 1);
        (0..len).map(|_| VOCAB[below(rng, VOCAB.len() as u64) as usize].to_string()).collect()
    }

    /// `count` cases with at most `max_len` terms per side and 1 to 3 references.
    pub fn random_cases(seed: u64, count: usize, max_len: u64) -> Vec<RandomCase> {
        let mut rng = SplitMix64::seed_from_u64(seed);
        (0..count)
            .map(|_| {
                let input = sentence(&mut rng, max_len);
                let candidate = sentence(&mut rng, max_len);
                let n_refs = 1 + below(&mut rng, 3) as usize;
                let references = (0..n_refs).map(|_| sentence(&mut rng, max_len)).collect();
                RandomCase {
                    input,
                    candidate,
                    references,
                }
            })
            .collect()
    }
}
