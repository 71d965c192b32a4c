use std::collections::HashMap;

use crate::textproc::{stem, Document};

pub const METEOR_ALPHA: f64 = 0.9;
pub const METEOR_BETA: f64 = 3.0;
pub const METEOR_GAMMA: f64 = 0.5;

/// Search budget for chunk minimization. Sentence-length inputs finish far
/// below it; past the budget the best alignment found so far is used.
const NODE_BUDGET: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeteorAlignment {
    /// `pairs[i] = Some(j)` aligns candidate term i with reference term j.
    pub pairs: Vec<Option<usize>>,
    pub exact: usize,
    pub matches: usize,
    pub chunks: usize,
    /// False when the node budget ran out before the search proved optimality.
    pub optimal: bool,
}

struct Search<'a> {
    cand_form: Vec<usize>,
    cand_stem: Vec<usize>,
    ref_form: &'a [usize],
    ref_stem: &'a [usize],
    /// Reference positions grouped by stem class.
    ref_by_stem: HashMap<usize, Vec<usize>>,
    target_exact: usize,
    target_total: usize,
    // per-class counts of candidate terms at positions >= i, and free reference terms
    rem_c_form: Vec<usize>,
    rem_c_stem: Vec<usize>,
    free_r_form: Vec<usize>,
    free_r_stem: Vec<usize>,
    used: Vec<bool>,
    pairs: Vec<Option<usize>>,
    best: Option<(usize, Vec<Option<usize>>)>,
    nodes: usize,
}

impl Search<'_> {
    fn reachable(&self, exact: usize, total: usize) -> bool {
        let exact_max: usize = self
            .rem_c_form
            .iter()
            .zip(&self.free_r_form)
            .map(|(a, b)| *a.min(b))
            .sum();
        if exact + exact_max < self.target_exact {
            return false;
        }
        let total_max: usize = self
            .rem_c_stem
            .iter()
            .zip(&self.free_r_stem)
            .map(|(a, b)| *a.min(b))
            .sum();
        total + total_max >= self.target_total
    }

    fn dfs(&mut self, i: usize, exact: usize, total: usize, chunks: usize) {
        self.nodes += 1;
        if let Some((best_chunks, _)) = &self.best {
            if chunks >= *best_chunks || self.nodes > NODE_BUDGET {
                return;
            }
        }
        if exact == self.target_exact && total == self.target_total {
            self.best = Some((chunks, self.pairs.clone()));
            return;
        }
        if i == self.cand_form.len() || !self.reachable(exact, total) {
            return;
        }
        let (form, st) = (self.cand_form[i], self.cand_stem[i]);
        self.rem_c_form[form] -= 1;
        self.rem_c_stem[st] -= 1;

        let prev = if i > 0 { self.pairs[i - 1] } else { None };
        let mut options: Vec<usize> = Vec::new();
        if let Some(j) = prev.map(|p| p + 1) {
            if j < self.ref_stem.len() && !self.used[j] && self.ref_stem[j] == st {
                options.push(j);
            }
        }
        let candidates = self.ref_by_stem.get(&st).cloned().unwrap_or_default();
        // exact matches before stem-only matches, each in reference order
        for pass_exact in [true, false] {
            for &j in &candidates {
                if !self.used[j] && (self.ref_form[j] == form) == pass_exact && !options.contains(&j) {
                    options.push(j);
                }
            }
        }
        for j in options {
            let is_exact = self.ref_form[j] == form;
            let extends = prev == Some(j.wrapping_sub(1)) && j > 0;
            self.used[j] = true;
            self.free_r_form[self.ref_form[j]] -= 1;
            self.free_r_stem[st] -= 1;
            self.pairs[i] = Some(j);
            self.dfs(
                i + 1,
                exact + usize::from(is_exact),
                total + 1,
                chunks + usize::from(!extends),
            );
            self.pairs[i] = None;
            self.free_r_stem[st] += 1;
            self.free_r_form[self.ref_form[j]] += 1;
            self.used[j] = false;
        }
        self.dfs(i + 1, exact, total, chunks);

        self.rem_c_stem[st] += 1;
        self.rem_c_form[form] += 1;
    }
}

fn intern<'a>(table: &mut HashMap<String, usize>, s: impl Into<std::borrow::Cow<'a, str>>) -> usize {
    let s = s.into().into_owned();
    let next = table.len();
    *table.entry(s).or_insert(next)
}

/// Aligns candidate and reference terms for METEOR.
///
/// Terms match exactly (same lowercase form) or by Porter stem. Among all
/// one-to-one alignments the search keeps those with the most exact matches,
/// then the most matches overall, and returns one with the fewest chunks
/// (maximal runs contiguous and in order on both sides).
pub fn meteor_alignment(candidate: &[&str], reference: &[&str]) -> MeteorAlignment {
    let mut forms = HashMap::new();
    let mut stems = HashMap::new();
    let cand_form: Vec<usize> = candidate.iter().map(|t| intern(&mut forms, *t)).collect();
    let ref_form: Vec<usize> = reference.iter().map(|t| intern(&mut forms, *t)).collect();
    let cand_stem: Vec<usize> = candidate.iter().map(|t| intern(&mut stems, stem(t))).collect();
    let ref_stem: Vec<usize> = reference.iter().map(|t| intern(&mut stems, stem(t))).collect();

    let count = |ids: &[usize], n: usize| {
        let mut v = vec![0usize; n];
        for &id in ids {
            v[id] += 1;
        }
        v
    };
    let (nf, ns) = (forms.len(), stems.len());
    let rem_c_form = count(&cand_form, nf);
    let rem_c_stem = count(&cand_stem, ns);
    let free_r_form = count(&ref_form, nf);
    let free_r_stem = count(&ref_stem, ns);
    let target_exact = rem_c_form.iter().zip(&free_r_form).map(|(a, b)| *a.min(b)).sum();
    let target_total = rem_c_stem.iter().zip(&free_r_stem).map(|(a, b)| *a.min(b)).sum();

    let mut ref_by_stem: HashMap<usize, Vec<usize>> = HashMap::new();
    for (j, &s) in ref_stem.iter().enumerate() {
        ref_by_stem.entry(s).or_default().push(j);
    }

    let mut search = Search {
        cand_form,
        cand_stem,
        ref_form: &ref_form,
        ref_stem: &ref_stem,
        ref_by_stem,
        target_exact,
        target_total,
        rem_c_form,
        rem_c_stem,
        free_r_form,
        free_r_stem,
        used: vec![false; reference.len()],
        pairs: vec![None; candidate.len()],
        best: None,
        nodes: 0,
    };
    search.dfs(0, 0, 0, 0);
    let optimal = search.nodes <= NODE_BUDGET;
    let (chunks, pairs) = search.best.expect("the maximal alignment is always reachable");
    MeteorAlignment {
        pairs,
        exact: target_exact,
        matches: target_total,
        chunks,
        optimal,
    }
}

/// METEOR with exact and stem matching.
///
/// `F_mean = P*R / (alpha*P + (1-alpha)*R)`, penalty `gamma * (chunks/matches)^beta`,
/// score `F_mean * (1 - penalty)`; 0 without matches.
pub fn meteor(candidate: &Document, reference: &Document) -> f64 {
    let (c, r) = (candidate.terms(), reference.terms());
    if c.is_empty() || r.is_empty() {
        return 0.0;
    }
    let al = meteor_alignment(&c, &r);
    if al.matches == 0 {
        return 0.0;
    }
    let m = al.matches as f64;
    let p = m / c.len() as f64;
    let rc = m / r.len() as f64;
    let fmean = p * rc / (METEOR_ALPHA * p + (1.0 - METEOR_ALPHA) * rc);
    let penalty = METEOR_GAMMA * (al.chunks as f64 / m).powf(METEOR_BETA);
    fmean * (1.0 - penalty)
}
