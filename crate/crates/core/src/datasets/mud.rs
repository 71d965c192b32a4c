use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::corpus::MudRecord;
use super::plan::{case_id, PairingPlan, Selections, Variant, SEPARATOR};
use super::rng::{derive_seed, rng, sample_indices};
use super::DatasetError;
use crate::pipeline::{CaseMeta, Task, TransferCase};

pub const POSTS_PER_AUTHOR: usize = 16;
pub const AUTHORS_PER_SIDE: usize = 15;
pub const DIVERSE_MIN_SUBREDDITS: usize = 13;
pub const SOURCE_SPLIT: &str = "test_queries";
pub const TARGET_SPLIT: &str = "test_targets";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Post {
    pub text: String,
    pub subreddit: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuthorCorpus {
    pub author_id: String,
    pub split: String,
    pub posts: Vec<Post>,
}

impl AuthorCorpus {
    pub fn subreddits(&self) -> BTreeSet<&str> {
        self.posts.iter().map(|p| p.subreddit.as_str()).collect()
    }
}

/// Groups records by (split, author) keeping file order within each author.
/// Authors come back sorted by split, then id.
pub fn group_authors(records: &[MudRecord]) -> Vec<AuthorCorpus> {
    let mut by: BTreeMap<(String, String), Vec<Post>> = BTreeMap::new();
    for r in records {
        by.entry((r.split.clone().unwrap_or_default(), r.author_id.clone()))
            .or_default()
            .push(Post {
                text: r.text.clone(),
                subreddit: r.subreddit.clone(),
            });
    }
    by.into_iter()
        .map(|((split, author_id), posts)| AuthorCorpus { author_id, split, posts })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MudSelection {
    pub sources: Vec<AuthorCorpus>,
    pub targets: Vec<AuthorCorpus>,
    /// The subreddit every chosen author is confined to (Single only).
    pub subreddit: Option<String>,
}

/// Subreddit with the most posts among full-size authors; ties go to the
/// lexicographically smallest name.
pub fn most_common_subreddit<'a>(authors: impl IntoIterator<Item = &'a AuthorCorpus>) -> Option<String> {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for a in authors.into_iter().filter(|a| a.posts.len() == POSTS_PER_AUTHOR) {
        for p in &a.posts {
            *counts.entry(p.subreddit.as_str()).or_default() += 1;
        }
    }
    // max_by_key keeps the last maximum, so walk names in reverse
    counts.into_iter().rev().max_by_key(|&(_, n)| n).map(|(s, _)| s.to_string())
}

fn eligible(a: &AuthorCorpus, variant: Variant, subreddit: Option<&str>) -> bool {
    if a.posts.len() != POSTS_PER_AUTHOR {
        return false;
    }
    match variant {
        Variant::Single => subreddit.is_some_and(|s| a.posts.iter().all(|p| p.subreddit == s)),
        Variant::Diverse => a.subreddits().len() >= DIVERSE_MIN_SUBREDDITS,
        _ => true,
    }
}

fn filter_eligible<'a>(side: Vec<&'a AuthorCorpus>, variant: Variant, subreddit: Option<&str>) -> Vec<&'a AuthorCorpus> {
    side.into_iter().filter(|a| eligible(a, variant, subreddit)).collect()
}

fn draw(pool: &[&AuthorCorpus], count: usize, seed: u64, label: &str) -> Vec<AuthorCorpus> {
    let mut r = rng(derive_seed(seed, label));
    sample_indices(&mut r, pool.len(), count).into_iter().map(|i| pool[i].clone()).collect()
}

/// Picks `count` source and `count` target authors for a MUD variant.
///
/// Sources come from the `test_queries` split and targets from `test_targets`.
/// A corpus that uses neither split name is treated as one shared pool from
/// which disjoint source and target sets are drawn.
pub fn select_mud_authors(
    records: &[MudRecord],
    variant: Variant,
    seed: u64,
    count: usize,
) -> Result<MudSelection, DatasetError> {
    if variant.task() != Task::Mud {
        return Err(DatasetError::WrongVariant(variant));
    }
    let authors = group_authors(records);
    let split_aware = authors.iter().any(|a| a.split == SOURCE_SPLIT || a.split == TARGET_SPLIT);
    let side = |name: &str| -> Vec<&AuthorCorpus> {
        authors.iter().filter(|a| !split_aware || a.split == name).collect()
    };
    let (src_side, tgt_side) = (side(SOURCE_SPLIT), side(TARGET_SPLIT));

    let subreddit = match variant {
        Variant::Single => {
            let all = if split_aware {
                src_side.iter().chain(&tgt_side).copied().collect::<Vec<_>>()
            } else {
                src_side.clone()
            };
            most_common_subreddit(all)
        }
        _ => None,
    };
    let insufficient = |side: &'static str, found: usize, needed: usize| DatasetError::InsufficientAuthors {
        variant,
        side,
        found,
        needed,
    };

    let (sources, targets) = if split_aware {
        let (src, tgt) = (
            filter_eligible(src_side, variant, subreddit.as_deref()),
            filter_eligible(tgt_side, variant, subreddit.as_deref()),
        );
        if src.len() < count {
            return Err(insufficient("source", src.len(), count));
        }
        if tgt.len() < count {
            return Err(insufficient("target", tgt.len(), count));
        }
        (
            draw(&src, count, seed, &format!("mud/{variant}/sources")),
            draw(&tgt, count, seed, &format!("mud/{variant}/targets")),
        )
    } else {
        let pool = filter_eligible(src_side, variant, subreddit.as_deref());
        if pool.len() < 2 * count {
            return Err(insufficient("shared", pool.len(), 2 * count));
        }
        let mut both = draw(&pool, 2 * count, seed, &format!("mud/{variant}/shared"));
        let targets = both.split_off(count);
        (both, targets)
    };
    Ok(MudSelection {
        sources,
        targets,
        subreddit,
    })
}

/// One case per (source post, target author), source-major. The exemplar is
/// the target author's posts joined by single newlines in stored order.
pub fn build_mud_cases(selection: &MudSelection, variant: Variant, seed: u64) -> PairingPlan {
    let exemplars: Vec<String> = selection
        .targets
        .iter()
        .map(|t| t.posts.iter().map(|p| p.text.as_str()).collect::<Vec<_>>().join(SEPARATOR))
        .collect();
    let total: usize = selection.sources.iter().map(|s| s.posts.len()).sum::<usize>() * selection.targets.len();
    let mut plan = PairingPlan::new(variant, seed);
    plan.selections = Some(Selections {
        sources: selection.sources.iter().map(|a| a.author_id.clone()).collect(),
        targets: selection.targets.iter().map(|a| a.author_id.clone()).collect(),
        subreddit: selection.subreddit.clone(),
    });
    for src in &selection.sources {
        for post in &src.posts {
            for (tgt, exemplar) in selection.targets.iter().zip(&exemplars) {
                plan.cases.push(TransferCase {
                    id: case_id("mud", plan.cases.len(), total),
                    task: Task::Mud,
                    input_text: post.text.clone(),
                    style_exemplar: exemplar.clone(),
                    gold_refs: None,
                    meta: CaseMeta {
                        split: Some(src.split.clone()).filter(|s| !s.is_empty()),
                        domain: Some(post.subreddit.clone()),
                        direction: Some(variant.as_str().into()),
                        source_author: Some(src.author_id.clone()),
                        target_author: Some(tgt.author_id.clone()),
                        target_formality: None,
                    },
                });
            }
        }
    }
    plan
}
