use super::corpus::GyafcRecord;
use super::plan::{case_id, PairingPlan, Variant, SEPARATOR};
use super::rng::{derive_seed, rng, sample_indices};
use super::DatasetError;
use crate::metrics::Formality;
use crate::pipeline::{CaseMeta, Task, TransferCase};

pub const DEFAULT_K: usize = 16;
pub const INPUT_SPLIT: &str = "test";
pub const POOL_SPLIT: &str = "train";

/// Domain tag and the formality of the inputs for a GYAFC variant.
pub fn direction(variant: Variant) -> Option<(&'static str, Formality)> {
    match variant {
        Variant::EmI2f => Some(("em", Formality::Informal)),
        Variant::EmF2i => Some(("em", Formality::Formal)),
        Variant::FrI2f => Some(("fr", Formality::Informal)),
        Variant::FrF2i => Some(("fr", Formality::Formal)),
        _ => None,
    }
}

/// Accepts the short tags and the long folder names used by the corpus.
pub fn normalize_domain(tag: &str) -> String {
    let t = tag.trim().to_ascii_lowercase();
    match t.as_str() {
        "entertainment_music" | "entertainment & music" => "em".into(),
        "family_relationships" | "family & relationships" => "fr".into(),
        _ => t,
    }
}

/// Joins the lines of a pool text with spaces so that one pool text is
/// exactly one exemplar segment.
pub fn single_line(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// For every test input of the variant's domain and source formality, draws
/// `k` distinct train texts of the same domain and opposite formality and
/// joins them with newlines. Each input gets its own stream derived from
/// the seed and the case id.
pub fn build_gyafc_cases(
    records: &[GyafcRecord],
    variant: Variant,
    k: usize,
    seed: u64,
) -> Result<PairingPlan, DatasetError> {
    let (domain, from) = direction(variant).ok_or(DatasetError::WrongVariant(variant))?;
    if k == 0 {
        return Err(DatasetError::InvalidPlan("k must be at least 1".into()));
    }
    let to = from.opposite();
    let in_domain = |r: &&GyafcRecord| normalize_domain(&r.domain) == domain;
    let pool: Vec<String> = records
        .iter()
        .filter(in_domain)
        .filter(|r| r.split == POOL_SPLIT && r.formality == to)
        .map(|r| single_line(&r.text))
        .collect();
    if pool.len() < k {
        return Err(DatasetError::InsufficientPool {
            needed: k,
            found: pool.len(),
        });
    }
    let inputs: Vec<&GyafcRecord> = records
        .iter()
        .filter(in_domain)
        .filter(|r| r.split == INPUT_SPLIT && r.formality == from)
        .collect();

    let mut plan = PairingPlan::new(variant, seed);
    plan.k = Some(k);
    for (i, rec) in inputs.iter().enumerate() {
        let id = case_id("gyafc", i, inputs.len());
        let refs: Vec<String> = rec.refs.iter().map(|g| single_line(g)).collect();
        let allowed: Vec<&str> = pool.iter().map(String::as_str).filter(|t| !refs.iter().any(|g| g == t)).collect();
        if allowed.len() < k {
            return Err(DatasetError::InsufficientPool {
                needed: k,
                found: allowed.len(),
            });
        }
        let mut r = rng(derive_seed(seed, &format!("gyafc/{variant}/{id}")));
        let segments: Vec<&str> = sample_indices(&mut r, allowed.len(), k).into_iter().map(|j| allowed[j]).collect();
        plan.cases.push(TransferCase {
            id,
            task: Task::Gyafc,
            input_text: rec.text.clone(),
            style_exemplar: segments.join(SEPARATOR),
            gold_refs: Some(rec.refs.clone()).filter(|r| !r.is_empty()),
            meta: CaseMeta {
                split: Some(INPUT_SPLIT.into()),
                domain: Some(domain.into()),
                direction: Some(variant.as_str().into()),
                source_author: rec.id.clone(),
                target_author: None,
                target_formality: Some(to),
            },
        });
    }
    plan.check_gold_exposure()?;
    Ok(plan)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(text: &str, domain: &str, formality: Formality, split: &str) -> GyafcRecord {
        GyafcRecord {
            id: None,
            text: text.into(),
            domain: domain.into(),
            formality,
            split: split.into(),
            refs: vec![format!("{text} (formal)")],
        }
    }

    #[test]
    fn forced_single_segment() {
        let recs = vec![
            rec("y", "em", Formality::Formal, "train"),
            rec("a", "em", Formality::Informal, "test"),
            rec("b", "em", Formality::Informal, "test"),
        ];
        let plan = build_gyafc_cases(&recs, Variant::EmI2f, 1, 0).unwrap();
        assert_eq!(plan.cases.len(), 2);
        assert!(plan.cases.iter().all(|c| c.style_exemplar == "y"));
        assert_eq!(plan.cases[0].meta.target_formality, Some(Formality::Formal));
    }

    #[test]
    fn pool_filters_domain_split_and_formality() {
        let recs = vec![
            rec("pool", "Entertainment_Music", Formality::Formal, "train"),
            rec("wrong formality", "em", Formality::Informal, "train"),
            rec("wrong domain", "fr", Formality::Formal, "train"),
            rec("wrong split", "em", Formality::Formal, "test"),
            rec("in", "em", Formality::Informal, "test"),
        ];
        let plan = build_gyafc_cases(&recs, Variant::EmI2f, 1, 0).unwrap();
        assert_eq!(plan.cases.len(), 1);
        assert_eq!(plan.cases[0].style_exemplar, "pool");
        assert!(matches!(
            build_gyafc_cases(&recs, Variant::EmI2f, 2, 0),
            Err(DatasetError::InsufficientPool { needed: 2, found: 1 })
        ));
    }

    #[test]
    fn multi_line_pool_texts_become_one_segment() {
        assert_eq!(single_line("one\ntwo  three\r\n"), "one two three");
    }

    #[test]
    fn gold_texts_are_kept_out_of_the_pool() {
        let mut input = rec("x", "fr", Formality::Formal, "test");
        input.refs = vec!["leak".into()];
        let mut recs = vec![rec("leak", "fr", Formality::Informal, "train"), input];
        assert_eq!(
            build_gyafc_cases(&recs, Variant::FrF2i, 1, 0),
            Err(DatasetError::InsufficientPool { needed: 1, found: 0 })
        );
        recs.push(rec("other", "fr", Formality::Informal, "train"));
        for seed in 0..20 {
            let plan = build_gyafc_cases(&recs, Variant::FrF2i, 1, seed).unwrap();
            assert_eq!(plan.cases[0].style_exemplar, "other");
        }
    }

    #[test]
    fn exposed_segment_is_rejected() {
        let recs = vec![rec("a", "fr", Formality::Informal, "train"), rec("x", "fr", Formality::Formal, "test")];
        let mut plan = build_gyafc_cases(&recs, Variant::FrF2i, 1, 0).unwrap();
        plan.cases[0].style_exemplar = "b\na".into();
        plan.cases[0].gold_refs = Some(vec!["a".into()]);
        assert_eq!(plan.check_gold_exposure(), Err(DatasetError::GoldExposure("gyafc-0000".into())));
    }
}
