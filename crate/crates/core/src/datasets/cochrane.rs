use super::corpus::CochraneRecord;
use super::gyafc::{INPUT_SPLIT, POOL_SPLIT};
use super::plan::{case_id, PairingPlan, Variant};
use super::rng::{derive_seed, rng, uniform_below};
use super::DatasetError;
use crate::pipeline::{CaseMeta, Task, TransferCase};

/// Each test abstract is paired with one train summary drawn uniformly from
/// a stream derived from the seed and the case id. The test record's own
/// summary is the gold reference.
pub fn build_cochrane_cases(records: &[CochraneRecord], seed: u64) -> Result<PairingPlan, DatasetError> {
    let pool: Vec<&str> = records.iter().filter(|r| r.split == POOL_SPLIT).map(|r| r.pls.as_str()).collect();
    if pool.is_empty() {
        return Err(DatasetError::InsufficientPool { needed: 1, found: 0 });
    }
    let inputs: Vec<&CochraneRecord> = records.iter().filter(|r| r.split == INPUT_SPLIT).collect();
    let mut plan = PairingPlan::new(Variant::Cochrane, seed);
    for (i, rec) in inputs.iter().enumerate() {
        let id = case_id("cochrane", i, inputs.len());
        let mut r = rng(derive_seed(seed, &format!("cochrane/{id}")));
        plan.cases.push(TransferCase {
            style_exemplar: pool[uniform_below(&mut r, pool.len())].to_string(),
            id,
            task: Task::Cochrane,
            input_text: rec.abstract_text.clone(),
            gold_refs: Some(vec![rec.pls.clone()]),
            meta: CaseMeta {
                split: Some(INPUT_SPLIT.into()),
                source_author: rec.id.clone(),
                ..Default::default()
            },
        });
    }
    plan.check_gold_exposure()?;
    Ok(plan)
}
