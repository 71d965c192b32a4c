use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use super::case::{System, TransferCase};
use super::runner::{Pipeline, PipelineRun};
use super::store::{RunRecord, RunStore};
use super::PipelineError;
use crate::metrics::ScoreVector;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize)]
pub struct BatchSummary {
    /// Pairs run in this invocation.
    pub executed: usize,
    /// Pairs already in the store.
    pub skipped: usize,
    pub degraded: usize,
    /// Degraded runs caused by an unreachable or failing chat endpoint.
    pub provider_failures: usize,
    /// Gold requested for cases without references.
    pub not_applicable: usize,
    /// Non-degraded runs whose scoring failed.
    pub unscored: usize,
    /// Pairs left for a later invocation because of `max_new`.
    pub remaining: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BatchOptions {
    pub threads: usize,
    /// Stop after this many new pairs (the rest stay pending).
    pub max_new: Option<usize>,
}

impl Default for BatchOptions {
    fn default() -> Self {
        BatchOptions {
            threads: 4,
            max_new: None,
        }
    }
}

pub type Scorer<'s> = dyn Fn(&TransferCase, &PipelineRun) -> Option<ScoreVector> + Sync + 's;

/// Runs every (case, system) pair missing from `store`, case-major, on
/// `opts.threads` workers. Provider failures become degraded records; only
/// store failures abort the batch.
pub fn run_batch(
    pipeline: &Pipeline<'_>,
    cases: &[TransferCase],
    systems: &[System],
    store: &RunStore,
    opts: BatchOptions,
    scorer: &Scorer<'_>,
) -> Result<BatchSummary, PipelineError> {
    let done = store.completed()?;
    let mut summary = BatchSummary::default();
    let mut work = Vec::new();
    for case in cases {
        for &system in systems {
            if done.contains(&(case.id.clone(), system)) {
                summary.skipped += 1;
            } else if system == System::Gold && case.gold_refs.as_ref().is_none_or(Vec::is_empty) {
                summary.not_applicable += 1;
            } else {
                work.push((case, system));
            }
        }
    }
    if let Some(limit) = opts.max_new {
        summary.remaining = work.len().saturating_sub(limit);
        work.truncate(limit);
    }

    let next = AtomicUsize::new(0);
    let tally = Mutex::new(summary);
    let failure: Mutex<Option<PipelineError>> = Mutex::new(None);
    std::thread::scope(|s| {
        for _ in 0..opts.threads.max(1).min(work.len().max(1)) {
            s.spawn(|| loop {
                if failure.lock().unwrap().is_some() {
                    return;
                }
                let i = next.fetch_add(1, Ordering::SeqCst);
                let Some(&(case, system)) = work.get(i) else { return };
                let outcome = pipeline.run(case, system).and_then(|run| {
                    let scores = if run.degraded { None } else { scorer(case, &run) };
                    let record = RunRecord { run, scores };
                    store.save(&record)?;
                    Ok(record)
                });
                match outcome {
                    Ok(rec) => {
                        let mut t = tally.lock().unwrap();
                        t.executed += 1;
                        t.degraded += usize::from(rec.run.degraded);
                        t.provider_failures += usize::from(rec.run.provider_failure);
                        t.unscored += usize::from(!rec.run.degraded && rec.scores.is_none());
                    }
                    Err(e) => {
                        failure.lock().unwrap().get_or_insert(e);
                        return;
                    }
                }
            });
        }
    });
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    Ok(tally.into_inner().unwrap())
}
