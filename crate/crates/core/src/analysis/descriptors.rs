use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::pipeline::PipelineRun;

pub const DEFAULT_TOP_K: usize = 15;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequencyTable {
    pub entries: Vec<(String, usize)>,
    pub k: usize,
}

/// Counts each descriptor once per run that lists it and keeps the top `k`,
/// highest count first with ties in lexicographic order.
pub fn descriptor_frequency<'a>(runs: impl IntoIterator<Item = &'a PipelineRun>, k: usize) -> FrequencyTable {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for run in runs {
        let distinct: BTreeSet<&str> = run.descriptors.iter().flatten().map(String::as_str).collect();
        for d in distinct {
            *counts.entry(d).or_default() += 1;
        }
    }
    let mut entries: Vec<(String, usize)> = counts.into_iter().map(|(d, n)| (d.to_string(), n)).collect();
    // stable sort keeps the lexicographic order among equal counts
    entries.sort_by_key(|e| std::cmp::Reverse(e.1));
    entries.truncate(k);
    FrequencyTable { entries, k }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::{System, Task};

    fn run(desc: &[&str]) -> PipelineRun {
        PipelineRun {
            case_id: "c".into(),
            task: Task::Mud,
            system: System::Rg,
            step_outputs: vec![],
            descriptors: Some(desc.iter().map(|s| s.to_string()).collect()),
            output_text: "x".into(),
            degraded: false,
            error: None,
            suspect: false,
            provider_failure: false,
        }
    }

    #[test]
    fn counts_once_per_run() {
        let runs = [run(&["a", "b", "a"]), run(&["a"])];
        let t = descriptor_frequency(&runs, 15);
        assert_eq!(t.entries, vec![("a".to_string(), 2), ("b".to_string(), 1)]);
    }

    #[test]
    fn ties_are_lexicographic_and_k_truncates() {
        let runs = [run(&["c", "b", "z"]), run(&["z"])];
        let t = descriptor_frequency(&runs, 2);
        assert_eq!(t.entries, vec![("z".to_string(), 2), ("b".to_string(), 1)]);
        assert!(descriptor_frequency(&[], 15).entries.is_empty());
    }

    #[test]
    fn total_equals_incidences() {
        let runs = [run(&["a", "b", "a"]), run(&["a", "c"]), run(&[])];
        let t = descriptor_frequency(&runs, 100);
        assert_eq!(t.entries.iter().map(|e| e.1).sum::<usize>(), 4);
    }
}
