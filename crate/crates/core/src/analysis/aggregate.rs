use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::pareto::SystemPoint;
use crate::metrics::{formality_accuracy, ScoreVector};
use crate::pipeline::{RunRecord, System, Task, TransferCase};

/// Per-system means over scored, non-degraded runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemRow {
    pub system: System,
    /// Runs contributing to the means.
    pub n_cases: usize,
    pub degraded: usize,
    pub unscored: usize,
    /// Aligned with [`ScoreVector::COLUMNS`]; `None` when no run has a value.
    pub means: Vec<Option<f64>>,
    /// Share of runs whose formality probability lands on the desired side.
    pub formality_accuracy: Option<f64>,
}

impl SystemRow {
    pub fn mean(&self, column: &str) -> Option<f64> {
        let i = ScoreVector::COLUMNS.iter().position(|c| *c == column)?;
        self.means[i]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub task: Option<Task>,
    pub rows: Vec<SystemRow>,
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

/// Groups records by system (in canonical system order) and averages every
/// metric over the runs that were scored.
pub fn aggregate(cases: &[TransferCase], records: &[RunRecord]) -> Report {
    let by_id: BTreeMap<&str, &TransferCase> = cases.iter().map(|c| (c.id.as_str(), c)).collect();
    let mut rows = Vec::new();
    for system in System::ALL {
        let recs: Vec<&RunRecord> = records.iter().filter(|r| r.run.system == system).collect();
        if recs.is_empty() {
            continue;
        }
        let scored: Vec<(&RunRecord, &ScoreVector)> = recs
            .iter()
            .filter(|r| !r.run.degraded)
            .filter_map(|r| r.scores.as_ref().map(|s| (*r, s)))
            .collect();
        let means = (0..ScoreVector::COLUMNS.len())
            .map(|i| mean(scored.iter().filter_map(|(_, s)| s.values()[i])))
            .collect();
        let verdicts: Vec<bool> = scored
            .iter()
            .filter_map(|(r, s)| {
                let desired = by_id.get(r.run.case_id.as_str())?.meta.target_formality?;
                formality_accuracy(s.formality_prob?, desired).ok()
            })
            .collect();
        let degraded = recs.iter().filter(|r| r.run.degraded).count();
        rows.push(SystemRow {
            system,
            n_cases: scored.len(),
            degraded,
            unscored: recs.len() - degraded - scored.len(),
            means,
            formality_accuracy: mean(verdicts.iter().map(|&ok| f64::from(u8::from(ok)))),
        });
    }
    let task = records.first().map(|r| r.run.task).or_else(|| cases.first().map(|c| c.task));
    Report { task, rows }
}

impl Report {
    /// Metric columns with at least one value, in canonical order.
    pub fn columns(&self) -> Vec<&'static str> {
        ScoreVector::COLUMNS
            .iter()
            .enumerate()
            .filter(|(i, _)| self.rows.iter().any(|r| r.means[*i].is_some()))
            .map(|(_, c)| *c)
            .collect()
    }

    fn has_formality(&self) -> bool {
        self.rows.iter().any(|r| r.formality_accuracy.is_some())
    }

    /// Name of the meaning-preservation column used for the frontier: MIS
    /// (falling back to METEOR without a sidecar) or ROUGE-1 for Cochrane.
    pub fn meaning_column(&self) -> &'static str {
        if self.task == Some(Task::Cochrane) {
            return "rouge1";
        }
        if self.rows.iter().any(|r| r.mean("mis").is_some()) {
            "mis"
        } else {
            "meteor"
        }
    }

    pub fn points(&self, x_column: &str) -> Vec<SystemPoint> {
        let y_column = self.meaning_column();
        self.rows
            .iter()
            .filter_map(|r| Some(SystemPoint::new(r.system.as_str(), r.mean(x_column)?, r.mean(y_column)?, r.n_cases)))
            .collect()
    }

    fn header(&self) -> Vec<String> {
        let mut h: Vec<String> = ["system", "n_cases", "degraded", "unscored"].map(String::from).to_vec();
        h.extend(self.columns().into_iter().map(String::from));
        if self.has_formality() {
            h.push("formality_acc".into());
        }
        h
    }

    fn cells(&self, row: &SystemRow, digits: usize) -> Vec<String> {
        let fmt = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |v| format!("{v:.digits$}"));
        let mut c = vec![
            row.system.as_str().to_string(),
            row.n_cases.to_string(),
            row.degraded.to_string(),
            row.unscored.to_string(),
        ];
        c.extend(self.columns().into_iter().map(|col| fmt(row.mean(col))));
        if self.has_formality() {
            c.push(fmt(row.formality_accuracy));
        }
        c
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(self.header()).unwrap();
        for row in &self.rows {
            w.write_record(self.cells(row, 6)).unwrap();
        }
        String::from_utf8(w.into_inner().unwrap()).unwrap()
    }

    /// Right-aligned fixed-width table with three decimals.
    pub fn to_text(&self) -> String {
        let mut table = vec![self.header()];
        table.extend(self.rows.iter().map(|r| self.cells(r, 3)));
        align(&table)
    }
}

pub(crate) fn align(table: &[Vec<String>]) -> String {
    let cols = table.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|j| table.iter().filter_map(|r| r.get(j)).map(|c| c.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in table {
        let line: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(j, c)| if j == 0 { format!("{c:<w$}", w = widths[j]) } else { format!("{c:>w$}", w = widths[j]) })
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}
