use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::aggregate::{aggregate, align, Report};
use super::descriptors::{descriptor_frequency, FrequencyTable};
use super::pareto::{pareto_frontier, SystemPoint};
use super::plot::emit_plot_data;
use crate::pipeline::{write_atomic, RunRecord, System, Task, TransferCase};

pub const DEFAULT_X_COLUMN: &str = "towards_biber";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportOptions {
    pub x_column: String,
    pub top_k: usize,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            x_column: DEFAULT_X_COLUMN.into(),
            top_k: super::descriptors::DEFAULT_TOP_K,
        }
    }
}

/// Everything `report` produces, also written as `report.json`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportBundle {
    pub table: Report,
    pub x_column: String,
    pub y_column: String,
    pub points: Vec<SystemPoint>,
    pub frontier: Vec<SystemPoint>,
    pub descriptors: BTreeMap<String, FrequencyTable>,
    pub suspect: usize,
}

pub fn build_report(cases: &[TransferCase], records: &[RunRecord], opts: &ReportOptions) -> ReportBundle {
    let table = aggregate(cases, records);
    let points = table.points(&opts.x_column);
    let frontier = pareto_frontier(&points);
    let descriptors = System::ALL
        .into_iter()
        .filter(|s| s.produces_descriptors())
        .filter(|s| records.iter().any(|r| r.run.system == *s))
        .map(|s| {
            let runs = records.iter().filter(|r| r.run.system == s && !r.run.degraded).map(|r| &r.run);
            (s.as_str().to_string(), descriptor_frequency(runs, opts.top_k))
        })
        .collect();
    ReportBundle {
        y_column: table.meaning_column().to_string(),
        x_column: opts.x_column.clone(),
        suspect: records.iter().filter(|r| r.run.suspect).count(),
        table,
        points,
        frontier,
        descriptors,
    }
}

impl ReportBundle {
    fn notes(&self) -> Vec<String> {
        let mut n = vec![
            "ROUGE values are F1 over lowercased word and number tokens.".to_string(),
            "METEOR aligns exact and Porter-stem matches only.".into(),
            "Means exclude degraded and unscored runs; both are counted per system.".into(),
        ];
        if self.table.task == Some(Task::Cochrane) {
            n.push("rouge1/rouge2/rougeL use the gold summary as reference; overlap_* use the exemplar.".into());
        }
        if self.y_column == "meteor" {
            n.push("No MIS scores were available, so the frontier uses METEOR for meaning.".into());
        }
        if self.suspect > 0 {
            n.push(format!("{} runs echoed a prompt verbatim and are flagged suspect.", self.suspect));
        }
        n
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let task = self.table.task.map_or("-", Task::as_str);
        let _ = writeln!(out, "task: {task}");
        for note in self.notes() {
            let _ = writeln!(out, "# {note}");
        }
        out.push('\n');
        out.push_str(&self.table.to_text());
        let _ = writeln!(out, "\nfrontier (x = {}, y = {}):", self.x_column, self.y_column);
        for p in &self.frontier {
            let _ = writeln!(out, "  {:<16} {:.3}  {:.3}  (n = {})", p.system, p.x, p.y, p.n_cases);
        }
        for (system, table) in &self.descriptors {
            let _ = writeln!(out, "\ntop {} descriptors for {system}:", table.k);
            let rows: Vec<Vec<String>> =
                table.entries.iter().map(|(d, n)| vec![format!("  {d}"), n.to_string()]).collect();
            out.push_str(&align(&rows));
        }
        out
    }

    pub fn descriptors_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["system", "rank", "descriptor", "count"]).unwrap();
        for (system, table) in &self.descriptors {
            for (i, (d, n)) in table.entries.iter().enumerate() {
                w.write_record([system.as_str(), &(i + 1).to_string(), d, &n.to_string()]).unwrap();
            }
        }
        String::from_utf8(w.into_inner().unwrap()).unwrap()
    }
}

/// One row per case: exemplar, input and each system's rewrite.
pub fn examples_csv(cases: &[TransferCase], records: &[RunRecord]) -> String {
    let systems: Vec<System> = System::ALL.into_iter().filter(|s| records.iter().any(|r| r.run.system == *s)).collect();
    let outputs: BTreeMap<(&str, System), &str> = records
        .iter()
        .map(|r| ((r.run.case_id.as_str(), r.run.system), r.run.output_text.as_str()))
        .collect();
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["case_id", "target", "input"];
    header.extend(systems.iter().map(|s| s.as_str()));
    w.write_record(&header).unwrap();
    for c in cases {
        let mut row = vec![c.id.as_str(), c.style_exemplar.as_str(), c.input_text.as_str()];
        row.extend(systems.iter().map(|&s| outputs.get(&(c.id.as_str(), s)).copied().unwrap_or("")));
        w.write_record(&row).unwrap();
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

/// Writes the report artifacts into `dir` and returns their paths.
pub fn write_report(
    dir: &Path,
    cases: &[TransferCase],
    records: &[RunRecord],
    opts: &ReportOptions,
) -> io::Result<(ReportBundle, Vec<PathBuf>)> {
    std::fs::create_dir_all(dir)?;
    let bundle = build_report(cases, records, opts);
    let plot = emit_plot_data(&bundle.points, &bundle.x_column, &bundle.y_column);
    let files = [
        ("report.txt", bundle.to_text()),
        ("report.csv", bundle.table.to_csv()),
        ("report.json", serde_json::to_string_pretty(&bundle).map_err(io::Error::other)? + "\n"),
        ("frontier.csv", plot.csv),
        ("frontier.svg", plot.svg),
        ("descriptors.csv", bundle.descriptors_csv()),
        ("examples.csv", examples_csv(cases, records)),
    ];
    let mut written = Vec::new();
    for (name, body) in files {
        let path = dir.join(name);
        write_atomic(&path, body.as_bytes()).map_err(io::Error::other)?;
        written.push(path);
    }
    Ok((bundle, written))
}
