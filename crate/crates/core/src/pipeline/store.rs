use std::collections::BTreeSet;
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::case::System;
use super::runner::PipelineRun;
use super::PipelineError;
use crate::metrics::ScoreVector;

/// What the store keeps per (case, system).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub run: PipelineRun,
    pub scores: Option<ScoreVector>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct IndexLine {
    case_id: String,
    system: System,
    degraded: bool,
    scored: bool,
}

/// One directory per run:
///
/// ```text
/// <dir>/config.json
/// <dir>/index.jsonl            one line per completed (case, system)
/// <dir>/records/<case>__<system>.json
/// ```
///
/// Records are written to a temporary file and renamed before their index
/// line is appended, so an interrupted run never indexes a partial record.
pub struct RunStore {
    dir: PathBuf,
    index: Mutex<()>,
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> PipelineError {
    PipelineError::Store(format!("{}: {e}", path.display()))
}

fn safe_id(id: &str) -> bool {
    !id.is_empty() && id.chars().all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c)) && !id.starts_with('.')
}

/// Writes `bytes` to `path` via a sibling temporary file and rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), PipelineError> {
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    fs::write(&tmp, bytes).map_err(|e| io_err(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| io_err(path, e))
}

impl RunStore {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self, PipelineError> {
        let dir = dir.into();
        let records = dir.join("records");
        fs::create_dir_all(&records).map_err(|e| io_err(&records, e))?;
        Ok(RunStore {
            dir,
            index: Mutex::new(()),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn write_config(&self, config: &impl Serialize) -> Result<(), PipelineError> {
        let path = self.dir.join("config.json");
        let json = serde_json::to_vec_pretty(config).map_err(|e| io_err(&path, e))?;
        write_atomic(&path, &json)
    }

    pub fn record_path(&self, case_id: &str, system: System) -> PathBuf {
        self.dir.join("records").join(format!("{case_id}__{system}.json"))
    }

    pub fn save(&self, record: &RunRecord) -> Result<(), PipelineError> {
        let id = &record.run.case_id;
        if !safe_id(id) {
            return Err(PipelineError::Store(format!("case id {id:?} is not filename-safe")));
        }
        let path = self.record_path(id, record.run.system);
        let json = serde_json::to_vec_pretty(record).map_err(|e| io_err(&path, e))?;
        write_atomic(&path, &json)?;

        let line = IndexLine {
            case_id: id.clone(),
            system: record.run.system,
            degraded: record.run.degraded,
            scored: record.scores.is_some(),
        };
        let mut text = serde_json::to_string(&line).map_err(|e| io_err(&path, e))?;
        text.push('\n');
        let index = self.dir.join("index.jsonl");
        let _guard = self.index.lock().unwrap();
        let mut f = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&index)
            .map_err(|e| io_err(&index, e))?;
        f.write_all(text.as_bytes()).map_err(|e| io_err(&index, e))
    }

    /// Completed (case, system) pairs. A torn final line from an interrupted
    /// write is ignored.
    pub fn completed(&self) -> Result<BTreeSet<(String, System)>, PipelineError> {
        let index = self.dir.join("index.jsonl");
        let text = match fs::read_to_string(&index) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(BTreeSet::new()),
            Err(e) => return Err(io_err(&index, e)),
        };
        Ok(text
            .lines()
            .filter_map(|l| serde_json::from_str::<IndexLine>(l).ok())
            .filter(|l| self.record_path(&l.case_id, l.system).exists())
            .map(|l| (l.case_id, l.system))
            .collect())
    }

    pub fn load(&self, case_id: &str, system: System) -> Result<RunRecord, PipelineError> {
        let path = self.record_path(case_id, system);
        let text = fs::read_to_string(&path).map_err(|e| io_err(&path, e))?;
        serde_json::from_str(&text).map_err(|e| io_err(&path, e))
    }

    /// Every indexed record, ordered by case id then system.
    pub fn load_all(&self) -> Result<Vec<RunRecord>, PipelineError> {
        self.completed()?
            .into_iter()
            .map(|(c, s)| self.load(&c, s))
            .collect()
    }
}
