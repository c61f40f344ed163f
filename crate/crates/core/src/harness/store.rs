use std::collections::HashMap;
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::spec::GroupSpec;
use super::suites::{SuiteId, Verdict};
use crate::error::HarnessError;

/// One suite result for one group.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub group: String,
    pub order: u64,
    pub suite: String,
    pub verdict: Verdict,
    pub witness: Value,
    pub spec_hash: String,
    pub version: String,
    /// The group's invariant line, so reports can be rebuilt from the store alone.
    pub profile: String,
}

/// Append-only JSONL store keyed by `(spec hash, suite id)`.
#[derive(Debug, Default)]
pub struct VerdictStore {
    path: Option<PathBuf>,
    records: HashMap<(String, String), VerdictRecord>,
}

impl VerdictStore {
    pub fn in_memory() -> Self {
        VerdictStore::default()
    }

    /// Load an existing store, or start an empty one at `path`.
    pub fn open(path: &Path) -> Result<Self, HarnessError> {
        let mut records = HashMap::new();
        if path.exists() {
            let text = fs::read_to_string(path)?;
            for (i, line) in text.lines().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                let rec: VerdictRecord = serde_json::from_str(line).map_err(|e| HarnessError::Parse {
                    path: path.display().to_string(),
                    line: i + 1,
                    field: "<record>".into(),
                    message: e.to_string(),
                })?;
                records.insert((rec.spec_hash.clone(), rec.suite.clone()), rec);
            }
        }
        Ok(VerdictStore {
            path: Some(path.to_path_buf()),
            records,
        })
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Cached record for `spec` and `suite`. A record under the same key that
    /// names a different group is a hash collision.
    pub fn lookup(&self, spec: &GroupSpec, suite: SuiteId) -> Result<Option<&VerdictRecord>, HarnessError> {
        let hash = spec.content_hash();
        match self.records.get(&(hash.clone(), suite.as_str().to_string())) {
            Some(rec) if rec.group != spec.name => Err(HarnessError::HashMismatch {
                group: spec.name.clone(),
                suite: suite.as_str().to_string(),
                stored: format!("{} ({})", rec.spec_hash, rec.group),
                computed: hash,
            }),
            other => Ok(other),
        }
    }

    pub fn append(&mut self, records: &[VerdictRecord]) -> Result<(), HarnessError> {
        if let Some(path) = &self.path {
            let mut file = OpenOptions::new().create(true).append(true).open(path)?;
            let mut buf = String::new();
            for rec in records {
                buf.push_str(&serde_json::to_string(rec)?);
                buf.push('\n');
            }
            file.write_all(buf.as_bytes())?;
        }
        for rec in records {
            self.records
                .insert((rec.spec_hash.clone(), rec.suite.clone()), rec.clone());
        }
        Ok(())
    }
}
