//! One JSON document per session under a directory. Writes go through a
//! temporary file and a rename so readers never see partial documents.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use chrono::{DateTime, Utc};
use ontowb_llm::{Methodology, SessionState, WorkflowSession};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("unknown session {0}")]
    NotFound(String),
    #[error("invalid session id {0:?}")]
    InvalidId(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SessionSummary {
    pub id: String,
    pub methodology: Methodology,
    pub provider: String,
    pub model: String,
    pub state: SessionState,
    pub revision: u64,
    pub pending_human_action: Option<String>,
    pub updated_at: DateTime<Utc>,
}

impl From<&WorkflowSession> for SessionSummary {
    fn from(s: &WorkflowSession) -> Self {
        Self {
            id: s.id.clone(),
            methodology: s.methodology,
            provider: s.provider.clone(),
            model: s.model.clone(),
            state: s.state,
            revision: s.revision,
            pending_human_action: s.pending_human_action.clone(),
            updated_at: s.updated_at,
        }
    }
}

/// Session ids double as file names.
pub fn valid_id(id: &str) -> bool {
    !id.is_empty()
        && id.len() <= 128
        && !id.starts_with('.')
        && id.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'))
}

#[derive(Debug, Clone)]
pub struct SessionStore {
    dir: PathBuf,
}

impl SessionStore {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, id: &str) -> Result<PathBuf, StoreError> {
        if !valid_id(id) {
            return Err(StoreError::InvalidId(id.to_string()));
        }
        Ok(self.dir.join(format!("{id}.json")))
    }

    pub fn load(&self, id: &str) -> Result<WorkflowSession, StoreError> {
        let path = self.path(id)?;
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Err(StoreError::NotFound(id.to_string())),
            Err(source) => return Err(StoreError::Io { path, source }),
        };
        serde_json::from_str(&text).map_err(|source| StoreError::Json { path, source })
    }

    pub fn save(&self, s: &WorkflowSession) -> Result<(), StoreError> {
        let path = self.path(&s.id)?;
        let io = |source| StoreError::Io { path: path.clone(), source };
        fs::create_dir_all(&self.dir).map_err(io)?;
        let json = serde_json::to_string_pretty(s).expect("sessions serialize");
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir).map_err(io)?;
        tmp.write_all(json.as_bytes()).map_err(io)?;
        tmp.write_all(b"\n").map_err(io)?;
        tmp.as_file().sync_all().map_err(io)?;
        tmp.persist(&path).map_err(|e| io(e.error))?;
        Ok(())
    }

    /// Summaries of every readable session, sorted by id. A missing
    /// directory lists as empty.
    pub fn list(&self) -> Result<Vec<SessionSummary>, StoreError> {
        let entries = match fs::read_dir(&self.dir) {
            Ok(e) => e,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(source) => return Err(StoreError::Io { path: self.dir.clone(), source }),
        };
        let mut out = Vec::new();
        for entry in entries {
            let entry = entry.map_err(|source| StoreError::Io { path: self.dir.clone(), source })?;
            let name = entry.file_name().to_string_lossy().into_owned();
            let Some(id) = name.strip_suffix(".json") else { continue };
            if !valid_id(id) {
                continue;
            }
            match self.load(id) {
                Ok(s) => out.push(SessionSummary::from(&s)),
                Err(e) => tracing::warn!(error = %e, "skipping unreadable session"),
            }
        }
        out.sort_by(|a, b| a.id.cmp(&b.id));
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ontowb_llm::LogicalClock;

    #[test]
    fn save_load_list() {
        let dir = tempfile::tempdir().unwrap();
        let store = SessionStore::new(dir.path().join("sessions"));
        assert!(store.list().unwrap().is_empty());
        let s = WorkflowSession::new("b-1", Methodology::OneShot, "p", "m", Default::default(), &LogicalClock::default());
        store.save(&s).unwrap();
        assert_eq!(store.load("b-1").unwrap(), s);
        assert_eq!(store.list().unwrap()[0].id, "b-1");
        assert!(matches!(store.load("nope"), Err(StoreError::NotFound(_))));
        assert!(matches!(store.load("../etc/passwd"), Err(StoreError::InvalidId(_))));
    }
}
