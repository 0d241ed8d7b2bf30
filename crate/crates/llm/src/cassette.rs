//! JSON-Lines cassettes of prompt/response pairs keyed by a request hash.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::LlmError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CassetteMode {
    /// Call the provider and append every exchange.
    Record,
    /// Serve only from recorded entries; a miss is an error.
    Replay,
    /// Call the provider without recording.
    Passthrough,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CassetteEntry {
    pub hash: String,
    pub provider: String,
    pub model: String,
    pub prompt: String,
    pub response: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub temperature: Option<f64>,
}

/// Hex SHA-256 of `provider \0 model \0 prompt`.
pub fn request_hash(provider: &str, model: &str, prompt: &str) -> String {
    let mut h = Sha256::new();
    h.update(provider.as_bytes());
    h.update([0]);
    h.update(model.as_bytes());
    h.update([0]);
    h.update(prompt.as_bytes());
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug)]
pub struct Cassette {
    mode: CassetteMode,
    path: Option<PathBuf>,
    entries: Vec<CassetteEntry>,
    index: HashMap<String, usize>,
}

impl Cassette {
    pub fn in_memory(mode: CassetteMode) -> Self {
        Self { mode, path: None, entries: Vec::new(), index: HashMap::new() }
    }

    /// Opens a cassette file. A missing file is an empty cassette, except in
    /// Replay mode where it is an error.
    pub fn open(path: impl AsRef<Path>, mode: CassetteMode) -> Result<Self, LlmError> {
        let path = path.as_ref().to_path_buf();
        let err = |message: String| LlmError::Cassette { path: path.display().to_string(), message };
        let mut cassette = Self { mode, path: Some(path.clone()), entries: Vec::new(), index: HashMap::new() };
        let file = match File::open(&path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound && mode != CassetteMode::Replay => {
                return Ok(cassette)
            }
            Err(e) => return Err(err(e.to_string())),
        };
        for (n, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(|e| err(e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let entry: CassetteEntry =
                serde_json::from_str(&line).map_err(|e| err(format!("line {}: {e}", n + 1)))?;
            cassette.insert(entry);
        }
        Ok(cassette)
    }

    pub fn mode(&self) -> CassetteMode {
        self.mode
    }

    pub fn entries(&self) -> &[CassetteEntry] {
        &self.entries
    }

    pub fn lookup(&self, hash: &str) -> Option<&CassetteEntry> {
        self.index.get(hash).map(|&i| &self.entries[i])
    }

    fn insert(&mut self, entry: CassetteEntry) {
        // Later entries for the same request win.
        match self.index.get(&entry.hash) {
            Some(&i) => self.entries[i] = entry,
            None => {
                self.index.insert(entry.hash.clone(), self.entries.len());
                self.entries.push(entry);
            }
        }
    }

    /// Adds an entry and, for file-backed cassettes, appends it under an
    /// exclusive file lock.
    pub fn record(&mut self, entry: CassetteEntry) -> Result<(), LlmError> {
        if let Some(path) = &self.path {
            let err = |e: std::io::Error| LlmError::Cassette { path: path.display().to_string(), message: e.to_string() };
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent).map_err(err)?;
            }
            let mut file = OpenOptions::new().create(true).append(true).open(path).map_err(err)?;
            file.lock().map_err(err)?;
            let mut line = serde_json::to_string(&entry).expect("cassette entries serialize");
            line.push('\n');
            let written = file.write_all(line.as_bytes()).and_then(|_| file.flush());
            file.unlock().map_err(err)?;
            written.map_err(err)?;
        }
        self.insert(entry);
        Ok(())
    }
}
