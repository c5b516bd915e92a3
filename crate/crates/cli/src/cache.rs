//! Content-addressed result cache. One JSON file per entry, named by the
//! SHA-256 of the schema version, operation and canonical argument text.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

/// Bump when any cached payload format changes.
pub const SCHEMA_VERSION: u64 = 1;

#[derive(Clone, Debug)]
pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        Cache { dir }
    }

    pub fn key(op: &str, args: &str) -> String {
        let mut h = Sha256::new();
        h.update(format!("v{SCHEMA_VERSION}\n{op}\n{args}").as_bytes());
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    fn path(dir: &Path, op: &str, key: &str) -> PathBuf {
        dir.join(op).join(&key[..2]).join(format!("{key}.json"))
    }

    /// A stored payload, if present and written under the current schema for
    /// exactly these arguments.
    pub fn get(&self, op: &str, args: &str) -> Option<String> {
        let dir = self.dir.as_ref()?;
        let text = fs::read_to_string(Self::path(dir, op, &Self::key(op, args))).ok()?;
        let v: Value = serde_json::from_str(&text).ok()?;
        if v["version"].as_u64() != Some(SCHEMA_VERSION) || v["op"] != op || v["args"] != args {
            return None;
        }
        v["payload"].as_str().map(str::to_string)
    }

    /// Write through a temporary file in the target directory and rename it
    /// into place, so readers never see a partial entry.
    pub fn put(&self, op: &str, args: &str, payload: &str) -> std::io::Result<()> {
        let Some(dir) = &self.dir else { return Ok(()) };
        let path = Self::path(dir, op, &Self::key(op, args));
        let parent = path.parent().unwrap();
        fs::create_dir_all(parent)?;
        let entry = json!({ "version": SCHEMA_VERSION, "op": op, "args": args, "payload": payload });
        let mut tmp = tempfile::NamedTempFile::new_in(parent)?;
        tmp.write_all(serde_json::to_string(&entry)?.as_bytes())?;
        tmp.as_file().sync_all()?;
        tmp.persist(&path).map_err(|e| e.error)?;
        Ok(())
    }

    pub fn get_or<E>(&self, op: &str, args: &str, f: impl FnOnce() -> Result<String, E>) -> Result<String, E> {
        if let Some(hit) = self.get(op, args) {
            return Ok(hit);
        }
        let payload = f()?;
        // a failed write only costs a recomputation next time
        let _ = self.put(op, args, &payload);
        Ok(payload)
    }
}
