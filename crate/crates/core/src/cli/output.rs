use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};
use tempfile::NamedTempFile;

use crate::error::{Error, Result};

/// Provenance written next to the primary output as `<output>.manifest.json`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub tool_version: String,
    pub inputs: Vec<PathBuf>,
    pub config_digest: String,
    pub seed: Option<u64>,
    pub outputs: Vec<PathBuf>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn manifest_path(primary: &Path) -> PathBuf {
    let mut name = primary.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    primary.with_file_name(name)
}

/// Collects outputs in temporary files beside their destinations. Nothing
/// appears at the destinations until [`Outputs::commit`]; dropping the set
/// without committing removes the temporaries.
pub struct Outputs {
    pending: Vec<(NamedTempFile, PathBuf)>,
}

impl Outputs {
    pub fn new() -> Self {
        Self {
            pending: Vec::new(),
        }
    }

    /// Opens a temporary file for `dest` and hands it to `write`.
    pub fn write_with<F>(&mut self, dest: &Path, write: F) -> Result<()>
    where
        F: FnOnce(&mut dyn Write) -> Result<()>,
    {
        let dir = match dest.parent() {
            Some(p) if !p.as_os_str().is_empty() => p,
            _ => Path::new("."),
        };
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let mut tmp = tempfile::Builder::new()
            .prefix(".fwa-")
            .tempfile_in(dir)
            .map_err(|e| Error::io(dir, e))?;
        {
            let mut w = BufWriter::new(tmp.as_file_mut());
            write(&mut w)?;
            w.flush().map_err(|e| Error::io(dest, e))?;
        }
        self.pending.push((tmp, dest.to_path_buf()));
        Ok(())
    }

    pub fn write_bytes(&mut self, dest: &Path, bytes: &[u8]) -> Result<()> {
        self.write_with(dest, |w| w.write_all(bytes).map_err(|e| Error::io(dest, e)))
    }

    pub fn paths(&self) -> Vec<PathBuf> {
        self.pending.iter().map(|(_, p)| p.clone()).collect()
    }

    /// Adds the manifest for `primary` and moves every file into place.
    pub fn commit(
        mut self,
        primary: &Path,
        command: &str,
        inputs: Vec<PathBuf>,
        config_digest: String,
        seed: Option<u64>,
    ) -> Result<()> {
        let manifest = RunManifest {
            command: command.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            inputs,
            config_digest,
            seed,
            outputs: self.paths(),
        };
        let json = serde_json::to_vec_pretty(&manifest)
            .map_err(|e| Error::Serialization(e.to_string()))?;
        self.write_bytes(&manifest_path(primary), &json)?;
        for (tmp, dest) in self.pending {
            tmp.persist(&dest).map_err(|e| Error::io(&dest, e.error))?;
        }
        Ok(())
    }
}

impl Default for Outputs {
    fn default() -> Self {
        Self::new()
    }
}
