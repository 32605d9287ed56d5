//! Run manifests: every output directory gets exactly one `manifest.json`
//! recording the command line, tool version, configuration snapshot, seed,
//! input/output hashes, warnings, and timestamps. Re-running the same
//! command on the same inputs reproduces byte-identical numeric outputs,
//! which the recorded hashes make checkable.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use halvekit_core::io::{self, IoError};

#[derive(Debug, Clone, Serialize)]
pub struct FileHash {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub tool_version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub config: serde_json::Value,
    pub inputs: Vec<FileHash>,
    pub outputs: Vec<FileHash>,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub started_utc: String,
    pub finished_utc: String,
}

pub fn hash_file(path: &Path) -> Result<String, IoError> {
    let bytes = fs::read(path).map_err(|source| IoError::Read {
        path: path.display().to_string(),
        source,
    })?;
    Ok(format!("{:x}", Sha256::digest(&bytes)))
}

/// Collects a run's provenance and writes `manifest.json` at the end.
pub struct ManifestBuilder {
    out_dir: PathBuf,
    manifest: RunManifest,
}

impl ManifestBuilder {
    pub fn new(out_dir: &Path, config: serde_json::Value, seed: Option<u64>) -> Self {
        let command = std::env::args().collect::<Vec<_>>().join(" ");
        Self {
            out_dir: out_dir.to_path_buf(),
            manifest: RunManifest {
                command,
                tool_version: env!("CARGO_PKG_VERSION").to_string(),
                seed,
                config,
                inputs: Vec::new(),
                outputs: Vec::new(),
                warnings: Vec::new(),
                error: None,
                started_utc: chrono::Utc::now().to_rfc3339(),
                finished_utc: String::new(),
            },
        }
    }

    pub fn add_input(&mut self, path: &Path) -> Result<(), IoError> {
        let sha256 = hash_file(path)?;
        self.manifest.inputs.push(FileHash {
            path: path.display().to_string(),
            sha256,
        });
        Ok(())
    }

    pub fn add_output(&mut self, path: &Path) -> Result<(), IoError> {
        let sha256 = hash_file(path)?;
        self.manifest.outputs.push(FileHash {
            path: path.display().to_string(),
            sha256,
        });
        Ok(())
    }

    pub fn warn(&mut self, message: impl Into<String>) {
        self.manifest.warnings.push(message.into());
    }

    /// Writes the manifest, recording an error message when the run failed.
    pub fn finish(mut self, error: Option<String>) -> Result<(), IoError> {
        self.manifest.error = error;
        self.manifest.finished_utc = chrono::Utc::now().to_rfc3339();
        io::write_json(&self.out_dir.join("manifest.json"), &self.manifest)
    }
}
