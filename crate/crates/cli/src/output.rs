//! Ordered output writer and run manifest.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, Serialize)]
pub struct FileHash {
    pub path: String,
    pub sha256: String,
}

impl FileHash {
    pub fn of_file(path: &Path) -> Result<Self, CliError> {
        let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
        Ok(Self {
            path: path.display().to_string(),
            sha256: sha256_hex(&bytes),
        })
    }
}

/// Per-horizon sample accounting.
#[derive(Debug, Clone, Serialize)]
pub struct HorizonRecord {
    pub outcome: String,
    pub h: usize,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_obs: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_clusters: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_fe_groups: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub singletons_dropped: Option<usize>,
    pub dropped_columns: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    config_hash: String,
    config: &'a serde_json::Value,
    inputs: &'a [FileHash],
    outputs: &'a [FileHash],
    #[serde(skip_serializing_if = "<[_]>::is_empty")]
    samples: &'a [HorizonRecord],
}

/// Every file of a run goes through here, in a fixed order, so the manifest
/// can list each with its content hash.
pub struct OutputDir {
    root: PathBuf,
    written: Vec<FileHash>,
}

impl OutputDir {
    pub fn create(root: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(root).map_err(|e| CliError::io(root, e))?;
        Ok(Self {
            root: root.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<PathBuf, CliError> {
        let path = self.path(name);
        fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))?;
        self.written.push(FileHash {
            path: name.to_owned(),
            sha256: sha256_hex(bytes),
        });
        Ok(path)
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<PathBuf, CliError> {
        let mut bytes = serde_json::to_vec_pretty(value)?;
        bytes.push(b'\n');
        self.write(name, &bytes)
    }

    /// Writes `manifest.json`. The configuration hash covers the canonical
    /// compact JSON of `config`.
    pub fn finish(
        self,
        command: &str,
        config: &serde_json::Value,
        inputs: &[FileHash],
        samples: &[HorizonRecord],
    ) -> Result<PathBuf, CliError> {
        let manifest = Manifest {
            tool: "signlp",
            version: env!("CARGO_PKG_VERSION"),
            command,
            config_hash: sha256_hex(&serde_json::to_vec(config)?),
            config,
            inputs,
            outputs: &self.written,
            samples,
        };
        let path = self.path("manifest.json");
        let mut bytes = serde_json::to_vec_pretty(&manifest)?;
        bytes.push(b'\n');
        fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))?;
        Ok(path)
    }
}
