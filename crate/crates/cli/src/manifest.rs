//! The run manifest written next to every command's outputs. Contains no
//! timestamps, so identical runs produce identical manifests.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::{Deserialize, Serialize};

use harakat_core::container::atomic_write;
use harakat_core::pipeline::{fingerprint_file, TOOLKIT_VERSION};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub toolkit_version: String,
    pub command: String,
    pub config: BTreeMap<String, String>,
    pub seeds: BTreeMap<String, u64>,
    pub input_fingerprints: BTreeMap<String, String>,
    pub output_paths: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &str) -> RunManifest {
        RunManifest {
            toolkit_version: TOOLKIT_VERSION.to_string(),
            command: command.to_string(),
            config: BTreeMap::new(),
            seeds: BTreeMap::new(),
            input_fingerprints: BTreeMap::new(),
            output_paths: Vec::new(),
        }
    }

    pub fn fingerprint_input(&mut self, path: &Path) -> anyhow::Result<()> {
        let digest = fingerprint_file(path)
            .with_context(|| format!("fingerprinting {}", path.display()))?;
        self.input_fingerprints
            .insert(path.display().to_string(), digest);
        Ok(())
    }

    pub fn record_output(&mut self, path: &Path) {
        self.output_paths.push(path.display().to_string());
    }

    pub fn write(&self, path: &PathBuf) -> anyhow::Result<()> {
        let mut bytes = serde_json::to_vec_pretty(self)?;
        bytes.push(b'\n');
        atomic_write(path, &bytes).with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    }
}
