//! Layered run configuration: defaults, then the TOML config file, then
//! command-line flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Deserialize;

use harakat_core::corpus::CorpusFormat;

use crate::usage_error;

/// Environment variable naming a directory searched for resource files
/// (gazetteers) given by relative path.
pub const RESOURCE_DIR_ENV: &str = "HARAKAT_RESOURCES";

/// Optional settings a config file may provide. Every key can also be set
/// by a flag, and flags win.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub corpus: Option<PathBuf>,
    pub format: Option<String>,
    pub annotator: Option<String>,
    pub feature_set: Option<String>,
    pub seed: Option<u64>,
    pub learning_rate: Option<f64>,
    pub batch_size: Option<usize>,
    pub patience: Option<usize>,
    pub max_epochs: Option<usize>,
    pub validation_fraction: Option<f64>,
    pub gazetteer: Option<PathBuf>,
    pub post_correct: Option<String>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> anyhow::Result<FileConfig> {
        let Some(path) = path else {
            return Ok(FileConfig::default());
        };
        if !path.is_file() {
            return usage_error(format!("config file not found: {}", path.display()));
        }
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let parsed: FileConfig = toml::from_str(&text)
            .with_context(|| format!("parsing config {}", path.display()))?;
        Ok(parsed)
    }
}

pub fn parse_format(name: &str) -> anyhow::Result<CorpusFormat> {
    match name {
        "plain" => Ok(CorpusFormat::Plain),
        "tsv" => Ok(CorpusFormat::Tsv),
        other => usage_error(format!("unknown corpus format {other:?} (plain, tsv)")),
    }
}

pub fn parse_on_off(name: &str) -> anyhow::Result<bool> {
    match name {
        "on" => Ok(true),
        "off" => Ok(false),
        other => usage_error(format!("expected on/off, got {other:?}")),
    }
}

/// Resolves a resource path: as given if it exists, otherwise under
/// `$HARAKAT_RESOURCES`.
pub fn resolve_resource(path: &Path) -> PathBuf {
    if path.is_file() || path.is_absolute() {
        return path.to_path_buf();
    }
    if let Ok(dir) = std::env::var(RESOURCE_DIR_ENV) {
        let candidate = PathBuf::from(dir).join(path);
        if candidate.is_file() {
            return candidate;
        }
    }
    path.to_path_buf()
}

/// Flag value if present, else config value, else default.
pub fn pick<T: Clone>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

pub fn pick_opt<T: Clone>(flag: Option<T>, file: Option<T>) -> Option<T> {
    flag.or(file)
}

/// Renders the resolved configuration for the manifest.
pub fn resolved_map(entries: &[(&str, String)]) -> BTreeMap<String, String> {
    entries
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}
