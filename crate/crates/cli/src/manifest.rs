//! Run manifest and the on-disk layout of a run directory.

use crate::error::{CliError, Result};
use crate::run::{Artifact, Format};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::Path;

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FileEntry {
    pub name: String,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub experiment: String,
    /// SHA-256 of the canonical JSON form of the effective config.
    pub config_sha256: String,
    pub seed: u64,
    pub format: String,
    /// Quantization tolerance used for phase-diagram plots.
    #[serde(default)]
    pub tolerance: Option<f64>,
    pub started: String,
    pub finished: String,
    pub files: Vec<FileEntry>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub struct ManifestInput<'a> {
    pub experiment: &'a str,
    pub canonical_config: &'a str,
    pub seed: u64,
    pub format: Format,
    pub tolerance: Option<f64>,
    pub started: String,
}

/// Writes every artifact, in order, followed by the manifest.
pub fn write_run(dir: &Path, artifacts: &[Artifact], input: ManifestInput<'_>) -> Result<RunManifest> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut files = Vec::with_capacity(artifacts.len());
    for a in artifacts {
        let path = dir.join(&a.name);
        std::fs::write(&path, &a.contents).map_err(|e| CliError::io(&path, e))?;
        files.push(FileEntry { name: a.name.clone(), sha256: sha256_hex(a.contents.as_bytes()) });
    }
    let manifest = RunManifest {
        tool: "qwtopo".to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        experiment: input.experiment.to_string(),
        config_sha256: sha256_hex(input.canonical_config.as_bytes()),
        seed: input.seed,
        format: input.format.extension().to_string(),
        tolerance: input.tolerance,
        started: input.started,
        finished: chrono::Utc::now().to_rfc3339(),
        files,
    };
    let path = dir.join(MANIFEST_FILE);
    let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    text.push('\n');
    std::fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
    Ok(manifest)
}

/// Reads the manifest of a run directory, if there is one.
pub fn read_manifest(dir: &Path) -> Result<Option<RunManifest>> {
    let path = dir.join(MANIFEST_FILE);
    if !path.exists() {
        return Ok(None);
    }
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
    let manifest = serde_json::from_str(&text)
        .map_err(|e| CliError::io(&path, std::io::Error::new(std::io::ErrorKind::InvalidData, e)))?;
    Ok(Some(manifest))
}
