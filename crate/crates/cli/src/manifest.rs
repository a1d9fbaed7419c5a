//! Pipeline manifest: a `manifest.json` at the root of the output
//! directory recording, for each completed stage, the SHA-256 digest of
//! every input and output artifact plus the seed and config digest the
//! stage ran under. Two pipelines with identical manifests produced
//! byte-identical artifacts.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::path::Path;

use crate::CliError;

pub const MANIFEST_FILE: &str = "manifest.json";

/// One completed stage.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageRecord {
    pub stage: String,
    pub seed: u64,
    /// Digest of the effective config JSON the stage ran under.
    pub config_digest: String,
    /// Relative artifact path → SHA-256 hex digest.
    pub inputs: BTreeMap<String, String>,
    pub outputs: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineManifest {
    pub stages: Vec<StageRecord>,
}

impl PipelineManifest {
    /// Load the manifest from `out_dir`, or start an empty one.
    pub fn load(out_dir: &Path) -> Result<Self, CliError> {
        let path = out_dir.join(MANIFEST_FILE);
        if !path.exists() {
            return Ok(PipelineManifest::default());
        }
        let text = std::fs::read_to_string(&path)?;
        Ok(serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("corrupt {}: {e}", path.display())))?)
    }

    pub fn save(&self, out_dir: &Path) -> Result<(), CliError> {
        let text = serde_json::to_string_pretty(self).expect("manifest serializes");
        std::fs::write(out_dir.join(MANIFEST_FILE), text)?;
        Ok(())
    }

    /// Record a stage, replacing any earlier record with the same name
    /// (stages are idempotent; the latest run wins).
    pub fn record(&mut self, record: StageRecord) {
        self.stages.retain(|s| s.stage != record.stage);
        self.stages.push(record);
    }

    pub fn stage(&self, name: &str) -> Option<&StageRecord> {
        self.stages.iter().find(|s| s.stage == name)
    }
}

/// SHA-256 of a byte slice, as lowercase hex.
pub fn digest_bytes(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// SHA-256 of a file's contents.
pub fn digest_file(path: &Path) -> Result<String, CliError> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    Ok(digest_bytes(&bytes))
}

/// Digest every listed artifact, keyed by its path relative to `out_dir`.
pub fn digest_artifacts(
    out_dir: &Path,
    paths: &[&Path],
) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for path in paths {
        let key = path
            .strip_prefix(out_dir)
            .unwrap_or(path)
            .to_string_lossy()
            .into_owned();
        out.insert(key, digest_file(path)?);
    }
    Ok(out)
}
