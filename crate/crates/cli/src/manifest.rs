use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

/// Everything needed to rerun an invocation and check its output.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub argv: Vec<String>,
    pub flags: serde_json::Value,
    pub seed: u64,
    pub version: String,
    pub output: String,
    pub sha256: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metadata: Option<serde_json::Value>,
}

pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    output.with_file_name(name)
}

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Writes `contents` to `output` and its manifest next to it.
pub fn write_with_manifest(
    output: &Path,
    contents: &str,
    command: &str,
    flags: &impl Serialize,
    seed: u64,
    metadata: Option<serde_json::Value>,
) -> Result<()> {
    std::fs::write(output, contents).with_context(|| format!("writing {}", output.display()))?;
    let manifest = RunManifest {
        command: command.to_string(),
        argv: std::env::args().skip(1).collect(),
        flags: serde_json::to_value(flags)?,
        seed,
        version: env!("CARGO_PKG_VERSION").to_string(),
        output: output.display().to_string(),
        sha256: digest(contents.as_bytes()),
        metadata,
    };
    let path = manifest_path(output);
    std::fs::write(&path, serde_json::to_string_pretty(&manifest)? + "\n")
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}
