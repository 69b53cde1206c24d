//! Run manifests: one JSON file per artifact-producing command.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub seed: Option<u64>,
    pub config: serde_json::Value,
    /// Input path to sha256 of its contents.
    pub inputs: BTreeMap<String, String>,
    /// Output file name to sha256 of its contents.
    pub outputs: BTreeMap<String, String>,
    pub started: String,
    pub finished: String,
}

impl RunManifest {
    /// The manifest without its timestamps, for rerun comparisons.
    pub fn reproducible_part(&self) -> RunManifest {
        RunManifest {
            started: String::new(),
            finished: String::new(),
            ..self.clone()
        }
    }

    pub fn load(path: &Path) -> Result<RunManifest> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn file_sha256(path: &Path) -> Result<String> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(sha256_hex(&bytes))
}

pub fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

/// Collects inputs and written outputs while a command runs.
pub struct Recorder {
    manifest: RunManifest,
}

impl Recorder {
    pub fn new<C: Serialize>(command: &str, seed: Option<u64>, config: &C) -> Result<Self> {
        Ok(Self {
            manifest: RunManifest {
                tool: env!("CARGO_PKG_NAME").to_string(),
                version: env!("CARGO_PKG_VERSION").to_string(),
                command: command.to_string(),
                seed,
                config: serde_json::to_value(config)?,
                inputs: BTreeMap::new(),
                outputs: BTreeMap::new(),
                started: now(),
                finished: String::new(),
            },
        })
    }

    pub fn input(&mut self, path: &Path) -> Result<()> {
        let digest = file_sha256(path)?;
        self.manifest.inputs.insert(path.display().to_string(), digest);
        Ok(())
    }

    /// Writes `contents` to `dir/name` and records its checksum.
    pub fn output(&mut self, dir: &Path, name: &str, contents: &str) -> Result<()> {
        let path = dir.join(name);
        fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
        self.manifest.outputs.insert(name.to_string(), sha256_hex(contents.as_bytes()));
        Ok(())
    }

    pub fn finish(mut self, dir: &Path) -> Result<RunManifest> {
        self.manifest.finished = now();
        let path = dir.join(MANIFEST_FILE);
        let text = serde_json::to_string_pretty(&self.manifest)? + "\n";
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        Ok(self.manifest)
    }
}
