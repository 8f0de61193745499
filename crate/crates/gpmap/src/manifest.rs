//! Run manifests: every file-producing run leaves one JSON record of the
//! fully resolved configuration, the files it wrote, and their checksums.
//! Re-running with a manifest's configuration reproduces the payload files
//! byte for byte.

use std::collections::BTreeMap;
use std::fs;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;

pub const MANIFEST_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub format_version: u32,
    pub tool: String,
    pub tool_version: String,
    pub subcommand: String,
    pub isa_id: String,
    pub created_utc: String,
    pub duration_seconds: f64,
    /// Fully resolved configuration of the run.
    pub config: serde_json::Value,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    /// SHA-256 of each payload file, keyed by file name.
    pub payload_sha256: BTreeMap<String, String>,
}

impl RunManifest {
    pub fn new(subcommand: &str, isa_id: &str, config: serde_json::Value) -> Self {
        RunManifest {
            format_version: MANIFEST_FORMAT_VERSION,
            tool: "gpmap".to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            subcommand: subcommand.to_string(),
            isa_id: isa_id.to_string(),
            created_utc: now_utc(),
            duration_seconds: 0.0,
            config,
            inputs: Vec::new(),
            outputs: Vec::new(),
            payload_sha256: BTreeMap::new(),
        }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        fs::write(path, text)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }
}

pub fn now_utc() -> String {
    chrono::Utc::now()
        .to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn sha256_hex_file(path: &Path) -> Result<String> {
    let mut file = fs::File::open(path)?;
    let mut hasher = Sha256::new();
    let mut buffer = [0u8; 64 * 1024];
    loop {
        let n = file.read(&mut buffer)?;
        if n == 0 {
            break;
        }
        hasher.update(&buffer[..n]);
    }
    Ok(hex::encode(hasher.finalize()))
}
