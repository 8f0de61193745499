//! Shard-granular checkpoints for resumable census runs.
//!
//! A checkpoint directory holds one `config.json` echo plus one binary file
//! per completed shard, each written through a temp-file rename so a killed
//! run never leaves a torn checkpoint. Resuming with a different
//! configuration is refused; shard files that fail validation are discarded
//! and their ranges recomputed.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::files::write_atomic;
use super::{CensusConfig, ShardResult};

const SHARD_MAGIC: &[u8; 4] = b"GPCK";
const SHARD_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CheckpointConfig {
    pub format_version: u32,
    pub isa_id: String,
    pub length: u32,
    pub alphabet: u8,
    pub step_limit: u64,
    pub offspring_cap: u32,
    pub chain_depth: u32,
    pub chain_width: u32,
    pub shard_count: u32,
    pub total: String,
}

impl CheckpointConfig {
    pub fn of(config: &CensusConfig) -> Self {
        CheckpointConfig {
            format_version: SHARD_VERSION,
            isa_id: config.isa.id().to_string(),
            length: config.length,
            alphabet: config.alphabet(),
            step_limit: config.limits.step_limit,
            offspring_cap: config.limits.offspring_cap as u32,
            chain_depth: config.budgets.max_chain as u32,
            chain_width: config.budgets.max_genotypes as u32,
            shard_count: config.shard_count,
            total: config.total().to_string(),
        }
    }
}

#[derive(Debug)]
pub struct Checkpoint {
    dir: PathBuf,
}

impl Checkpoint {
    /// Open or create the checkpoint directory, returning the shard results
    /// already completed by an earlier run.
    pub fn open(dir: &Path, config: &CensusConfig) -> Result<(Self, Vec<ShardResult>)> {
        let expected = CheckpointConfig::of(config);
        let config_path = dir.join("config.json");
        let mut done = Vec::new();

        if dir.is_dir() && config_path.is_file() {
            let found: CheckpointConfig = serde_json::from_str(&fs::read_to_string(&config_path)?)
                .map_err(|e| Error::CheckpointMismatch {
                    path: dir.to_path_buf(),
                    detail: format!("unreadable config.json: {e}"),
                })?;
            if found != expected {
                return Err(Error::CheckpointMismatch {
                    path: dir.to_path_buf(),
                    detail: describe_mismatch(&found, &expected),
                });
            }
            for entry in fs::read_dir(dir)? {
                let path = entry?.path();
                let name = path.file_name().map(|n| n.to_string_lossy().into_owned());
                let Some(name) = name else { continue };
                if name.ends_with(".tmp") {
                    // Torn write from a killed run; recompute that shard.
                    let _ = fs::remove_file(&path);
                    continue;
                }
                if name.starts_with("shard-") && name.ends_with(".bin") {
                    if let Some(shard) = read_shard(&path, config) {
                        done.push(shard);
                    } else {
                        let _ = fs::remove_file(&path);
                    }
                }
            }
            done.sort_by_key(|s| s.index);
            done.dedup_by_key(|s| s.index);
        } else {
            fs::create_dir_all(dir)?;
            let mut text = serde_json::to_string_pretty(&expected)?;
            text.push('\n');
            write_atomic(&config_path, text.as_bytes())?;
        }

        Ok((
            Checkpoint {
                dir: dir.to_path_buf(),
            },
            done,
        ))
    }

    /// Persist one completed shard.
    pub fn store(&self, shard: &ShardResult) -> Result<()> {
        let path = self.dir.join(format!("shard-{:05}.bin", shard.index));
        write_atomic(&path, &encode_shard(shard))?;
        Ok(())
    }

    /// Delete the checkpoint directory after a successful run.
    pub fn remove(self) -> Result<()> {
        fs::remove_dir_all(&self.dir)?;
        Ok(())
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }
}

fn describe_mismatch(found: &CheckpointConfig, expected: &CheckpointConfig) -> String {
    macro_rules! diff {
        ($field:ident) => {
            if found.$field != expected.$field {
                return format!(
                    "{} is {:?} in the checkpoint but {:?} now",
                    stringify!($field),
                    found.$field,
                    expected.$field
                );
            }
        };
    }
    diff!(isa_id);
    diff!(length);
    diff!(alphabet);
    diff!(step_limit);
    diff!(offspring_cap);
    diff!(chain_depth);
    diff!(chain_width);
    diff!(shard_count);
    diff!(total);
    diff!(format_version);
    "configurations differ".to_string()
}

fn encode_shard(shard: &ShardResult) -> Vec<u8> {
    let mut bytes = Vec::with_capacity(4 + 4 + 8 * (5 + shard.viable_ranks.len()));
    bytes.extend_from_slice(SHARD_MAGIC);
    bytes.extend_from_slice(&SHARD_VERSION.to_le_bytes());
    bytes.extend_from_slice(&(shard.index as u64).to_le_bytes());
    bytes.extend_from_slice(&shard.lo.to_le_bytes());
    bytes.extend_from_slice(&shard.hi.to_le_bytes());
    bytes.extend_from_slice(&shard.self_replicators.to_le_bytes());
    bytes.extend_from_slice(&(shard.viable_ranks.len() as u64).to_le_bytes());
    for &rank in &shard.viable_ranks {
        bytes.extend_from_slice(&rank.to_le_bytes());
    }
    bytes
}

/// Decode and validate one shard file; `None` means the file is unusable
/// and its range must be recomputed.
fn read_shard(path: &Path, config: &CensusConfig) -> Option<ShardResult> {
    let bytes = fs::read(path).ok()?;
    if bytes.len() < 48 || &bytes[0..4] != SHARD_MAGIC {
        return None;
    }
    let version = u32::from_le_bytes(bytes[4..8].try_into().ok()?);
    if version != SHARD_VERSION {
        return None;
    }
    let word = |i: usize| -> Option<u64> {
        bytes
            .get(8 + i * 8..16 + i * 8)
            .map(|c| u64::from_le_bytes(c.try_into().expect("8 bytes")))
    };
    let index = u32::try_from(word(0)?).ok()?;
    let lo = word(1)?;
    let hi = word(2)?;
    let self_replicators = word(3)?;
    let count = word(4)? as usize;
    if index >= config.shard_count || config.shard_range(index) != (lo, hi) {
        return None;
    }
    if bytes.len() != 48 + count * 8 {
        return None;
    }
    let mut viable_ranks = Vec::with_capacity(count);
    let mut previous: Option<u64> = None;
    for chunk in bytes[48..].chunks_exact(8) {
        let rank = u64::from_le_bytes(chunk.try_into().expect("8 bytes"));
        if rank < lo || rank >= hi || previous.is_some_and(|p| p >= rank) {
            return None;
        }
        previous = Some(rank);
        viable_ranks.push(rank);
    }
    if self_replicators > count as u64 {
        return None;
    }
    Some(ShardResult {
        index,
        lo,
        hi,
        viable_ranks,
        self_replicators,
    })
}
