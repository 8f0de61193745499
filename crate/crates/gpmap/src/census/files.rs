//! The on-disk census format, bit-exact by construction.
//!
//! `<prefix>.meta.json`  - UTF-8 JSON header with counts and checksums.
//! `<prefix>.viable.bin` - viable ranks, strictly ascending, u64 little
//!                         endian, no header.
//! `<prefix>.bitmap.bin` - optional; ceil(D^L / 8) bytes, bit for rank r is
//!                         byte r>>3, bit r&7 (LSB-first).

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bitmap::Bitmap;
use crate::error::{Error, Result};
use crate::genome::space_size;
use crate::isa::IsaSpec;
use crate::manifest::{now_utc, sha256_hex, sha256_hex_file};
use crate::phenotype::ChainBudgets;
use crate::vm::ExecLimits;

use super::Census;

pub const META_FORMAT_VERSION: u32 = 1;

/// The `<prefix>.meta.json` document.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CensusMeta {
    pub format_version: u32,
    pub isa_id: String,
    #[serde(rename = "L")]
    pub length: u32,
    #[serde(rename = "D")]
    pub alphabet: u8,
    #[serde(rename = "T")]
    pub step_limit: u64,
    #[serde(rename = "M")]
    pub offspring_cap: u32,
    #[serde(rename = "G")]
    pub chain_depth: u32,
    #[serde(rename = "B")]
    pub chain_width: u32,
    /// D^L as a decimal string.
    pub total: String,
    pub viable_count: u64,
    pub self_replicator_count: u64,
    pub shard_count: u32,
    pub created_utc: String,
    /// SHA-256 of each payload file, keyed by file name.
    pub payload_sha256: BTreeMap<String, String>,
}

impl CensusMeta {
    pub fn isa(&self) -> Result<IsaSpec> {
        let base = IsaSpec::by_name(&self.isa_id)?;
        if self.alphabet < base.core_size() {
            return Err(Error::InvalidConfig(format!(
                "alphabet {} is smaller than the {} core instructions of {}",
                self.alphabet,
                base.core_size(),
                self.isa_id
            )));
        }
        let pad_nops = self.alphabet - base.core_size();
        base.with_pad_nops(pad_nops)
    }

    pub fn limits(&self) -> ExecLimits {
        ExecLimits {
            step_limit: self.step_limit,
            offspring_cap: self.offspring_cap as usize,
        }
    }

    pub fn budgets(&self) -> ChainBudgets {
        ChainBudgets {
            max_chain: self.chain_depth as usize,
            max_genotypes: self.chain_width as usize,
        }
    }
}

/// File names derived from an output prefix.
#[derive(Debug, Clone)]
pub struct CensusPaths {
    pub meta: PathBuf,
    pub viable: PathBuf,
    pub bitmap: PathBuf,
    pub manifest: PathBuf,
    pub checkpoint_dir: PathBuf,
}

impl CensusPaths {
    pub fn new(prefix: &Path) -> Self {
        let with = |suffix: &str| {
            let mut name = OsString::from(prefix.as_os_str());
            name.push(suffix);
            PathBuf::from(name)
        };
        CensusPaths {
            meta: with(".meta.json"),
            viable: with(".viable.bin"),
            bitmap: with(".bitmap.bin"),
            manifest: with(".manifest.json"),
            checkpoint_dir: with(".ckpt"),
        }
    }

    fn file_name(path: &Path) -> String {
        path.file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default()
    }
}

fn encode_ranks(ranks: &[u64]) -> Vec<u8> {
    let mut bytes = Vec::with_capacity(ranks.len() * 8);
    for &rank in ranks {
        bytes.extend_from_slice(&rank.to_le_bytes());
    }
    bytes
}

fn decode_ranks(bytes: &[u8], path: &Path) -> Result<Vec<u64>> {
    if !bytes.len().is_multiple_of(8) {
        return Err(Error::MalformedCensus(
            path.to_path_buf(),
            format!("length {} is not a multiple of 8", bytes.len()),
        ));
    }
    Ok(bytes
        .chunks_exact(8)
        .map(|c| u64::from_le_bytes(c.try_into().expect("chunk of 8")))
        .collect())
}

/// Write bytes through a temporary file and rename into place, so a killed
/// run never leaves a torn file under the final name.
pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut tmp = OsString::from(path.as_os_str());
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Write the census file set. Payload bytes are a pure function of the
/// census content; only `created_utc` varies between runs.
pub fn write_census(prefix: &Path, census: &Census, shard_count: u32) -> Result<CensusMeta> {
    let paths = CensusPaths::new(prefix);
    if let Some(parent) = paths.meta.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }

    let viable_bytes = encode_ranks(&census.viable_ranks);
    write_atomic(&paths.viable, &viable_bytes)?;
    let mut payload_sha256 = BTreeMap::new();
    payload_sha256.insert(
        CensusPaths::file_name(&paths.viable),
        sha256_hex(&viable_bytes),
    );

    if let Some(bitmap) = &census.bitmap {
        write_atomic(&paths.bitmap, bitmap.as_bytes())?;
        payload_sha256.insert(
            CensusPaths::file_name(&paths.bitmap),
            sha256_hex(bitmap.as_bytes()),
        );
    }

    let meta = CensusMeta {
        format_version: META_FORMAT_VERSION,
        isa_id: census.isa.id().to_string(),
        length: census.length,
        alphabet: census.alphabet(),
        step_limit: census.limits.step_limit,
        offspring_cap: census.limits.offspring_cap as u32,
        chain_depth: census.budgets.max_chain as u32,
        chain_width: census.budgets.max_genotypes as u32,
        total: census.total.to_string(),
        viable_count: census.viable_count(),
        self_replicator_count: census.self_replicator_count,
        shard_count,
        created_utc: now_utc(),
        payload_sha256,
    };
    let mut meta_text = serde_json::to_string_pretty(&meta)?;
    meta_text.push('\n');
    write_atomic(&paths.meta, meta_text.as_bytes())?;
    Ok(meta)
}

/// Accept either the output prefix or a path to the meta file itself.
pub fn resolve_prefix(path: &Path) -> PathBuf {
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned());
    match name {
        Some(n) if n.ends_with(".meta.json") => {
            path.with_file_name(n.trim_end_matches(".meta.json"))
        }
        _ => path.to_path_buf(),
    }
}

pub fn load_meta(path: &Path) -> Result<(CensusMeta, CensusPaths)> {
    let prefix = resolve_prefix(path);
    let paths = CensusPaths::new(&prefix);
    let text = fs::read_to_string(&paths.meta)?;
    let meta: CensusMeta = serde_json::from_str(&text)
        .map_err(|e| Error::MalformedCensus(paths.meta.clone(), e.to_string()))?;
    if meta.format_version != META_FORMAT_VERSION {
        return Err(Error::MalformedCensus(
            paths.meta.clone(),
            format!("unsupported format version {}", meta.format_version),
        ));
    }
    Ok((meta, paths))
}

fn verify_checksum(paths_meta: &CensusMeta, path: &Path) -> Result<()> {
    let name = CensusPaths::file_name(path);
    if let Some(expected) = paths_meta.payload_sha256.get(&name) {
        let actual = sha256_hex_file(path)?;
        if &actual != expected {
            return Err(Error::ChecksumMismatch {
                file: name,
                expected: expected.clone(),
                actual,
            });
        }
    }
    Ok(())
}

/// A census read back from disk, checksums verified.
#[derive(Debug)]
pub struct LoadedCensus {
    pub census: Census,
    pub meta: CensusMeta,
}

pub fn load_census(path: &Path) -> Result<LoadedCensus> {
    let (meta, paths) = load_meta(path)?;
    let isa = meta.isa()?;
    let total = space_size(meta.length, meta.alphabet)?;
    if meta.total != total.to_string() {
        return Err(Error::MalformedCensus(
            paths.meta.clone(),
            format!("total {} does not equal D^L = {}", meta.total, total),
        ));
    }

    verify_checksum(&meta, &paths.viable)?;
    let viable_bytes = fs::read(&paths.viable)?;
    let viable_ranks = decode_ranks(&viable_bytes, &paths.viable)?;
    if viable_ranks.len() as u64 != meta.viable_count {
        return Err(Error::MalformedCensus(
            paths.viable.clone(),
            format!(
                "holds {} ranks but the meta records {}",
                viable_ranks.len(),
                meta.viable_count
            ),
        ));
    }
    for pair in viable_ranks.windows(2) {
        if pair[0] >= pair[1] {
            return Err(Error::MalformedCensus(
                paths.viable.clone(),
                format!("ranks are not strictly ascending at {}", pair[1]),
            ));
        }
    }
    if viable_ranks.last().is_some_and(|&r| r >= total) {
        return Err(Error::MalformedCensus(
            paths.viable.clone(),
            "rank outside the sequence space".to_string(),
        ));
    }

    let bitmap = if paths.bitmap.exists() {
        verify_checksum(&meta, &paths.bitmap)?;
        let bytes = fs::read(&paths.bitmap)?;
        let bitmap = Bitmap::from_bytes(bytes, total)
            .map_err(|e| Error::MalformedCensus(paths.bitmap.clone(), e.to_string()))?;
        if bitmap.count_ones() != meta.viable_count {
            return Err(Error::MalformedCensus(
                paths.bitmap.clone(),
                format!(
                    "bitmap has {} bits set but the meta records {}",
                    bitmap.count_ones(),
                    meta.viable_count
                ),
            ));
        }
        Some(bitmap)
    } else {
        if meta
            .payload_sha256
            .contains_key(&CensusPaths::file_name(&paths.bitmap))
        {
            return Err(Error::MalformedCensus(
                paths.bitmap.clone(),
                "listed in the meta checksums but missing on disk".to_string(),
            ));
        }
        None
    };

    let census = Census {
        length: meta.length,
        isa,
        limits: meta.limits(),
        budgets: meta.budgets(),
        total,
        viable_ranks,
        self_replicator_count: meta.self_replicator_count,
        bitmap,
    };
    Ok(LoadedCensus { census, meta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::{run_census, CensusConfig};

    fn small_census() -> (Census, CensusConfig) {
        let mut config = CensusConfig::new(3, IsaSpec::default_v1()).unwrap();
        config.shard_count = 4;
        let mut census = run_census(&config, 1).unwrap();
        census.build_bitmap();
        (census, config)
    }

    #[test]
    fn write_load_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let prefix = dir.path().join("c3");
        let (census, config) = small_census();
        let meta = write_census(&prefix, &census, config.shard_count).unwrap();
        assert_eq!(meta.total, "512");
        assert_eq!(meta.payload_sha256.len(), 2);

        let loaded = load_census(&prefix).unwrap();
        assert_eq!(loaded.census.viable_ranks, census.viable_ranks);
        assert_eq!(loaded.census.self_replicator_count, census.self_replicator_count);
        assert_eq!(loaded.census.bitmap, census.bitmap);
        assert_eq!(loaded.meta.isa_id, "default-v1");

        // Loading via the meta path works too.
        let via_meta = load_census(&prefix.with_file_name("c3.meta.json")).unwrap();
        assert_eq!(via_meta.census.viable_ranks, census.viable_ranks);
    }

    #[test]
    fn corrupted_payload_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let prefix = dir.path().join("c3");
        let (census, config) = small_census();
        write_census(&prefix, &census, config.shard_count).unwrap();

        let viable = CensusPaths::new(&prefix).viable;
        let mut bytes = fs::read(&viable).unwrap();
        bytes[0] ^= 0xff;
        fs::write(&viable, &bytes).unwrap();

        assert!(matches!(
            load_census(&prefix),
            Err(Error::ChecksumMismatch { .. })
        ));
    }

    #[test]
    fn missing_listed_bitmap_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let prefix = dir.path().join("c3");
        let (census, config) = small_census();
        write_census(&prefix, &census, config.shard_count).unwrap();
        fs::remove_file(CensusPaths::new(&prefix).bitmap).unwrap();
        assert!(matches!(
            load_census(&prefix),
            Err(Error::MalformedCensus(_, _))
        ));
    }

    #[test]
    fn payload_bytes_are_reproducible() {
        let dir = tempfile::tempdir().unwrap();
        let (census, config) = small_census();
        let a = dir.path().join("a");
        let b = dir.path().join("b");
        write_census(&a, &census, config.shard_count).unwrap();
        write_census(&b, &census, config.shard_count).unwrap();
        let pa = CensusPaths::new(&a);
        let pb = CensusPaths::new(&b);
        assert_eq!(fs::read(&pa.viable).unwrap(), fs::read(&pb.viable).unwrap());
        assert_eq!(fs::read(&pa.bitmap).unwrap(), fs::read(&pb.bitmap).unwrap());
    }

    #[test]
    fn prefix_resolution() {
        assert_eq!(
            resolve_prefix(Path::new("runs/c6.meta.json")),
            PathBuf::from("runs/c6")
        );
        assert_eq!(resolve_prefix(Path::new("runs/c6")), PathBuf::from("runs/c6"));
    }
}
