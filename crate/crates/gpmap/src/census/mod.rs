//! Exhaustive classification of the whole sequence space.
//!
//! The space `[0, D^L)` is split into contiguous rank ranges (shards), each
//! classified independently; merging the per-shard viable lists in shard
//! order yields the globally sorted result. The outcome is a pure function
//! of the configuration: shard count, worker count and scheduling cannot
//! change a single output byte.

pub mod checkpoint;
pub mod files;

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::analysis::info::{functional_information, InfoContent};
use crate::bitmap::Bitmap;
use crate::error::{Error, Result};
use crate::genome::{space_size, Genome};
use crate::isa::IsaSpec;
use crate::manifest::RunManifest;
use crate::phenotype::{classify, ChainBudgets, PhenotypeKind};
use crate::vm::ExecLimits;

use checkpoint::Checkpoint;
use files::{write_census, CensusMeta, CensusPaths};

/// Everything that determines a census outcome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusConfig {
    pub length: u32,
    pub isa: IsaSpec,
    pub limits: ExecLimits,
    pub budgets: ChainBudgets,
    pub shard_count: u32,
}

pub const DEFAULT_SHARD_COUNT: u32 = 64;

impl CensusConfig {
    /// Config with default limits (T = 4L^2 + 64, M = 4), budgets (G = 16,
    /// B = 64) and shard count.
    pub fn new(length: u32, isa: IsaSpec) -> Result<Self> {
        let config = CensusConfig {
            length,
            isa,
            limits: ExecLimits::for_length(length as usize),
            budgets: ChainBudgets::default(),
            shard_count: DEFAULT_SHARD_COUNT,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        space_size(self.length, self.isa.alphabet_size())?;
        if self.shard_count == 0 {
            return Err(Error::InvalidConfig("shard count must be at least 1".into()));
        }
        if self.limits.step_limit == 0 {
            return Err(Error::InvalidConfig("step limit must be at least 1".into()));
        }
        if self.limits.offspring_cap == 0 {
            return Err(Error::InvalidConfig(
                "offspring cap must be at least 1".into(),
            ));
        }
        if self.budgets.max_chain == 0 || self.budgets.max_genotypes == 0 {
            return Err(Error::InvalidConfig(
                "chain budgets must be at least 1".into(),
            ));
        }
        Ok(())
    }

    pub fn alphabet(&self) -> u8 {
        self.isa.alphabet_size()
    }

    pub fn total(&self) -> u64 {
        space_size(self.length, self.alphabet()).expect("config validated at construction")
    }

    /// Half-open rank interval handled by one shard. Shards partition the
    /// space exactly: the first `total % shard_count` shards get one extra.
    pub fn shard_range(&self, index: u32) -> (u64, u64) {
        debug_assert!(index < self.shard_count);
        let total = self.total();
        let n = self.shard_count as u64;
        let base = total / n;
        let extra = total % n;
        let i = index as u64;
        let lo = i * base + i.min(extra);
        let hi = lo + base + u64::from(i < extra);
        (lo, hi)
    }

    pub fn shard_ranges(&self) -> Vec<(u64, u64)> {
        (0..self.shard_count).map(|i| self.shard_range(i)).collect()
    }
}

/// The classification of one contiguous rank range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShardResult {
    pub index: u32,
    pub lo: u64,
    pub hi: u64,
    /// Viable ranks within `[lo, hi)`, strictly ascending.
    pub viable_ranks: Vec<u64>,
    pub self_replicators: u64,
}

/// Classify every rank in `[lo, hi)`, unranking by increment.
pub fn classify_range(config: &CensusConfig, lo: u64, hi: u64) -> (Vec<u64>, u64) {
    let mut viable = Vec::new();
    let mut self_replicators = 0u64;
    if lo >= hi {
        return (viable, self_replicators);
    }
    let mut genome =
        Genome::unrank(lo, config.length, config.alphabet()).expect("range within space");
    for rank in lo..hi {
        let phenotype = classify(&genome, &config.isa, &config.limits, &config.budgets);
        if phenotype.is_viable() {
            viable.push(rank);
            if phenotype.kind == PhenotypeKind::SelfReplicator {
                self_replicators += 1;
            }
        }
        genome.increment();
    }
    (viable, self_replicators)
}

pub fn classify_shard(config: &CensusConfig, index: u32) -> ShardResult {
    let (lo, hi) = config.shard_range(index);
    let (viable_ranks, self_replicators) = classify_range(config, lo, hi);
    ShardResult {
        index,
        lo,
        hi,
        viable_ranks,
        self_replicators,
    }
}

/// A complete census: configuration echo plus the sorted viable set.
#[derive(Debug, Clone)]
pub struct Census {
    pub length: u32,
    pub isa: IsaSpec,
    pub limits: ExecLimits,
    pub budgets: ChainBudgets,
    pub total: u64,
    pub viable_ranks: Vec<u64>,
    pub self_replicator_count: u64,
    pub bitmap: Option<Bitmap>,
}

impl Census {
    pub fn alphabet(&self) -> u8 {
        self.isa.alphabet_size()
    }

    pub fn viable_count(&self) -> u64 {
        self.viable_ranks.len() as u64
    }

    #[inline]
    pub fn is_viable(&self, rank: u64) -> bool {
        match &self.bitmap {
            Some(bitmap) => bitmap.get(rank),
            None => self.viable_ranks.binary_search(&rank).is_ok(),
        }
    }

    pub fn viable_index(&self, rank: u64) -> Option<usize> {
        self.viable_ranks.binary_search(&rank).ok()
    }

    pub fn genome(&self, rank: u64) -> Result<Genome> {
        Genome::unrank(rank, self.length, self.alphabet())
    }

    /// Materialize the full-space bitmap from the rank list.
    pub fn build_bitmap(&mut self) {
        if self.bitmap.is_none() {
            self.bitmap = Some(Bitmap::from_sorted_ranks(self.total, &self.viable_ranks));
        }
    }

    pub fn drop_bitmap(&mut self) {
        self.bitmap = None;
    }

    /// Information content of the viable set, in mers.
    pub fn information(&self) -> InfoContent {
        functional_information(self.viable_count(), self.length, self.alphabet())
            .expect("census counts are within the space")
    }
}

/// Merge per-shard results into a census, checking that the shards cover
/// the space exactly once.
pub fn merge_shards(config: &CensusConfig, mut shards: Vec<ShardResult>) -> Result<Census> {
    let total = config.total();
    shards.sort_by_key(|s| s.lo);
    let mut expected_lo = 0u64;
    for shard in &shards {
        if shard.lo > expected_lo {
            return Err(Error::ShardCoverage(format!(
                "gap: ranks [{expected_lo}, {}) are covered by no shard",
                shard.lo
            )));
        }
        if shard.lo < expected_lo {
            return Err(Error::ShardCoverage(format!(
                "overlap: shard {} starts at {} inside an already covered range ending at {}",
                shard.index, shard.lo, expected_lo
            )));
        }
        if shard.hi < shard.lo {
            return Err(Error::ShardCoverage(format!(
                "shard {} has inverted range [{}, {})",
                shard.index, shard.lo, shard.hi
            )));
        }
        let mut previous: Option<u64> = None;
        for &rank in &shard.viable_ranks {
            if rank < shard.lo || rank >= shard.hi {
                return Err(Error::ShardCoverage(format!(
                    "shard {} reports viable rank {} outside its range [{}, {})",
                    shard.index, rank, shard.lo, shard.hi
                )));
            }
            if previous.is_some_and(|p| p >= rank) {
                return Err(Error::ShardCoverage(format!(
                    "shard {} viable ranks are not strictly ascending at {}",
                    shard.index, rank
                )));
            }
            previous = Some(rank);
        }
        expected_lo = shard.hi;
    }
    if expected_lo != total {
        return Err(Error::ShardCoverage(format!(
            "gap: ranks [{expected_lo}, {total}) are covered by no shard"
        )));
    }

    let mut viable_ranks = Vec::with_capacity(shards.iter().map(|s| s.viable_ranks.len()).sum());
    let mut self_replicator_count = 0u64;
    for shard in shards {
        viable_ranks.extend(shard.viable_ranks);
        self_replicator_count += shard.self_replicators;
    }

    Ok(Census {
        length: config.length,
        isa: config.isa.clone(),
        limits: config.limits,
        budgets: config.budgets,
        total,
        viable_ranks,
        self_replicator_count,
        bitmap: None,
    })
}

/// Classify the given shard indices on a pool of workers. `on_done` runs on
/// the worker thread right after its shard completes (checkpointing hook).
pub(crate) fn run_shards(
    config: &CensusConfig,
    pending: &[u32],
    threads: usize,
    on_done: &(dyn Fn(&ShardResult) -> Result<()> + Sync),
) -> Result<Vec<ShardResult>> {
    let workers = threads.max(1).min(pending.len().max(1));
    let cursor = AtomicUsize::new(0);
    let failed = AtomicBool::new(false);
    let slots: Mutex<Vec<Option<ShardResult>>> = Mutex::new(vec![None; pending.len()]);
    let first_error: Mutex<Option<Error>> = Mutex::new(None);

    thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                if failed.load(Ordering::Relaxed) {
                    return;
                }
                let slot = cursor.fetch_add(1, Ordering::Relaxed);
                if slot >= pending.len() {
                    return;
                }
                let shard = classify_shard(config, pending[slot]);
                if let Err(e) = on_done(&shard) {
                    failed.store(true, Ordering::Relaxed);
                    let mut guard = first_error.lock().unwrap();
                    if guard.is_none() {
                        *guard = Some(e);
                    }
                    return;
                }
                slots.lock().unwrap()[slot] = Some(shard);
            });
        }
    });

    if let Some(e) = first_error.lock().unwrap().take() {
        return Err(e);
    }
    let results = slots
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|s| s.expect("every slot filled"))
        .collect();
    Ok(results)
}

/// Run a complete in-memory census on the given number of worker threads.
pub fn run_census(config: &CensusConfig, threads: usize) -> Result<Census> {
    config.validate()?;
    let pending: Vec<u32> = (0..config.shard_count).collect();
    let shards = run_shards(config, &pending, threads, &|_| Ok(()))?;
    merge_shards(config, shards)
}

/// Whether the full-space bitmap is materialized and written.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BitmapChoice {
    /// Write it when the space fits 2^32 ranks.
    Auto,
    Always,
    Never,
}

impl BitmapChoice {
    fn decide(self, total: u64) -> bool {
        match self {
            BitmapChoice::Auto => total <= 1 << 32,
            BitmapChoice::Always => true,
            BitmapChoice::Never => false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub threads: usize,
    pub bitmap: BitmapChoice,
    pub force: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            threads: 1,
            bitmap: BitmapChoice::Auto,
            force: false,
        }
    }
}

/// The resolved configuration recorded in a census manifest; feeding it
/// back through [`CensusConfigEcho::to_config`] reproduces the payloads.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CensusConfigEcho {
    pub length: u32,
    pub isa: String,
    pub pad_nops: u8,
    pub step_limit: u64,
    pub offspring_cap: u32,
    pub chain_depth: u32,
    pub chain_width: u32,
    pub shard_count: u32,
    pub bitmap: bool,
}

impl CensusConfigEcho {
    pub fn of(config: &CensusConfig, bitmap: bool) -> Self {
        CensusConfigEcho {
            length: config.length,
            isa: config.isa.id().to_string(),
            pad_nops: config.isa.pad_nops(),
            step_limit: config.limits.step_limit,
            offspring_cap: config.limits.offspring_cap as u32,
            chain_depth: config.budgets.max_chain as u32,
            chain_width: config.budgets.max_genotypes as u32,
            shard_count: config.shard_count,
            bitmap,
        }
    }

    pub fn to_config(&self) -> Result<CensusConfig> {
        let isa = IsaSpec::by_name(&self.isa)?.with_pad_nops(self.pad_nops)?;
        let config = CensusConfig {
            length: self.length,
            isa,
            limits: ExecLimits {
                step_limit: self.step_limit,
                offspring_cap: self.offspring_cap as usize,
            },
            budgets: ChainBudgets {
                max_chain: self.chain_depth as usize,
                max_genotypes: self.chain_width as usize,
            },
            shard_count: self.shard_count,
        };
        config.validate()?;
        Ok(config)
    }
}

#[derive(Debug)]
pub struct CensusRunSummary {
    pub census: Census,
    pub meta: CensusMeta,
    pub resumed_shards: usize,
    pub computed_shards: usize,
    pub duration_seconds: f64,
    pub outputs: Vec<PathBuf>,
}

/// Run a census to its on-disk file set, checkpointing after every shard.
///
/// An interrupted run resumes from the checkpoint directory without
/// reclassifying finished shards, and produces payloads byte-identical to
/// an uninterrupted run. Existing outputs are refused unless `force` is
/// set; a checkpoint written under a different configuration refuses to
/// resume.
pub fn run_census_to_files(
    config: &CensusConfig,
    prefix: &Path,
    opts: &RunOptions,
) -> Result<CensusRunSummary> {
    config.validate()?;
    let start = Instant::now();
    let paths = CensusPaths::new(prefix);

    let finals = [&paths.meta, &paths.viable, &paths.bitmap, &paths.manifest];
    if opts.force {
        for path in &finals {
            if path.exists() {
                fs::remove_file(path)?;
            }
        }
        if paths.checkpoint_dir.exists() {
            fs::remove_dir_all(&paths.checkpoint_dir)?;
        }
    } else if let Some(existing) = finals.iter().find(|p| p.exists()) {
        return Err(Error::OutputExists((*existing).clone()));
    }

    // Opening the checkpoint creates the output directory chain, so an
    // unwritable destination fails before any classification happens.
    let (ckpt, done) = Checkpoint::open(&paths.checkpoint_dir, config)?;
    let resumed_shards = done.len();
    let have: HashSet<u32> = done.iter().map(|s| s.index).collect();
    let pending: Vec<u32> = (0..config.shard_count)
        .filter(|i| !have.contains(i))
        .collect();
    let computed = run_shards(config, &pending, opts.threads, &|shard| ckpt.store(shard))?;
    let computed_shards = computed.len();

    let mut shards = done;
    shards.extend(computed);
    let mut census = merge_shards(config, shards)?;
    if opts.bitmap.decide(census.total) {
        census.build_bitmap();
    }

    let meta = write_census(prefix, &census, config.shard_count)?;

    let mut outputs = vec![paths.meta.clone(), paths.viable.clone()];
    if census.bitmap.is_some() {
        outputs.push(paths.bitmap.clone());
    }
    let echo = CensusConfigEcho::of(config, census.bitmap.is_some());
    let mut manifest = RunManifest::new("census", census.isa.id(), serde_json::to_value(&echo)?);
    manifest.duration_seconds = start.elapsed().as_secs_f64();
    manifest.outputs = outputs
        .iter()
        .map(|p| p.to_string_lossy().into_owned())
        .collect();
    manifest.payload_sha256 = meta.payload_sha256.clone();
    manifest.write(&paths.manifest)?;
    outputs.push(paths.manifest.clone());

    ckpt.remove()?;

    Ok(CensusRunSummary {
        census,
        meta,
        resumed_shards,
        computed_shards,
        duration_seconds: start.elapsed().as_secs_f64(),
        outputs,
    })
}
