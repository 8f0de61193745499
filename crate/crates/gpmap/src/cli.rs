//! Subcommand front end over the library: `census`, `info`, `clusters`,
//! `robustness`, `curves`, `baselines`, `trace`, `verify`.
//!
//! Every flag has a config-file equivalent (TOML, via `--config`); explicit
//! flags win on conflict. `GPMAP_THREADS` supplies the default for
//! `--threads`. Genomes on the command line use the letter encoding
//! (a = symbol 0, b = 1, ...).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::json;

use crate::analysis::clusters::{find_clusters, ClusterMode};
use crate::analysis::curves::{
    all_density_curves, compressed_baseline, density_curve, mean_of_curves,
    no_epistasis_baseline, robustness_profile, DensityCurve,
};
use crate::analysis::info::{functional_information, InfoContent};
use crate::analysis::rotation::rotation_classes;
use crate::census::files::{load_census, load_meta, LoadedCensus};
use crate::census::{
    run_census, run_census_to_files, BitmapChoice, Census, CensusConfig, RunOptions,
    DEFAULT_SHARD_COUNT,
};
use crate::error::{Error, Result};
use crate::export::{
    clusters_to_json, component_graph_dot, component_graph_json, robustness_to_json, sig12,
    write_baselines_csv, write_curve_rows, write_curves_header, write_mean_curve_rows,
    write_robustness_csv,
};
use crate::genome::Genome;
use crate::isa::{IsaSpec, DEFAULT_ISA_ID};
use crate::manifest::{sha256_hex, RunManifest};
use crate::phenotype::{classify, ChainBudgets};
use crate::vm::{execute_traced, ExecLimits, StopReason, DEFAULT_OFFSPRING_CAP};

#[derive(Debug, Parser)]
#[command(
    name = "gpmap",
    version,
    about = "Exhaustive genotype-phenotype census and landscape analysis for a minimal self-copying VM"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify the whole sequence space and write the census file set.
    Census(CensusArgs),
    /// Summarize a census: counts, information content, classes, clusters.
    Info(InfoArgs),
    /// Connected clusters of the viable set; optionally export one component graph.
    Clusters(ClustersArgs),
    /// Viable one-mutant neighbor counts.
    Robustness(RobustnessArgs),
    /// Per-genotype information-density curves as CSV.
    Curves(CurvesArgs),
    /// Theoretical baselines phi_min and phi_ne as CSV.
    Baselines(BaselinesArgs),
    /// Step-by-step execution trace and phenotype of one genome.
    Trace(TraceArgs),
    /// Cross-check the fast paths against the naive reference implementations.
    Verify(VerifyArgs),
}

pub fn run() -> Result<()> {
    match Cli::parse().command {
        Command::Census(args) => cmd_census(args),
        Command::Info(args) => cmd_info(args),
        Command::Clusters(args) => cmd_clusters(args),
        Command::Robustness(args) => cmd_robustness(args),
        Command::Curves(args) => cmd_curves(args),
        Command::Baselines(args) => cmd_baselines(args),
        Command::Trace(args) => cmd_trace(args),
        Command::Verify(args) => cmd_verify(args),
    }
}

// ---------------------------------------------------------------------------
// Config-file defaults

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    length: Option<u32>,
    isa: Option<String>,
    pad_nops: Option<u8>,
    step_limit: Option<u64>,
    offspring_cap: Option<u32>,
    chain_depth: Option<u32>,
    chain_width: Option<u32>,
    shards: Option<u32>,
    threads: Option<usize>,
    out: Option<PathBuf>,
    format: Option<String>,
}

impl FileConfig {
    fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(FileConfig::default());
        };
        let text = fs::read_to_string(path)?;
        toml::from_str(&text)
            .map_err(|e| Error::Usage(format!("config file {}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, Args)]
struct IsaArgs {
    /// Instruction set name.
    #[arg(long)]
    isa: Option<String>,
    /// Extra no-op symbols appended to the alphabet.
    #[arg(long)]
    pad_nops: Option<u8>,
}

impl IsaArgs {
    fn resolve(&self, file: &FileConfig) -> Result<IsaSpec> {
        let name = self
            .isa
            .clone()
            .or_else(|| file.isa.clone())
            .unwrap_or_else(|| DEFAULT_ISA_ID.to_string());
        let pad_nops = self.pad_nops.or(file.pad_nops).unwrap_or(0);
        IsaSpec::by_name(&name)?.with_pad_nops(pad_nops)
    }
}

#[derive(Debug, Clone, Args)]
struct VmArgs {
    /// Step budget T per execution (default 4 L^2 + 64).
    #[arg(long)]
    step_limit: Option<u64>,
    /// Offspring cap M per execution.
    #[arg(long)]
    offspring_cap: Option<u32>,
    /// Reproduction-chain depth budget G.
    #[arg(long)]
    chain_depth: Option<u32>,
    /// Reproduction-graph width budget B (distinct genotypes explored).
    #[arg(long)]
    chain_width: Option<u32>,
}

impl VmArgs {
    fn limits(&self, file: &FileConfig, length: u32) -> ExecLimits {
        let defaults = ExecLimits::for_length(length as usize);
        ExecLimits {
            step_limit: self.step_limit.or(file.step_limit).unwrap_or(defaults.step_limit),
            offspring_cap: self
                .offspring_cap
                .or(file.offspring_cap)
                .unwrap_or(DEFAULT_OFFSPRING_CAP as u32) as usize,
        }
    }

    fn budgets(&self, file: &FileConfig) -> ChainBudgets {
        let defaults = ChainBudgets::default();
        ChainBudgets {
            max_chain: self
                .chain_depth
                .or(file.chain_depth)
                .unwrap_or(defaults.max_chain as u32) as usize,
            max_genotypes: self
                .chain_width
                .or(file.chain_width)
                .unwrap_or(defaults.max_genotypes as u32) as usize,
        }
    }
}

fn resolve_threads(flag: Option<usize>, file: &FileConfig) -> Result<usize> {
    if let Some(threads) = flag.or(file.threads) {
        return Ok(threads.max(1));
    }
    if let Ok(value) = std::env::var("GPMAP_THREADS") {
        let threads: usize = value
            .parse()
            .map_err(|_| Error::Usage(format!("GPMAP_THREADS is not a thread count: {value:?}")))?;
        return Ok(threads.max(1));
    }
    Ok(std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1))
}

fn information_text(info: &InfoContent) -> String {
    match info.mers {
        Some(mers) => format!("{} mers", sig12(mers)),
        None => "undefined (no viable sequences)".to_string(),
    }
}

/// Write payload text to stdout, or to a file plus a sidecar manifest.
fn emit_output(
    out: Option<&Path>,
    force: bool,
    content: &str,
    manifest: impl FnOnce() -> RunManifest,
    started: Instant,
) -> Result<()> {
    match out {
        None => {
            print!("{content}");
            std::io::stdout().flush()?;
            Ok(())
        }
        Some(path) => {
            if path.exists() && !force {
                return Err(Error::OutputExists(path.to_path_buf()));
            }
            if let Some(parent) = path.parent() {
                if !parent.as_os_str().is_empty() {
                    fs::create_dir_all(parent)?;
                }
            }
            fs::write(path, content)?;
            let mut manifest = manifest();
            manifest.duration_seconds = started.elapsed().as_secs_f64();
            manifest.outputs = vec![path.to_string_lossy().into_owned()];
            let name = path
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default();
            manifest
                .payload_sha256
                .insert(name, sha256_hex(content.as_bytes()));
            let mut manifest_path = path.as_os_str().to_owned();
            manifest_path.push(".manifest.json");
            manifest.write(Path::new(&manifest_path))?;
            eprintln!("wrote {}", path.display());
            Ok(())
        }
    }
}

// ---------------------------------------------------------------------------
// census

#[derive(Debug, Args)]
struct CensusArgs {
    /// Sequence length L.
    #[arg(short = 'L', long)]
    length: Option<u32>,
    #[command(flatten)]
    isa: IsaArgs,
    #[command(flatten)]
    vm: VmArgs,
    /// Contiguous rank shards (default 64 x workers).
    #[arg(long)]
    shards: Option<u32>,
    /// Worker threads (default GPMAP_THREADS, then all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Output path prefix for the census file set.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overwrite existing outputs and checkpoints.
    #[arg(long)]
    force: bool,
    /// Bitmap policy: auto, always, or never.
    #[arg(long)]
    bitmap: Option<String>,
    /// TOML file supplying defaults for any flag.
    #[arg(long)]
    config: Option<PathBuf>,
}

fn parse_bitmap_choice(text: Option<&str>) -> Result<BitmapChoice> {
    match text {
        None | Some("auto") => Ok(BitmapChoice::Auto),
        Some("always") => Ok(BitmapChoice::Always),
        Some("never") => Ok(BitmapChoice::Never),
        Some(other) => Err(Error::Usage(format!(
            "unknown bitmap policy '{other}' (expected auto, always, or never)"
        ))),
    }
}

fn cmd_census(args: CensusArgs) -> Result<()> {
    let file = FileConfig::load(args.config.as_deref())?;
    let length = args
        .length
        .or(file.length)
        .ok_or_else(|| Error::Usage("--length is required".into()))?;
    let isa = args.isa.resolve(&file)?;
    let limits = args.vm.limits(&file, length);
    let budgets = args.vm.budgets(&file);
    let threads = resolve_threads(args.threads, &file)?;
    let shard_count = args.shards.or(file.shards).unwrap_or_else(|| {
        DEFAULT_SHARD_COUNT.saturating_mul(u32::try_from(threads).unwrap_or(u32::MAX))
    });
    let out = args
        .out
        .clone()
        .or_else(|| file.out.clone())
        .ok_or_else(|| Error::Usage("--out is required".into()))?;

    let config = CensusConfig {
        length,
        isa,
        limits,
        budgets,
        shard_count,
    };
    config.validate()?;
    let opts = RunOptions {
        threads,
        bitmap: parse_bitmap_choice(args.bitmap.as_deref())?,
        force: args.force,
    };

    let summary = run_census_to_files(&config, &out, &opts)?;
    let census = &summary.census;
    println!("census: {}", out.display());
    println!(
        "isa {}  L {}  D {}  total {}",
        census.isa.id(),
        census.length,
        census.alphabet(),
        census.total
    );
    println!(
        "viable {}  self-replicators {}",
        census.viable_count(),
        census.self_replicator_count
    );
    println!("information {}", information_text(&census.information()));
    println!(
        "shards {} ({} resumed)  threads {}  duration {:.2}s",
        config.shard_count, summary.resumed_shards, threads, summary.duration_seconds
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// info

#[derive(Debug, Args)]
struct InfoArgs {
    /// Census prefix or meta.json path.
    census: PathBuf,
    /// Output format: text or json.
    #[arg(long)]
    format: Option<String>,
    /// TOML file supplying defaults for any flag.
    #[arg(long)]
    config: Option<PathBuf>,
}

fn cmd_info(args: InfoArgs) -> Result<()> {
    let file = FileConfig::load(args.config.as_deref())?;
    let format = args
        .format
        .or(file.format)
        .unwrap_or_else(|| "text".to_string());
    let (meta, paths) = load_meta(&args.census)?;
    let payloads_present = paths.viable.exists();

    let mut rotation_count: Option<usize> = None;
    let mut clusters_raw: Option<usize> = None;
    let mut clusters_collapsed: Option<usize> = None;
    if payloads_present {
        let LoadedCensus { census, .. } = load_census(&args.census)?;
        rotation_count = Some(rotation_classes(&census).class_count());
        clusters_raw = Some(find_clusters(&census, ClusterMode::Raw).components.len());
        clusters_collapsed = Some(
            find_clusters(&census, ClusterMode::CollapsedRotations)
                .components
                .len(),
        );
    }
    let info = functional_information(meta.viable_count, meta.length, meta.alphabet)?;

    match format.as_str() {
        "text" => {
            println!("census: {}", paths.meta.display());
            println!("isa: {}", meta.isa_id);
            println!("L: {}", meta.length);
            println!("D: {}", meta.alphabet);
            println!("total: {}", meta.total);
            println!("viable_count: {}", meta.viable_count);
            println!("self_replicator_count: {}", meta.self_replicator_count);
            println!("information: {}", information_text(&info));
            match (rotation_count, clusters_raw, clusters_collapsed) {
                (Some(rotations), Some(raw), Some(collapsed)) => {
                    println!("rotation_classes: {rotations}");
                    println!("clusters_raw: {raw}");
                    println!("clusters_collapsed_rotations: {collapsed}");
                }
                _ => println!("payloads: absent (counts taken from metadata)"),
            }
        }
        "json" => {
            let doc = json!({
                "census": paths.meta.to_string_lossy(),
                "isa": meta.isa_id,
                "L": meta.length,
                "D": meta.alphabet,
                "total": meta.total,
                "viable_count": meta.viable_count,
                "self_replicator_count": meta.self_replicator_count,
                "information_mers": info.mers,
                "rotation_classes": rotation_count,
                "clusters_raw": clusters_raw,
                "clusters_collapsed_rotations": clusters_collapsed,
                "payloads_present": payloads_present,
            });
            println!("{}", serde_json::to_string_pretty(&doc)?);
        }
        other => {
            return Err(Error::Usage(format!(
                "info emits text or json, not '{other}'"
            )))
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// clusters

#[derive(Debug, Args)]
struct ClustersArgs {
    /// Census prefix or meta.json path.
    census: PathBuf,
    /// Cluster mode: raw or collapsed-rotations.
    #[arg(long, default_value = "raw")]
    mode: String,
    /// Output format: json, or dot for a component graph.
    #[arg(long)]
    format: Option<String>,
    /// Export the graph of this component id instead of the summary.
    #[arg(long)]
    component: Option<u64>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    force: bool,
    /// TOML file supplying defaults for any flag.
    #[arg(long)]
    config: Option<PathBuf>,
}

fn cmd_clusters(args: ClustersArgs) -> Result<()> {
    let started = Instant::now();
    let file = FileConfig::load(args.config.as_deref())?;
    let format = args
        .format
        .clone()
        .or(file.format)
        .unwrap_or_else(|| "json".to_string());
    let out = args.out.clone().or(file.out);
    let mode: ClusterMode = args.mode.parse()?;
    let LoadedCensus { census, meta } = load_census(&args.census)?;
    let set = find_clusters(&census, mode);

    let content = match (args.component, format.as_str()) {
        (None, "json") => format!("{}\n", serde_json::to_string_pretty(&clusters_to_json(&set))?),
        (None, other) => {
            return Err(Error::Usage(format!(
                "the cluster summary is json only, not '{other}'; pass --component for dot"
            )))
        }
        (Some(id), "json") => {
            let component = set.component(id)?;
            format!(
                "{}\n",
                serde_json::to_string_pretty(&component_graph_json(&census, component)?)?
            )
        }
        (Some(id), "dot") => component_graph_dot(&census, set.component(id)?)?,
        (Some(_), other) => {
            return Err(Error::Usage(format!(
                "component graphs are json or dot, not '{other}'"
            )))
        }
    };

    let census_path = args.census.to_string_lossy().into_owned();
    emit_output(
        out.as_deref(),
        args.force,
        &content,
        || {
            let mut manifest = RunManifest::new(
                "clusters",
                &meta.isa_id,
                json!({
                    "census": census_path,
                    "mode": mode.to_string(),
                    "component": args.component,
                    "format": format,
                }),
            );
            manifest.inputs = vec![census_path.clone()];
            manifest
        },
        started,
    )
}

// ---------------------------------------------------------------------------
// robustness

#[derive(Debug, Args)]
struct RobustnessArgs {
    /// Census prefix or meta.json path.
    census: PathBuf,
    /// Viable rank to report (repeatable).
    #[arg(long)]
    rank: Vec<u64>,
    /// Report every viable genotype.
    #[arg(long)]
    all: bool,
    /// Include the most robust genotype (ties to the smallest rank).
    #[arg(long)]
    most_robust: bool,
    /// Include the least robust genotype (ties to the smallest rank).
    #[arg(long)]
    most_fragile: bool,
    /// Output format: csv or json.
    #[arg(long)]
    format: Option<String>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    force: bool,
    /// TOML file supplying defaults for any flag.
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Resolve selection flags into a rank list. Explicit ranks must be viable;
/// the error names the offending rank.
fn select_ranks(
    census: &Census,
    explicit: &[u64],
    all: bool,
    most_robust: bool,
    most_fragile: bool,
) -> Result<Vec<u64>> {
    if !all && !most_robust && !most_fragile && explicit.is_empty() {
        return Err(Error::Usage(
            "select genomes with --rank, --all, --most-robust, or --most-fragile".into(),
        ));
    }
    if all {
        return Ok(census.viable_ranks.clone());
    }
    let mut ranks = Vec::new();
    let mut push = |rank: u64| {
        if !ranks.contains(&rank) {
            ranks.push(rank);
        }
    };
    for &rank in explicit {
        if !census.is_viable(rank) {
            return Err(Error::NotViable(rank));
        }
        push(rank);
    }
    if most_robust || most_fragile {
        let profile = robustness_profile(census);
        if most_robust {
            let (rank, _) = profile
                .most_robust
                .ok_or_else(|| Error::InvalidConfig("the viable set is empty".into()))?;
            push(rank);
        }
        if most_fragile {
            let (rank, _) = profile
                .most_fragile
                .ok_or_else(|| Error::InvalidConfig("the viable set is empty".into()))?;
            push(rank);
        }
    }
    Ok(ranks)
}

fn cmd_robustness(args: RobustnessArgs) -> Result<()> {
    let started = Instant::now();
    let file = FileConfig::load(args.config.as_deref())?;
    let format = args
        .format
        .clone()
        .or(file.format)
        .unwrap_or_else(|| "csv".to_string());
    let out = args.out.clone().or(file.out);
    let LoadedCensus { census, meta } = load_census(&args.census)?;
    let ranks = select_ranks(
        &census,
        &args.rank,
        args.all,
        args.most_robust,
        args.most_fragile,
    )?;

    let content = match format.as_str() {
        "csv" => {
            let mut buffer = Vec::new();
            write_robustness_csv(&mut buffer, &census, &ranks)?;
            String::from_utf8(buffer).expect("csv is utf-8")
        }
        "json" => format!(
            "{}\n",
            serde_json::to_string_pretty(&robustness_to_json(&census, &ranks)?)?
        ),
        other => {
            return Err(Error::Usage(format!(
                "robustness emits csv or json, not '{other}'"
            )))
        }
    };

    let census_path = args.census.to_string_lossy().into_owned();
    emit_output(
        out.as_deref(),
        args.force,
        &content,
        || {
            let mut manifest = RunManifest::new(
                "robustness",
                &meta.isa_id,
                json!({
                    "census": census_path,
                    "ranks": ranks,
                    "format": format,
                }),
            );
            manifest.inputs = vec![census_path.clone()];
            manifest
        },
        started,
    )
}

// ---------------------------------------------------------------------------
// curves

#[derive(Debug, Args)]
struct CurvesArgs {
    /// Census prefix or meta.json path.
    census: PathBuf,
    /// Viable rank to report (repeatable).
    #[arg(long)]
    rank: Vec<u64>,
    /// Emit a curve for every viable genotype.
    #[arg(long)]
    all: bool,
    /// Append the mean curve across all viable genotypes.
    #[arg(long)]
    mean: bool,
    /// Include the most robust genotype (ties to the smallest rank).
    #[arg(long)]
    most_robust: bool,
    /// Include the least robust genotype (ties to the smallest rank).
    #[arg(long)]
    most_fragile: bool,
    /// Output format: csv.
    #[arg(long)]
    format: Option<String>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    force: bool,
    /// TOML file supplying defaults for any flag.
    #[arg(long)]
    config: Option<PathBuf>,
}

fn cmd_curves(args: CurvesArgs) -> Result<()> {
    let started = Instant::now();
    let file = FileConfig::load(args.config.as_deref())?;
    let format = args
        .format
        .clone()
        .or(file.format)
        .unwrap_or_else(|| "csv".to_string());
    if format != "csv" {
        return Err(Error::Usage(format!("curves emit csv, not '{format}'")));
    }
    let out = args.out.clone().or(file.out);
    let LoadedCensus { census, meta } = load_census(&args.census)?;
    let ranks = if args.mean && !args.all && args.rank.is_empty() && !args.most_robust && !args.most_fragile
    {
        Vec::new()
    } else {
        select_ranks(
            &census,
            &args.rank,
            args.all,
            args.most_robust,
            args.most_fragile,
        )?
    };

    if args.mean && census.viable_ranks.is_empty() {
        return Err(Error::InvalidConfig(
            "mean curve is undefined for an empty viable set".into(),
        ));
    }

    // The batch pass costs one pairwise sweep; use it whenever the whole
    // viable set is needed anyway.
    let need_batch = args.all || args.mean;
    let mut buffer = Vec::new();
    write_curves_header(&mut buffer)?;
    if need_batch {
        let batch = all_density_curves(&census);
        let mean = args.mean.then(|| mean_of_curves(census.length, &batch));
        if args.all {
            for curve in &batch {
                write_curve_rows(&mut buffer, curve)?;
            }
        } else {
            for &rank in &ranks {
                let index = census.viable_index(rank).expect("selection is viable");
                write_curve_rows(&mut buffer, &batch[index])?;
            }
        }
        if let Some(mean) = mean {
            write_mean_curve_rows(&mut buffer, census.alphabet(), &mean)?;
        }
    } else {
        for &rank in &ranks {
            let curve: DensityCurve = density_curve(&census, rank)?;
            write_curve_rows(&mut buffer, &curve)?;
        }
    }
    let content = String::from_utf8(buffer).expect("csv is utf-8");

    let census_path = args.census.to_string_lossy().into_owned();
    emit_output(
        out.as_deref(),
        args.force,
        &content,
        || {
            let mut manifest = RunManifest::new(
                "curves",
                &meta.isa_id,
                json!({
                    "census": census_path,
                    "ranks": ranks,
                    "all": args.all,
                    "mean": args.mean,
                }),
            );
            manifest.inputs = vec![census_path.clone()];
            manifest
        },
        started,
    )
}

// ---------------------------------------------------------------------------
// baselines

#[derive(Debug, Args)]
struct BaselinesArgs {
    /// Sequence length L.
    #[arg(short = 'L', long)]
    length: Option<u32>,
    /// Alphabet size D.
    #[arg(long)]
    alphabet: Option<u8>,
    /// Information content I_L in mers, anchoring the no-epistasis line.
    #[arg(long)]
    info: Option<f64>,
    /// Take L, D and I_L from this census instead.
    #[arg(long)]
    census: Option<PathBuf>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    force: bool,
    /// TOML file supplying defaults for any flag.
    #[arg(long)]
    config: Option<PathBuf>,
}

fn cmd_baselines(args: BaselinesArgs) -> Result<()> {
    let started = Instant::now();
    let file = FileConfig::load(args.config.as_deref())?;

    let (mut length, mut alphabet, mut info) = (args.length.or(file.length), args.alphabet, args.info);
    if let Some(census_path) = &args.census {
        let (meta, _) = load_meta(census_path)?;
        length = length.or(Some(meta.length));
        alphabet = alphabet.or(Some(meta.alphabet));
        if info.is_none() {
            let computed = functional_information(meta.viable_count, meta.length, meta.alphabet)?;
            info = computed.mers;
        }
    }
    let length = length.ok_or_else(|| Error::Usage("--length is required".into()))?;
    let alphabet = alphabet.ok_or_else(|| Error::Usage("--alphabet is required".into()))?;
    let info = info.ok_or_else(|| {
        Error::Usage("--info is required (or --census with a non-empty viable set)".into())
    })?;

    let phi_min = compressed_baseline(length, alphabet);
    let phi_ne = no_epistasis_baseline(length, info)?;
    let mut buffer = Vec::new();
    write_baselines_csv(&mut buffer, &phi_min, &phi_ne)?;
    let content = String::from_utf8(buffer).expect("csv is utf-8");

    emit_output(
        args.out.as_deref(),
        args.force,
        &content,
        || {
            RunManifest::new(
                "baselines",
                DEFAULT_ISA_ID,
                json!({
                    "length": length,
                    "alphabet": alphabet,
                    "info_mers": info,
                }),
            )
        },
        started,
    )
}

// ---------------------------------------------------------------------------
// trace

#[derive(Debug, Args)]
struct TraceArgs {
    /// Genome in letter encoding (a = symbol 0, b = 1, ...).
    genome: String,
    #[command(flatten)]
    isa: IsaArgs,
    #[command(flatten)]
    vm: VmArgs,
    /// TOML file supplying defaults for any flag.
    #[arg(long)]
    config: Option<PathBuf>,
}

fn cmd_trace(args: TraceArgs) -> Result<()> {
    let file = FileConfig::load(args.config.as_deref())?;
    let isa = args.isa.resolve(&file)?;
    let genome = Genome::from_letters(&args.genome, isa.alphabet_size())?;
    let limits = args.vm.limits(&file, genome.len() as u32);
    let budgets = args.vm.budgets(&file);

    println!("step ip op copied read write emitted");
    let outcome = execute_traced(&genome, &isa, &limits, |t| {
        println!(
            "{} {} {} {} {} {} {}",
            t.step,
            t.ip,
            t.instruction.letter(),
            t.copied,
            t.read_head,
            t.write_head,
            t.emitted
        );
    });
    let phenotype = classify(&genome, &isa, &limits, &budgets);
    let reason = match outcome.reason {
        StopReason::Halted => format!("Halted step {}", outcome.steps_used),
        StopReason::StepLimit => "StepLimit".to_string(),
        StopReason::OffspringCap => "OffspringCap".to_string(),
    };
    println!("{reason}; {}", phenotype.kind);
    Ok(())
}

// ---------------------------------------------------------------------------
// verify

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Census prefix to verify (otherwise build one in memory).
    #[arg(long)]
    census: Option<PathBuf>,
    /// Sequence length L for an in-memory run.
    #[arg(short = 'L', long)]
    length: Option<u32>,
    #[command(flatten)]
    isa: IsaArgs,
    #[command(flatten)]
    vm: VmArgs,
    /// Contiguous rank shards for an in-memory run.
    #[arg(long)]
    shards: Option<u32>,
    /// Worker threads.
    #[arg(long)]
    threads: Option<usize>,
    /// TOML file supplying defaults for any flag.
    #[arg(long)]
    config: Option<PathBuf>,
}

fn cmd_verify(args: VerifyArgs) -> Result<()> {
    let file = FileConfig::load(args.config.as_deref())?;
    let threads = resolve_threads(args.threads, &file)?;

    let (mut census, config, from_files) = match &args.census {
        Some(path) => {
            let LoadedCensus { census, meta } = load_census(path)?;
            let config = CensusConfig {
                length: meta.length,
                isa: meta.isa()?,
                limits: meta.limits(),
                budgets: meta.budgets(),
                shard_count: meta.shard_count,
            };
            config.validate()?;
            (census, config, true)
        }
        None => {
            let length = args
                .length
                .or(file.length)
                .ok_or_else(|| Error::Usage("--length or --census is required".into()))?;
            let isa = args.isa.resolve(&file)?;
            let config = CensusConfig {
                length,
                isa,
                limits: args.vm.limits(&file, length),
                budgets: args.vm.budgets(&file),
                shard_count: args.shards.or(file.shards).unwrap_or(DEFAULT_SHARD_COUNT),
            };
            config.validate()?;
            let census = run_census(&config, threads)?;
            (census, config, false)
        }
    };
    census.build_bitmap();
    if from_files {
        println!("ok   checksums verified on load");
    }

    let checks = crate::verify::run_all(&census, &config);
    let total = checks.len();
    let mut failed = 0usize;
    for check in checks {
        match check.outcome {
            Ok(()) => println!("ok   {}", check.name),
            Err(detail) => {
                failed += 1;
                println!("FAIL {}: {detail}", check.name);
            }
        }
    }
    if failed > 0 {
        return Err(Error::VerificationFailed { failed, total });
    }
    println!("all {total} checks passed");
    Ok(())
}
