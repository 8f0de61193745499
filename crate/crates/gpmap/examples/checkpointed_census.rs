//! Run a sharded census to its on-disk file set, then load it back with
//! checksum verification.
//!
//! The run checkpoints after every completed shard, so killing it halfway
//! and re-running the same command resumes where it stopped and still
//! produces byte-identical payloads. Shard count and thread count never
//! change a single output byte either.
//!
//! ```bash
//! cargo run --example checkpointed_census
//! ```

use gpmap::census::files::load_census;
use gpmap::census::{run_census_to_files, BitmapChoice, CensusConfig, RunOptions};
use gpmap::IsaSpec;

fn main() {
    let dir = std::env::temp_dir().join("gpmap-example-census");
    std::fs::create_dir_all(&dir).expect("temp dir");
    let prefix = dir.join("l4");

    let mut config = CensusConfig::new(4, IsaSpec::default_v1()).expect("valid config");
    config.shard_count = 32;
    let opts = RunOptions {
        threads: 4,
        bitmap: BitmapChoice::Always,
        force: true,
    };

    let summary = run_census_to_files(&config, &prefix, &opts).expect("census runs");
    println!("wrote:");
    for path in &summary.outputs {
        println!("  {}", path.display());
    }
    println!(
        "shards computed {}  resumed {}  in {:.2}s",
        summary.computed_shards, summary.resumed_shards, summary.duration_seconds
    );

    // Loading re-verifies every payload checksum recorded in the meta file.
    let loaded = load_census(&prefix).expect("checksums verify");
    println!(
        "\nloaded back: {} viable of {} total, bitmap {}",
        loaded.census.viable_count(),
        loaded.census.total,
        if loaded.census.bitmap.is_some() { "present" } else { "absent" },
    );
    println!("meta created {}", loaded.meta.created_utc);
    for (file, sha) in &loaded.meta.payload_sha256 {
        println!("  {file}  sha256 {}...", &sha[..16]);
    }
}
