//! Classify every one of the 8^5 = 32768 five-symbol programs in memory
//! and summarize the viable set.
//!
//! ```bash
//! cargo run --example exhaustive_census
//! ```

use gpmap::census::{run_census, CensusConfig};
use gpmap::IsaSpec;

fn main() {
    let config = CensusConfig::new(5, IsaSpec::default_v1()).expect("within the rank envelope");
    let threads = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    let census = run_census(&config, threads).expect("shards cover the space");

    println!(
        "space    {}^{} = {} sequences",
        census.alphabet(),
        census.length,
        census.total
    );
    println!("viable   {}", census.viable_count());
    println!("fraction {:.3e}", census.viable_count() as f64 / census.total as f64);
    println!("self-replicators {}", census.self_replicator_count);

    let info = census.information();
    match info.mers {
        Some(mers) => println!("information {mers:.6} mers (of {} possible)", census.length),
        None => println!("information undefined: nothing viable"),
    }

    // The first few replicators, smallest ranks first.
    println!("\nsmallest viable genotypes:");
    for &rank in census.viable_ranks.iter().take(8) {
        let genome = census.genome(rank).unwrap();
        println!("  rank {:>6}  {}", rank, genome.letters());
    }
}
