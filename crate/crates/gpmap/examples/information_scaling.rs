//! How the information content of self-replication scales with genome
//! length: I_L = L - log_D(N_L) in mers, over complete censuses of every
//! length the desk can afford.
//!
//! ```bash
//! cargo run --example information_scaling
//! ```

use gpmap::analysis::info::functional_information;
use gpmap::census::{run_census, CensusConfig};
use gpmap::IsaSpec;

fn main() {
    let threads = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    println!("  L      total   viable     I (mers)   viable fraction");
    for length in 1..=6u32 {
        let config = CensusConfig::new(length, IsaSpec::default_v1()).expect("valid config");
        let census = run_census(&config, threads).expect("census runs");
        let info = functional_information(census.viable_count(), length, census.alphabet())
            .expect("count within space");
        let fraction = census.viable_count() as f64 / census.total as f64;
        match info.mers {
            Some(mers) => println!(
                "{:>3} {:>10} {:>8} {:>12.5} {:>17.3e}",
                length,
                census.total,
                census.viable_count(),
                mers,
                fraction
            ),
            None => println!(
                "{:>3} {:>10} {:>8} {:>12} {:>17}",
                length, census.total, 0, "undefined", "0"
            ),
        }
    }
    println!("\nan empty viable set has undefined (infinite) information content;");
    println!("one lone replicator would carry the maximum, L mers.");
}
