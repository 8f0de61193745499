//! Partition the viable set into neutral clusters connected by one-mutant
//! steps, group rotated variants, and export the largest cluster as DOT.
//!
//! ```bash
//! cargo run --example neutral_clusters
//! ```

use gpmap::analysis::clusters::{find_clusters, ClusterMode};
use gpmap::analysis::curves::robustness_profile;
use gpmap::analysis::rotation::rotation_classes;
use gpmap::census::{run_census, CensusConfig};
use gpmap::export::component_graph_dot;
use gpmap::IsaSpec;

fn main() {
    let mut config = CensusConfig::new(4, IsaSpec::default_v1()).expect("valid config");
    config.shard_count = 32;
    let mut census = run_census(&config, 4).expect("census runs");
    census.build_bitmap();
    println!("viable genotypes: {}", census.viable_count());

    let rotations = rotation_classes(&census);
    println!("rotation classes: {}", rotations.class_count());

    for mode in [ClusterMode::Raw, ClusterMode::CollapsedRotations] {
        let set = find_clusters(&census, mode);
        let sizes: Vec<u64> = set.components.iter().take(6).map(|c| c.size).collect();
        println!("clusters ({mode}): {} components, largest sizes {sizes:?}", set.components.len());
    }

    let profile = robustness_profile(&census);
    if let (Some((robust, nu_max)), Some((fragile, nu_min))) =
        (profile.most_robust, profile.most_fragile)
    {
        let robust_letters = census.genome(robust).unwrap().letters();
        let fragile_letters = census.genome(fragile).unwrap().letters();
        println!("most robust  {robust_letters} with {nu_max} viable neighbors");
        println!("most fragile {fragile_letters} with {nu_min} viable neighbors");
    }

    let raw = find_clusters(&census, ClusterMode::Raw);
    let largest = raw.largest().expect("non-empty viable set");
    println!(
        "\nlargest cluster: id {}, {} members, {} edges",
        largest.id, largest.size, largest.edge_count
    );
    let dot = component_graph_dot(&census, largest).expect("members are viable");
    let preview: Vec<&str> = dot.lines().take(8).collect();
    println!("{}", preview.join("\n"));
    println!("... ({} more lines)", dot.lines().count() - preview.len());
}
