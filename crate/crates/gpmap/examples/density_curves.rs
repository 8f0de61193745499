//! Information-density curves: how the fraction of viable sequences decays
//! with mutation distance from a replicator, against the two theoretical
//! baselines.
//!
//! phi(n) is the log (base D) of the viable fraction within distance n.
//! Every curve runs from phi(0) = 0 down to phi(L) = -I_L. The compressed
//! baseline is the floor set by a replicator with no viable neighbors; the
//! no-epistasis line is the linear decay of independent sites. Lying above
//! the line means antagonistic epistasis, below means synergistic.
//!
//! ```bash
//! cargo run --example density_curves
//! ```

use gpmap::analysis::curves::{
    compressed_baseline, density_curve, epistasis_sign, mean_curve, no_epistasis_baseline,
    robustness_profile, EPISTASIS_DEADBAND,
};
use gpmap::census::{run_census, CensusConfig};
use gpmap::IsaSpec;

fn main() {
    let mut config = CensusConfig::new(5, IsaSpec::default_v1()).expect("valid config");
    config.shard_count = 32;
    let mut census = run_census(&config, 4).expect("census runs");
    census.build_bitmap();

    let info = census.information().mers.expect("viable set is non-empty");
    println!(
        "viable {} of {}  =>  I = {info:.4} mers",
        census.viable_count(),
        census.total
    );

    let profile = robustness_profile(&census);
    let (robust_rank, nu_max) = profile.most_robust.expect("non-empty");
    let (fragile_rank, nu_min) = profile.most_fragile.expect("non-empty");
    let robust = density_curve(&census, robust_rank).expect("viable");
    let fragile = density_curve(&census, fragile_rank).expect("viable");
    let mean = mean_curve(&census).expect("non-empty");
    let floor = compressed_baseline(census.length, census.alphabet());
    let line = no_epistasis_baseline(census.length, info).expect("0 <= I <= L");

    println!(
        "most robust  {} (nu = {nu_max}),  most fragile {} (nu = {nu_min})",
        census.genome(robust_rank).unwrap().letters(),
        census.genome(fragile_rank).unwrap().letters(),
    );
    println!();
    println!("  n   phi_robust  phi_fragile     phi_mean      phi_min       phi_ne");
    for n in 0..=census.length as usize {
        println!(
            "{:>3} {:>12.5} {:>12.5} {:>12.5} {:>12.5} {:>12.5}",
            n, robust.phi[n], fragile.phi[n], mean[n], floor[n], line[n]
        );
    }

    let signs = epistasis_sign(&robust.phi, &line, EPISTASIS_DEADBAND).expect("same length");
    let labels: Vec<&str> = signs
        .iter()
        .map(|s| match s {
            1 => "antagonistic",
            -1 => "synergistic",
            _ => "neutral",
        })
        .collect();
    println!("\nepistasis along the most robust curve: {labels:?}");
}
