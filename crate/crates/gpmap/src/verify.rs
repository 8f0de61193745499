//! The oracle cross-check battery behind `gpmap verify`.
//!
//! Each check compares a fast implementation against its naive reference
//! from [`crate::oracle`], or asserts one of the structural laws the
//! landscape must satisfy. Checks report a human-readable failure detail
//! instead of panicking, so one broken invariant never hides the others.

use crate::analysis::clusters::{find_clusters, ClusterMode, ClusterSet};
use crate::analysis::curves::{all_density_curves, compressed_baseline, cumulative_space};
use crate::analysis::distance::{counts_by_distance_bitmap, counts_by_distance_pairwise};
use crate::analysis::hamming::viable_edges;
use crate::analysis::rotation::rotation_classes;
use crate::census::{Census, CensusConfig};
use crate::oracle;

pub struct CheckResult {
    pub name: &'static str,
    pub outcome: Result<(), String>,
}

/// Deterministic sample of viable indices for the quadratic checks: all of
/// them up to `cap`, otherwise an even stride plus the last one.
fn sample_indices(count: usize, cap: usize) -> Vec<usize> {
    if count <= cap {
        return (0..count).collect();
    }
    let stride = count / cap;
    let mut picks: Vec<usize> = (0..cap).map(|i| i * stride).collect();
    picks.push(count - 1);
    picks.dedup();
    picks
}

fn components_as_rank_lists(set: &ClusterSet) -> Vec<Vec<u64>> {
    let mut lists: Vec<Vec<u64>> = set
        .components
        .iter()
        .map(|c| {
            let mut members = c.member_ranks.clone();
            members.sort_unstable();
            members
        })
        .collect();
    lists.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    lists
}

/// Run the whole battery. `census.bitmap` must be present (callers build it).
pub fn run_all(census: &Census, config: &CensusConfig) -> Vec<CheckResult> {
    let mut checks = Vec::new();
    let mut check = |name: &'static str, outcome: Result<(), String>| {
        checks.push(CheckResult { name, outcome });
    };

    check("shard ranges partition the space", {
        let ranges = config.shard_ranges();
        let mut expected_lo = 0u64;
        let mut outcome = Ok(());
        for (index, &(lo, hi)) in ranges.iter().enumerate() {
            if lo != expected_lo || hi < lo {
                outcome = Err(format!(
                    "shard {index} spans [{lo}, {hi}) but should start at {expected_lo}"
                ));
                break;
            }
            expected_lo = hi;
        }
        if outcome.is_ok() && expected_lo != config.total() {
            outcome = Err(format!(
                "shards end at {expected_lo}, not at the space size {}",
                config.total()
            ));
        }
        outcome
    });

    check("viable set matches the single-pass reference", {
        let (viable, self_replicators) = oracle::census_oracle(config);
        if viable != census.viable_ranks {
            Err(format!(
                "reference finds {} viable, census holds {}",
                viable.len(),
                census.viable_ranks.len()
            ))
        } else if self_replicators != census.self_replicator_count {
            Err(format!(
                "reference counts {self_replicators} self-replicators, census records {}",
                census.self_replicator_count
            ))
        } else {
            Ok(())
        }
    });

    check("bitmap agrees with the rank list", {
        match &census.bitmap {
            None => Err("census has no bitmap to check".to_string()),
            Some(bitmap) => {
                if bitmap.count_ones() != census.viable_count() {
                    Err(format!(
                        "bitmap sets {} bits for {} viable ranks",
                        bitmap.count_ones(),
                        census.viable_count()
                    ))
                } else if let Some(&bad) = census
                    .viable_ranks
                    .iter()
                    .find(|&&rank| !bitmap.get(rank))
                {
                    Err(format!("viable rank {bad} is clear in the bitmap"))
                } else {
                    Ok(())
                }
            }
        }
    });

    check("rotation classes match the pairwise reference", {
        let fast: Vec<Vec<u64>> = rotation_classes(census)
            .classes
            .into_iter()
            .map(|c| c.members)
            .collect();
        let reference =
            oracle::rotation_partition(census.length, census.alphabet(), &census.viable_ranks);
        if fast == reference {
            Ok(())
        } else {
            Err(format!(
                "{} classes against the reference's {}",
                fast.len(),
                reference.len()
            ))
        }
    });

    check("raw clusters match the breadth-first reference", {
        let fast = components_as_rank_lists(&find_clusters(census, ClusterMode::Raw));
        let reference =
            oracle::bfs_components(census.length, census.alphabet(), &census.viable_ranks);
        if fast == reference {
            Ok(())
        } else {
            Err(format!(
                "{} components against the reference's {}",
                fast.len(),
                reference.len()
            ))
        }
    });

    check("collapsed clusters match the breadth-first reference", {
        let fast =
            components_as_rank_lists(&find_clusters(census, ClusterMode::CollapsedRotations));
        let reference = oracle::bfs_components_collapsed(
            census.length,
            census.alphabet(),
            &census.viable_ranks,
        );
        if fast == reference {
            Ok(())
        } else {
            Err(format!(
                "{} components against the reference's {}",
                fast.len(),
                reference.len()
            ))
        }
    });

    let samples = sample_indices(census.viable_ranks.len(), 512);

    check("distance counts match the pairwise reference", {
        let mut outcome = Ok(());
        for &index in &samples {
            let rank = census.viable_ranks[index];
            let fast = counts_by_distance_pairwise(census, rank).expect("rank is viable");
            let reference = oracle::distance_counts(
                census.length,
                census.alphabet(),
                &census.viable_ranks,
                rank,
            );
            if fast != reference {
                outcome = Err(format!("histograms differ at rank {rank}"));
                break;
            }
        }
        outcome
    });

    check("bitmap and pairwise distance strategies agree", {
        let mut outcome = Ok(());
        if census.bitmap.is_none() {
            outcome = Err("census has no bitmap to scan".to_string());
        } else {
            for &index in &samples {
                let rank = census.viable_ranks[index];
                let pairwise = counts_by_distance_pairwise(census, rank).expect("viable");
                let scanned = counts_by_distance_bitmap(census, rank).expect("viable");
                if pairwise != scanned {
                    outcome = Err(format!("strategies disagree at rank {rank}"));
                    break;
                }
            }
        }
        outcome
    });

    check("collapsed edge counts match a pairwise class recount", {
        let set = find_clusters(census, ClusterMode::CollapsedRotations);
        let mut component_of = std::collections::HashMap::new();
        for component in &set.components {
            for &rank in &component.member_ranks {
                component_of.insert(rank, component.id);
            }
        }
        let classes =
            oracle::rotation_partition(census.length, census.alphabet(), &census.viable_ranks);
        let mut class_of = std::collections::HashMap::new();
        for (index, class) in classes.iter().enumerate() {
            for &rank in class {
                class_of.insert(rank, index);
            }
        }
        let digits: Vec<Vec<u8>> = census
            .viable_ranks
            .iter()
            .map(|&r| oracle::digits_of(r, census.length, census.alphabet()))
            .collect();
        let mut pairs = std::collections::HashSet::new();
        for i in 0..census.viable_ranks.len() {
            for j in (i + 1)..census.viable_ranks.len() {
                let distance = digits[i]
                    .iter()
                    .zip(&digits[j])
                    .filter(|(a, b)| a != b)
                    .count();
                if distance != 1 {
                    continue;
                }
                let (ca, cb) = (
                    class_of[&census.viable_ranks[i]],
                    class_of[&census.viable_ranks[j]],
                );
                if ca != cb {
                    pairs.insert((ca.min(cb), ca.max(cb)));
                }
            }
        }
        let mut recount = std::collections::HashMap::new();
        for &(ca, _) in &pairs {
            let component = component_of[&classes[ca][0]];
            *recount.entry(component).or_insert(0u64) += 1;
        }
        let mut outcome = Ok(());
        for component in &set.components {
            let expected = recount.get(&component.id).copied().unwrap_or(0);
            if component.edge_count != expected {
                outcome = Err(format!(
                    "component {} reports {} edges, recount finds {expected}",
                    component.id, component.edge_count
                ));
                break;
            }
        }
        outcome
    });

    check("robustness handshake: sum nu equals twice the edge count", {
        let edges = viable_edges(census).len() as u64;
        let curves = all_density_curves(census);
        let nu_sum: u64 = curves.iter().map(|c| c.counts[1]).sum();
        if nu_sum == 2 * edges {
            Ok(())
        } else {
            Err(format!("sum nu = {nu_sum} but edges = {edges}"))
        }
    });

    check("curve laws hold for every viable genotype", {
        let info = census.information();
        let phi_min = compressed_baseline(census.length, census.alphabet());
        let curves = all_density_curves(census);
        let mut outcome = Ok(());
        match info.mers {
            None => {
                if !curves.is_empty() {
                    outcome = Err("information undefined with a non-empty viable set".into());
                }
            }
            Some(info_mers) => {
                'outer: for curve in &curves {
                    if curve.phi[0] != 0.0 {
                        outcome = Err(format!("phi(0) != 0 at rank {}", curve.rank));
                        break;
                    }
                    let end = curve.phi[census.length as usize];
                    if (end + info_mers).abs() > 1e-9 {
                        outcome = Err(format!(
                            "phi(L) = {end} but -I = {} at rank {}",
                            -info_mers, curve.rank
                        ));
                        break;
                    }
                    for (n, (&phi, &floor)) in curve.phi.iter().zip(&phi_min).enumerate() {
                        if phi < floor - 1e-12 {
                            outcome = Err(format!(
                                "phi({n}) = {phi} dips below the compressed floor {floor} at rank {}",
                                curve.rank
                            ));
                            break 'outer;
                        }
                    }
                }
            }
        }
        outcome
    });

    check("cumulative neighborhood sums telescope to D^L", {
        let cumulative = cumulative_space(census.length, census.alphabet());
        if *cumulative.last().unwrap() == census.total {
            Ok(())
        } else {
            Err(format!(
                "sum is {} but the space holds {}",
                cumulative.last().unwrap(),
                census.total
            ))
        }
    });

    checks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::run_census;
    use crate::isa::IsaSpec;

    #[test]
    fn battery_passes_on_a_small_census() {
        let mut config = CensusConfig::new(4, IsaSpec::default_v1()).unwrap();
        config.shard_count = 8;
        let mut census = run_census(&config, 2).unwrap();
        census.build_bitmap();
        let results = run_all(&census, &config);
        for result in &results {
            assert!(
                result.outcome.is_ok(),
                "{}: {:?}",
                result.name,
                result.outcome
            );
        }
        assert_eq!(results.len(), 12);
    }

    #[test]
    fn battery_flags_a_tampered_census() {
        let mut config = CensusConfig::new(3, IsaSpec::default_v1()).unwrap();
        config.shard_count = 4;
        let mut census = run_census(&config, 1).unwrap();
        // Claim an extra viable genome that the reference will reject.
        census.viable_ranks.insert(0, 0);
        census.build_bitmap();
        let results = run_all(&census, &config);
        assert!(results.iter().any(|r| r.outcome.is_err()));
    }

    #[test]
    fn sampling_is_deterministic_and_bounded() {
        assert_eq!(sample_indices(5, 10), vec![0, 1, 2, 3, 4]);
        let picks = sample_indices(10_000, 512);
        assert!(picks.len() <= 513);
        assert_eq!(picks, sample_indices(10_000, 512));
        assert_eq!(*picks.last().unwrap(), 9_999);
    }
}
