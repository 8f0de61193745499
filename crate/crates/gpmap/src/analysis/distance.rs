//! Counts of viable genotypes by exact mutation distance from a target.
//!
//! Two interchangeable strategies are kept side by side: walking the sorted
//! viable list pair by pair, and scanning the full-space bitmap with an
//! incrementing digit counter. They must agree bit for bit; the dispatcher
//! prefers the bitmap when one is loaded.

use crate::census::Census;
use crate::error::{Error, Result};

/// N(k) for k = 0..=L: viable genotypes at exact distance k from `rank`.
/// N(0) = 1 (the target itself) and the entries sum to the viable count.
pub fn viable_counts_by_distance(census: &Census, rank: u64) -> Result<Vec<u64>> {
    if census.bitmap.is_some() {
        counts_by_distance_bitmap(census, rank)
    } else {
        counts_by_distance_pairwise(census, rank)
    }
}

/// Distance histogram via the sorted viable-rank list.
pub fn counts_by_distance_pairwise(census: &Census, rank: u64) -> Result<Vec<u64>> {
    if !census.is_viable(rank) {
        return Err(Error::NotViable(rank));
    }
    let target = census.genome(rank)?;
    let mut counts = vec![0u64; census.length as usize + 1];
    for &other in &census.viable_ranks {
        let distance = digits_distance_from_ranks(
            target.symbols(),
            other,
            census.alphabet(),
        );
        counts[distance] += 1;
    }
    Ok(counts)
}

/// Distance histogram via a full scan of the viability bitmap.
pub fn counts_by_distance_bitmap(census: &Census, rank: u64) -> Result<Vec<u64>> {
    let bitmap = census.bitmap.as_ref().ok_or_else(|| {
        Error::InvalidConfig("census has no bitmap; use the pairwise path".into())
    })?;
    if !bitmap.get(rank) {
        return Err(Error::NotViable(rank));
    }
    let target = census.genome(rank)?;
    let length = census.length as usize;
    let alphabet = census.alphabet();
    let mut counts = vec![0u64; length + 1];
    // Walk every rank in order, maintaining the digit vector and its
    // distance to the target incrementally.
    let mut digits = vec![0u8; length];
    let mut distance = target.symbols().iter().filter(|&&s| s != 0).count();
    for candidate in 0..census.total {
        if bitmap.get(candidate) {
            counts[distance] += 1;
        }
        // Increment base-D, updating the running distance per changed digit.
        for position in (0..length).rev() {
            let before = digits[position];
            let target_digit = target.symbols()[position];
            if before != target_digit {
                distance -= 1;
            }
            let after = if before + 1 < alphabet { before + 1 } else { 0 };
            digits[position] = after;
            if after != target_digit {
                distance += 1;
            }
            if after != 0 {
                break;
            }
        }
    }
    Ok(counts)
}

fn digits_distance_from_ranks(target: &[u8], mut other: u64, alphabet: u8) -> usize {
    let mut distance = 0usize;
    for &digit in target.iter().rev() {
        if (other % alphabet as u64) as u8 != digit {
            distance += 1;
        }
        other /= alphabet as u64;
    }
    distance
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::{run_census, CensusConfig};
    use crate::genome::Genome;
    use crate::isa::IsaSpec;

    fn census(length: u32, with_bitmap: bool) -> Census {
        let mut config = CensusConfig::new(length, IsaSpec::default_v1()).unwrap();
        config.shard_count = 8;
        let mut census = run_census(&config, 2).unwrap();
        if with_bitmap {
            census.build_bitmap();
        }
        census
    }

    #[test]
    fn distance_zero_counts_the_target_itself() {
        let census = census(3, false);
        let cde = Genome::from_letters("cde", 8).unwrap().rank();
        let counts = viable_counts_by_distance(&census, cde).unwrap();
        assert_eq!(counts[0], 1);
    }

    #[test]
    fn counts_partition_the_viable_set() {
        let census = census(4, false);
        for &rank in census.viable_ranks.iter().take(16) {
            let counts = viable_counts_by_distance(&census, rank).unwrap();
            assert_eq!(counts.iter().sum::<u64>(), census.viable_count());
        }
    }

    #[test]
    fn both_strategies_agree() {
        let census = census(4, true);
        for &rank in &census.viable_ranks {
            let a = counts_by_distance_pairwise(&census, rank).unwrap();
            let b = counts_by_distance_bitmap(&census, rank).unwrap();
            assert_eq!(a, b, "strategies disagree at rank {rank}");
        }
    }

    #[test]
    fn non_viable_target_is_rejected() {
        let census = census(3, true);
        let aaa = Genome::from_letters("aaa", 8).unwrap().rank();
        assert!(matches!(
            viable_counts_by_distance(&census, aaa),
            Err(Error::NotViable(_))
        ));
        assert!(matches!(
            counts_by_distance_pairwise(&census, aaa),
            Err(Error::NotViable(_))
        ));
    }

    #[test]
    fn bitmap_path_requires_a_bitmap() {
        let census = census(3, false);
        let cde = Genome::from_letters("cde", 8).unwrap().rank();
        assert!(counts_by_distance_bitmap(&census, cde).is_err());
    }
}
