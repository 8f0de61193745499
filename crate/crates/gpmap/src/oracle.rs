//! Naive reference implementations used to cross-check the fast paths.
//!
//! These deliberately avoid the production machinery: the census oracle is
//! a single flat loop with per-rank unranking, clusters come from pairwise
//! adjacency plus breadth-first search, rotation grouping from pairwise
//! orbit comparison, and distance counts from pairwise digit comparison.
//! `verify` runs them against the fast implementations; the test suites do
//! the same.

use std::collections::VecDeque;

use crate::census::CensusConfig;
use crate::genome::Genome;
use crate::phenotype::{classify, PhenotypeKind};

/// Classify every rank in one single-threaded pass. Returns the viable
/// ranks and the self-replicator count.
pub fn census_oracle(config: &CensusConfig) -> (Vec<u64>, u64) {
    let mut viable = Vec::new();
    let mut self_replicators = 0u64;
    for rank in 0..config.total() {
        let genome = Genome::unrank(rank, config.length, config.alphabet())
            .expect("rank within space");
        let phenotype = classify(&genome, &config.isa, &config.limits, &config.budgets);
        if phenotype.is_viable() {
            viable.push(rank);
            if phenotype.kind == PhenotypeKind::SelfReplicator {
                self_replicators += 1;
            }
        }
    }
    (viable, self_replicators)
}

pub fn digits_of(rank: u64, length: u32, alphabet: u8) -> Vec<u8> {
    Genome::unrank(rank, length, alphabet)
        .expect("rank within space")
        .symbols()
        .to_vec()
}

fn hamming(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

fn rotation_equivalent(a: &[u8], b: &[u8]) -> bool {
    let length = a.len();
    (0..length).any(|shift| (0..length).all(|p| a[(p + shift) % length] == b[p]))
}

/// Connected components of the one-mutant viability graph by breadth-first
/// search over a pairwise adjacency matrix. Members ascending; components
/// ordered by size descending, ties by smallest member.
pub fn bfs_components(length: u32, alphabet: u8, viable: &[u64]) -> Vec<Vec<u64>> {
    let digits: Vec<Vec<u8>> = viable
        .iter()
        .map(|&r| digits_of(r, length, alphabet))
        .collect();
    let count = viable.len();
    let mut adjacency = vec![Vec::new(); count];
    for i in 0..count {
        for j in (i + 1)..count {
            if hamming(&digits[i], &digits[j]) == 1 {
                adjacency[i].push(j);
                adjacency[j].push(i);
            }
        }
    }
    let mut seen = vec![false; count];
    let mut components = Vec::new();
    for start in 0..count {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        let mut members = Vec::new();
        while let Some(node) = queue.pop_front() {
            members.push(viable[node]);
            for &next in &adjacency[node] {
                if !seen[next] {
                    seen[next] = true;
                    queue.push_back(next);
                }
            }
        }
        members.sort_unstable();
        components.push(members);
    }
    components.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    components
}

/// Components after collapsing rotation-equivalent genotypes into single
/// vertices; members stay raw ranks.
pub fn bfs_components_collapsed(length: u32, alphabet: u8, viable: &[u64]) -> Vec<Vec<u64>> {
    let digits: Vec<Vec<u8>> = viable
        .iter()
        .map(|&r| digits_of(r, length, alphabet))
        .collect();
    let count = viable.len();
    let mut adjacency = vec![Vec::new(); count];
    for i in 0..count {
        for j in (i + 1)..count {
            if hamming(&digits[i], &digits[j]) == 1 || rotation_equivalent(&digits[i], &digits[j])
            {
                adjacency[i].push(j);
                adjacency[j].push(i);
            }
        }
    }
    let mut seen = vec![false; count];
    let mut components = Vec::new();
    for start in 0..count {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        let mut members = Vec::new();
        while let Some(node) = queue.pop_front() {
            members.push(viable[node]);
            for &next in &adjacency[node] {
                if !seen[next] {
                    seen[next] = true;
                    queue.push_back(next);
                }
            }
        }
        members.sort_unstable();
        components.push(members);
    }
    components.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    components
}

/// Rotation-equivalence partition by pairwise comparison and group merging.
pub fn rotation_partition(length: u32, alphabet: u8, viable: &[u64]) -> Vec<Vec<u64>> {
    let digits: Vec<Vec<u8>> = viable
        .iter()
        .map(|&r| digits_of(r, length, alphabet))
        .collect();
    let mut group_of: Vec<usize> = (0..viable.len()).collect();
    for i in 0..viable.len() {
        for j in (i + 1)..viable.len() {
            if rotation_equivalent(&digits[i], &digits[j]) {
                let (gi, gj) = (group_of[i], group_of[j]);
                if gi != gj {
                    for g in group_of.iter_mut() {
                        if *g == gj {
                            *g = gi;
                        }
                    }
                }
            }
        }
    }
    let mut groups: Vec<Vec<u64>> = Vec::new();
    let mut labels: Vec<usize> = Vec::new();
    for (index, &label) in group_of.iter().enumerate() {
        match labels.iter().position(|&l| l == label) {
            Some(slot) => groups[slot].push(viable[index]),
            None => {
                labels.push(label);
                groups.push(vec![viable[index]]);
            }
        }
    }
    for group in groups.iter_mut() {
        group.sort_unstable();
    }
    groups.sort_by_key(|g| g[0]);
    groups
}

/// Histogram of Hamming distances from `target` to every viable rank.
pub fn distance_counts(length: u32, alphabet: u8, viable: &[u64], target: u64) -> Vec<u64> {
    let target_digits = digits_of(target, length, alphabet);
    let mut counts = vec![0u64; length as usize + 1];
    for &other in viable {
        let other_digits = digits_of(other, length, alphabet);
        counts[hamming(&target_digits, &other_digits)] += 1;
    }
    counts
}
