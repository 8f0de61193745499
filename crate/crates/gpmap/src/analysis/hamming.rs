//! One-mutant neighborhoods over the rank space.

use crate::census::Census;
use crate::error::{Error, Result};
use crate::genome::Genome;

/// All L*(D-1) genomes differing from `genome` at exactly one position,
/// position-major with replacement symbols ascending.
pub fn hamming_neighbors(genome: &Genome) -> Vec<Genome> {
    let alphabet = genome.alphabet();
    let mut neighbors = Vec::with_capacity(genome.len() * (alphabet as usize - 1));
    for position in 0..genome.len() {
        let original = genome.symbol(position);
        for symbol in 0..alphabet {
            if symbol == original {
                continue;
            }
            let mut symbols = genome.symbols().to_vec();
            symbols[position] = symbol;
            neighbors.push(Genome::from_symbols_unchecked(symbols, alphabet));
        }
    }
    neighbors
}

/// Powers D^(L-1-p) for rank arithmetic on single-position substitutions.
pub(crate) fn pow_table(length: u32, alphabet: u8) -> Vec<u64> {
    let mut pows = vec![1u64; length as usize];
    for p in (0..length as usize - 1).rev() {
        pows[p] = pows[p + 1] * alphabet as u64;
    }
    pows
}

/// Invoke `f` with the rank of every one-mutant neighbor, position-major,
/// replacement symbols ascending.
#[inline]
pub(crate) fn for_each_neighbor_rank(
    digits: &[u8],
    rank: u64,
    alphabet: u8,
    pows: &[u64],
    mut f: impl FnMut(u64),
) {
    for (position, &digit) in digits.iter().enumerate() {
        let base = rank - digit as u64 * pows[position];
        for symbol in 0..alphabet {
            if symbol == digit {
                continue;
            }
            f(base + symbol as u64 * pows[position]);
        }
    }
}

/// Number of viable one-mutant neighbors of a viable rank.
pub fn robustness(census: &Census, rank: u64) -> Result<u32> {
    if !census.is_viable(rank) {
        return Err(Error::NotViable(rank));
    }
    let digits = census.genome(rank)?;
    let pows = pow_table(census.length, census.alphabet());
    let mut count = 0u32;
    for_each_neighbor_rank(digits.symbols(), rank, census.alphabet(), &pows, |n| {
        if census.is_viable(n) {
            count += 1;
        }
    });
    Ok(count)
}

/// Robustness of every viable genome, indexed like `census.viable_ranks`.
pub(crate) fn robustness_all(census: &Census) -> Vec<u32> {
    let pows = pow_table(census.length, census.alphabet());
    census
        .viable_ranks
        .iter()
        .map(|&rank| {
            let genome = census.genome(rank).expect("viable rank within space");
            let mut count = 0u32;
            for_each_neighbor_rank(genome.symbols(), rank, census.alphabet(), &pows, |n| {
                if census.is_viable(n) {
                    count += 1;
                }
            });
            count
        })
        .collect()
}

/// Edges of the viability graph as index pairs into `census.viable_ranks`,
/// each undirected edge reported once with the smaller rank first.
pub fn viable_edges(census: &Census) -> Vec<(u32, u32)> {
    let pows = pow_table(census.length, census.alphabet());
    let mut edges = Vec::new();
    for (index, &rank) in census.viable_ranks.iter().enumerate() {
        let genome = census.genome(rank).expect("viable rank within space");
        for_each_neighbor_rank(genome.symbols(), rank, census.alphabet(), &pows, |n| {
            if n > rank && census.is_viable(n) {
                let other = census
                    .viable_index(n)
                    .expect("viable membership implies an index");
                edges.push((index as u32, other as u32));
            }
        });
    }
    edges
}
