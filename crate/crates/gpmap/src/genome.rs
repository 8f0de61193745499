//! Fixed-length circular genomes over an alphabet of size D.
//!
//! A genome's identity doubles as an integer rank: the base-D number whose
//! most significant digit is symbol 0. Every genome constructed here fits
//! the 64-bit rank envelope (`length * log2(alphabet) <= 63`).

use crate::error::{Error, Result};

/// Size of the sequence space D^L, or an error when it does not fit u64.
pub fn space_size(length: u32, alphabet: u8) -> Result<u64> {
    if length == 0 {
        return Err(Error::InvalidConfig("length must be at least 1".into()));
    }
    if alphabet < 2 {
        return Err(Error::InvalidConfig(
            "alphabet must have at least 2 symbols".into(),
        ));
    }
    let mut total: u64 = 1;
    for _ in 0..length {
        total = total
            .checked_mul(alphabet as u64)
            .filter(|&t| t <= (1u64 << 63))
            .ok_or(Error::SpaceTooLarge { length, alphabet })?;
    }
    Ok(total)
}

/// A fixed-length sequence of symbols in `[0, alphabet)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Genome {
    symbols: Vec<u8>,
    alphabet: u8,
}

impl Genome {
    pub fn from_symbols(symbols: Vec<u8>, alphabet: u8) -> Result<Self> {
        space_size(symbols.len() as u32, alphabet)?;
        if let Some(&bad) = symbols.iter().find(|&&s| s >= alphabet) {
            return Err(Error::SymbolOutOfRange {
                symbol: bad as u32,
                alphabet,
            });
        }
        Ok(Genome { symbols, alphabet })
    }

    /// Construct from symbols already known to be valid.
    pub(crate) fn from_symbols_unchecked(symbols: Vec<u8>, alphabet: u8) -> Self {
        debug_assert!(symbols.iter().all(|&s| s < alphabet));
        Genome { symbols, alphabet }
    }

    /// Parse the letter encoding (a = symbol 0, b = 1, ...).
    pub fn from_letters(letters: &str, alphabet: u8) -> Result<Self> {
        let mut symbols = Vec::with_capacity(letters.len());
        for (position, letter) in letters.chars().enumerate() {
            let symbol = match letter {
                'a'..='z' => letter as u8 - b'a',
                _ => u8::MAX,
            };
            if symbol >= alphabet {
                return Err(Error::BadLetter {
                    letter,
                    position,
                    alphabet,
                });
            }
            symbols.push(symbol);
        }
        Genome::from_symbols(symbols, alphabet)
    }

    /// Letter encoding of the genome.
    pub fn letters(&self) -> String {
        self.symbols.iter().map(|&s| (b'a' + s) as char).collect()
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn alphabet(&self) -> u8 {
        self.alphabet
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    #[inline]
    pub fn symbol(&self, position: usize) -> u8 {
        self.symbols[position]
    }

    /// Base-D rank with symbol 0 most significant.
    pub fn rank(&self) -> u64 {
        self.symbols
            .iter()
            .fold(0u64, |acc, &s| acc * self.alphabet as u64 + s as u64)
    }

    /// Inverse of [`Genome::rank`].
    pub fn unrank(rank: u64, length: u32, alphabet: u8) -> Result<Self> {
        let total = space_size(length, alphabet)?;
        if rank >= total {
            return Err(Error::RankOutOfRange { rank, total });
        }
        let mut symbols = vec![0u8; length as usize];
        let mut rest = rank;
        for slot in symbols.iter_mut().rev() {
            *slot = (rest % alphabet as u64) as u8;
            rest /= alphabet as u64;
        }
        Ok(Genome { symbols, alphabet })
    }

    /// Cyclic left rotation by `shift` positions.
    pub fn rotated(&self, shift: usize) -> Genome {
        let len = self.symbols.len();
        let shift = shift % len;
        let mut symbols = Vec::with_capacity(len);
        symbols.extend_from_slice(&self.symbols[shift..]);
        symbols.extend_from_slice(&self.symbols[..shift]);
        Genome {
            symbols,
            alphabet: self.alphabet,
        }
    }

    /// Number of positions at which the two genomes differ.
    pub fn hamming_distance(&self, other: &Genome) -> usize {
        debug_assert_eq!(self.len(), other.len());
        self.symbols
            .iter()
            .zip(other.symbols.iter())
            .filter(|(a, b)| a != b)
            .count()
    }

    /// Advance to the next rank in place; returns true when the rank wraps to 0.
    pub(crate) fn increment(&mut self) -> bool {
        for slot in self.symbols.iter_mut().rev() {
            if *slot + 1 < self.alphabet {
                *slot += 1;
                return false;
            }
            *slot = 0;
        }
        true
    }
}
