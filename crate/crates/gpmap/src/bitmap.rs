//! Full-space viability bitmap: one bit per rank, LSB-first within each byte.
//!
//! Bit for rank r lives in byte `r >> 3` at position `r & 7`, matching the
//! on-disk `.bitmap.bin` layout exactly.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bitmap {
    bytes: Vec<u8>,
    bits: u64,
}

impl Bitmap {
    pub fn new(bits: u64) -> Self {
        let len = bits.div_ceil(8) as usize;
        Bitmap {
            bytes: vec![0u8; len],
            bits,
        }
    }

    pub fn from_sorted_ranks(bits: u64, ranks: &[u64]) -> Self {
        let mut bitmap = Bitmap::new(bits);
        for &r in ranks {
            bitmap.set(r);
        }
        bitmap
    }

    /// Wrap raw file bytes; the length must match and spare bits past the
    /// end must be zero.
    pub fn from_bytes(bytes: Vec<u8>, bits: u64) -> Result<Self> {
        let expected = bits.div_ceil(8) as usize;
        if bytes.len() != expected {
            return Err(Error::InvalidConfig(format!(
                "bitmap holds {} bytes but {} bits need {}",
                bytes.len(),
                bits,
                expected
            )));
        }
        let spare = (expected as u64 * 8).saturating_sub(bits);
        if spare > 0 {
            let last = bytes[expected - 1];
            let mask = !(u8::MAX >> spare);
            if last & mask != 0 {
                return Err(Error::InvalidConfig(
                    "bitmap has bits set past the end of the space".into(),
                ));
            }
        }
        Ok(Bitmap { bytes, bits })
    }

    #[inline]
    pub fn get(&self, rank: u64) -> bool {
        debug_assert!(rank < self.bits);
        self.bytes[(rank >> 3) as usize] & (1u8 << (rank & 7)) != 0
    }

    pub fn set(&mut self, rank: u64) {
        debug_assert!(rank < self.bits);
        self.bytes[(rank >> 3) as usize] |= 1u8 << (rank & 7);
    }

    pub fn len_bits(&self) -> u64 {
        self.bits
    }

    pub fn count_ones(&self) -> u64 {
        self.bytes.iter().map(|b| b.count_ones() as u64).sum()
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_get_round_trip() {
        let mut b = Bitmap::new(20);
        b.set(0);
        b.set(7);
        b.set(8);
        b.set(19);
        assert!(b.get(0) && b.get(7) && b.get(8) && b.get(19));
        assert!(!b.get(1) && !b.get(9) && !b.get(18));
        assert_eq!(b.count_ones(), 4);
    }

    #[test]
    fn lsb_first_layout() {
        let mut b = Bitmap::new(16);
        b.set(0);
        b.set(9);
        assert_eq!(b.as_bytes(), &[0b0000_0001, 0b0000_0010]);
    }

    #[test]
    fn from_sorted_ranks_matches_sets() {
        let b = Bitmap::from_sorted_ranks(100, &[3, 9, 12, 99]);
        assert_eq!(b.count_ones(), 4);
        assert!(b.get(99));
    }

    #[test]
    fn from_bytes_validates_length_and_spare_bits() {
        assert!(Bitmap::from_bytes(vec![0u8; 2], 20).is_err());
        assert!(Bitmap::from_bytes(vec![0, 0, 0b1111_0000], 20).is_err());
        let ok = Bitmap::from_bytes(vec![0xff, 0xff, 0b0000_1111], 20).unwrap();
        assert_eq!(ok.count_ones(), 20);
    }
}
