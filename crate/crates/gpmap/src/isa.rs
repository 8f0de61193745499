//! The instruction set executed by the replicator VM.
//!
//! An [`IsaSpec`] fixes the alphabet: `core_size` real instructions plus
//! `pad_nops` extra symbols that all decode to `nop-a`. Decoding is total
//! over `[0, D)`, so no mutation can ever produce an undecodable genome.

use crate::error::{Error, Result};

/// Name of the built-in instruction set.
pub const DEFAULT_ISA_ID: &str = "default-v1";

/// Largest supported alphabet; genomes are written with the letters a..z.
pub const MAX_ALPHABET: u8 = 26;

/// The eight core instructions of `default-v1`, in symbol order a..h.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Instruction {
    /// No effect; also the target marker scanned for by `jmp-a`.
    NopA,
    /// No effect.
    NopB,
    /// Create the child buffer if none exists and reset copy progress.
    Alloc,
    /// Copy one symbol from the read head to the write head of the child.
    Copy,
    /// Emit the child as offspring once it has been fully copied.
    Divide,
    /// Skip the next instruction unless the copy is complete.
    IfDone,
    /// Jump past the nearest `nop-a` found scanning forward circularly.
    JmpA,
    /// Stop execution.
    Halt,
}

const CORE_TABLE: [Instruction; 8] = [
    Instruction::NopA,
    Instruction::NopB,
    Instruction::Alloc,
    Instruction::Copy,
    Instruction::Divide,
    Instruction::IfDone,
    Instruction::JmpA,
    Instruction::Halt,
];

impl Instruction {
    /// Canonical letter of the instruction (`a` for `nop-a`, ... `h` for `halt`).
    pub fn letter(self) -> char {
        (b'a' + self as u8) as char
    }

    pub fn name(self) -> &'static str {
        match self {
            Instruction::NopA => "nop-a",
            Instruction::NopB => "nop-b",
            Instruction::Alloc => "alloc",
            Instruction::Copy => "copy",
            Instruction::Divide => "divide",
            Instruction::IfDone => "if-done",
            Instruction::JmpA => "jmp-a",
            Instruction::Halt => "halt",
        }
    }
}

/// A fully specified instruction set: its identifier and alphabet layout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsaSpec {
    id: String,
    core_size: u8,
    pad_nops: u8,
}

impl IsaSpec {
    /// The built-in eight-instruction set with no padding (D = 8).
    pub fn default_v1() -> Self {
        IsaSpec {
            id: DEFAULT_ISA_ID.to_string(),
            core_size: CORE_TABLE.len() as u8,
            pad_nops: 0,
        }
    }

    /// Look an instruction set up by name.
    pub fn by_name(name: &str) -> Result<Self> {
        if name == DEFAULT_ISA_ID {
            Ok(Self::default_v1())
        } else {
            Err(Error::UnknownIsa(name.to_string()))
        }
    }

    /// Extend the alphabet with `pad_nops` extra symbols that decode to `nop-a`.
    pub fn with_pad_nops(mut self, pad_nops: u8) -> Result<Self> {
        let alphabet = self.core_size as u32 + pad_nops as u32;
        if alphabet > MAX_ALPHABET as u32 {
            return Err(Error::AlphabetTooLarge(alphabet));
        }
        self.pad_nops = pad_nops;
        Ok(self)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn core_size(&self) -> u8 {
        self.core_size
    }

    pub fn pad_nops(&self) -> u8 {
        self.pad_nops
    }

    /// Alphabet size D = core_size + pad_nops.
    pub fn alphabet_size(&self) -> u8 {
        self.core_size + self.pad_nops
    }

    /// Decode a symbol, rejecting values outside the alphabet.
    pub fn decode(&self, symbol: u8) -> Result<Instruction> {
        if symbol >= self.alphabet_size() {
            return Err(Error::SymbolOutOfRange {
                symbol: symbol as u32,
                alphabet: self.alphabet_size(),
            });
        }
        Ok(self.decode_total(symbol))
    }

    /// Decode a symbol already known to be inside the alphabet.
    #[inline]
    pub(crate) fn decode_total(&self, symbol: u8) -> Instruction {
        debug_assert!(symbol < self.alphabet_size());
        if symbol >= self.core_size {
            Instruction::NopA
        } else {
            CORE_TABLE[symbol as usize]
        }
    }
}
