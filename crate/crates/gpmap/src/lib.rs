//! Exhaustive genotype-phenotype mapping for a minimal self-copying VM.
//!
//! This crate enumerates every fixed-length program over a small circular
//! instruction alphabet, classifies each one as non-viable, self-replicating
//! or colony-forming, and computes landscape observables over the resulting
//! viable set: information content in mers, rotation classes, neutral
//! clusters under one-mutant adjacency, mutational robustness, and
//! per-genotype information-density curves with theoretical baselines.
//!
//! Start with [`census::CensusConfig`] and [`census::run_census`] for an
//! in-memory census, or [`census::run_census_to_files`] for the sharded,
//! checkpointed, resumable variant with bit-exact output files. The
//! `examples/` directory has one runnable program per capability; the
//! `gpmap` binary wraps the same entry points as subcommands.

pub mod analysis;
pub mod bitmap;
pub mod census;
pub mod cli;
pub mod error;
pub mod export;
pub mod genome;
pub mod isa;
pub mod manifest;
pub mod oracle;
pub mod phenotype;
pub mod verify;
pub mod vm;

pub use census::{run_census, Census, CensusConfig};
pub use error::{Error, Result};
pub use genome::{space_size, Genome};
pub use isa::{Instruction, IsaSpec};
pub use phenotype::{classify, ChainBudgets, Phenotype, PhenotypeKind};
pub use vm::{execute, ExecLimits, ExecutionOutcome, StopReason};
