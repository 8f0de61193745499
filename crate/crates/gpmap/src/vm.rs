//! A deterministic minimal virtual machine whose programs can copy themselves.
//!
//! The machine owns an instruction pointer, a read head and a write head over
//! the circular genome, an optional child buffer, and a list of emitted
//! offspring. Every instruction is total: ill-conditioned uses are no-ops,
//! so each step terminates and advances the step counter by exactly one.

use crate::genome::Genome;
use crate::isa::{Instruction, IsaSpec};

/// Per-run execution limits: step budget T and offspring cap M.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExecLimits {
    pub step_limit: u64,
    pub offspring_cap: usize,
}

pub const DEFAULT_OFFSPRING_CAP: usize = 4;

impl ExecLimits {
    /// Default budget for a genome of the given length: T = 4 L^2 + 64, M = 4.
    ///
    /// The canonical copy loop needs about L^2 steps because each circular
    /// pass copies one symbol.
    pub fn for_length(length: usize) -> Self {
        ExecLimits {
            step_limit: (4 * length * length + 64) as u64,
            offspring_cap: DEFAULT_OFFSPRING_CAP,
        }
    }
}

/// Why a run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// Executed a `halt`.
    Halted,
    /// Exhausted the step budget T.
    StepLimit,
    /// Emitted the maximum number of offspring M.
    OffspringCap,
}

impl std::fmt::Display for StopReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            StopReason::Halted => "Halted",
            StopReason::StepLimit => "StepLimit",
            StopReason::OffspringCap => "OffspringCap",
        })
    }
}

/// Result of running one genome to completion.
#[derive(Debug, Clone)]
pub struct ExecutionOutcome {
    pub offspring: Vec<Genome>,
    pub steps_used: u64,
    pub reason: StopReason,
}

/// Mutable machine state, confined to a single execution.
#[derive(Debug, Clone)]
pub struct VmState {
    pub ip: usize,
    pub read_head: usize,
    pub write_head: usize,
    pub copied: usize,
    pub child: Option<Vec<u8>>,
    pub steps: u64,
    pub emitted: Vec<Genome>,
    pub halted: bool,
}

impl VmState {
    pub fn new() -> Self {
        VmState {
            ip: 0,
            read_head: 0,
            write_head: 0,
            copied: 0,
            child: None,
            steps: 0,
            emitted: Vec::new(),
            halted: false,
        }
    }
}

impl Default for VmState {
    fn default() -> Self {
        Self::new()
    }
}

/// One line of a step-by-step trace. `ip` and `instruction` describe the
/// instruction that was executed; the remaining fields are the state after it.
#[derive(Debug, Clone, Copy)]
pub struct StepTrace {
    pub step: u64,
    pub ip: usize,
    pub instruction: Instruction,
    pub copied: usize,
    pub read_head: usize,
    pub write_head: usize,
    pub emitted: usize,
}

/// Execute the instruction under the instruction pointer.
///
/// Advances `ip` by 1 modulo L unless the instruction skipped the next one
/// (`if-done` with an incomplete copy advances by 2) or set `ip` itself
/// (`jmp-a`). Increments `steps` by exactly 1.
pub fn step(state: &mut VmState, genome: &Genome, isa: &IsaSpec) {
    let len = genome.len();
    let instruction = isa.decode_total(genome.symbol(state.ip));
    state.steps += 1;
    match instruction {
        Instruction::NopA | Instruction::NopB => {
            state.ip = (state.ip + 1) % len;
        }
        Instruction::Alloc => {
            if state.child.is_none() {
                state.child = Some(vec![0u8; len]);
                state.copied = 0;
            }
            state.ip = (state.ip + 1) % len;
        }
        Instruction::Copy => {
            if let Some(child) = state.child.as_mut() {
                child[state.write_head] = genome.symbol(state.read_head);
                state.read_head = (state.read_head + 1) % len;
                state.write_head = (state.write_head + 1) % len;
                state.copied = (state.copied + 1).min(len);
            }
            state.ip = (state.ip + 1) % len;
        }
        Instruction::Divide => {
            if state.copied == len {
                if let Some(child) = state.child.take() {
                    state
                        .emitted
                        .push(Genome::from_symbols_unchecked(child, genome.alphabet()));
                    state.copied = 0;
                }
            }
            state.ip = (state.ip + 1) % len;
        }
        Instruction::IfDone => {
            if state.copied == len {
                state.ip = (state.ip + 1) % len;
            } else {
                state.ip = (state.ip + 2) % len;
            }
        }
        Instruction::JmpA => {
            let mut target = None;
            for offset in 1..=len {
                let position = (state.ip + offset) % len;
                if isa.decode_total(genome.symbol(position)) == Instruction::NopA {
                    target = Some((position + 1) % len);
                    break;
                }
            }
            state.ip = target.unwrap_or((state.ip + 1) % len);
        }
        Instruction::Halt => {
            state.halted = true;
            state.ip = (state.ip + 1) % len;
        }
    }
}

/// Run a genome from the initial state until halt, step limit, or the
/// offspring cap. Deterministic: identical inputs yield identical outcomes.
pub fn execute(genome: &Genome, isa: &IsaSpec, limits: &ExecLimits) -> ExecutionOutcome {
    execute_traced(genome, isa, limits, |_| {})
}

/// Like [`execute`], invoking `observer` once per executed step.
pub fn execute_traced(
    genome: &Genome,
    isa: &IsaSpec,
    limits: &ExecLimits,
    mut observer: impl FnMut(&StepTrace),
) -> ExecutionOutcome {
    debug_assert!(limits.step_limit >= 1);
    let mut state = VmState::new();
    let reason = loop {
        if state.steps >= limits.step_limit {
            break StopReason::StepLimit;
        }
        if state.halted {
            break StopReason::Halted;
        }
        if state.emitted.len() >= limits.offspring_cap {
            break StopReason::OffspringCap;
        }
        let ip = state.ip;
        let instruction = isa.decode_total(genome.symbol(ip));
        step(&mut state, genome, isa);
        observer(&StepTrace {
            step: state.steps,
            ip,
            instruction,
            copied: state.copied,
            read_head: state.read_head,
            write_head: state.write_head,
            emitted: state.emitted.len(),
        });
    };
    ExecutionOutcome {
        offspring: state.emitted,
        steps_used: state.steps,
        reason,
    }
}
