//! Phenotype classification: does a genome found a growing population?
//!
//! A genome is a `SelfReplicator` when its first emitted offspring is an
//! exact copy of itself, and `ColonyForming` when a bounded walk of the
//! reproduction graph reaches any reproductive cycle. Parents survive
//! division in this machine, so reaching a cycle implies unbounded growth.
//! Self-replication is the strongest label and implies colony formation;
//! "viable" throughout the analysis means anything but `NonViable`.

use std::collections::HashSet;

use crate::genome::Genome;
use crate::isa::IsaSpec;
use crate::vm::{execute, ExecLimits};

/// Budgets for the reproduction-graph walk: G caps the chain length,
/// B caps the number of distinct genotypes explored.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainBudgets {
    pub max_chain: usize,
    pub max_genotypes: usize,
}

impl Default for ChainBudgets {
    fn default() -> Self {
        ChainBudgets {
            max_chain: 16,
            max_genotypes: 64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhenotypeKind {
    NonViable,
    SelfReplicator,
    ColonyForming,
}

impl std::fmt::Display for PhenotypeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PhenotypeKind::NonViable => "NonViable",
            PhenotypeKind::SelfReplicator => "SelfReplicator",
            PhenotypeKind::ColonyForming => "ColonyForming",
        })
    }
}

/// Classification with its evidence: the reproduction path that closes a
/// cycle (one genome for a self-replicator, empty for non-viable), plus a
/// flag recording whether the walk was cut short by its budgets.
#[derive(Debug, Clone)]
pub struct Phenotype {
    pub kind: PhenotypeKind,
    pub chain: Vec<Genome>,
    pub budget_exhausted: bool,
}

impl Phenotype {
    pub fn is_viable(&self) -> bool {
        self.kind != PhenotypeKind::NonViable
    }
}

/// Outcome of the reproduction-graph walk.
#[derive(Debug, Clone)]
pub struct CycleSearch {
    /// Path from the root to the genotype whose offspring closed the cycle.
    pub cycle_chain: Option<Vec<Genome>>,
    pub budget_exhausted: bool,
}

/// Depth-first walk of the reproduction graph looking for a cycle: some
/// reachable genotype emitting an offspring already on the current path or
/// equal to itself. `root_offspring` is the already-computed offspring of
/// `root`; `expand` produces the offspring of any other genotype.
///
/// Budget exhaustion without a cycle is reported, not hidden: callers treat
/// it as conservative non-viability.
pub fn find_reproductive_cycle(
    root: &Genome,
    root_offspring: Vec<Genome>,
    mut expand: impl FnMut(&Genome) -> Vec<Genome>,
    budgets: &ChainBudgets,
) -> CycleSearch {
    struct Frame {
        children: Vec<Genome>,
        next: usize,
    }

    let mut exhausted = false;
    let mut explored: HashSet<Vec<u8>> = HashSet::new();
    explored.insert(root.symbols().to_vec());
    let mut on_path: HashSet<Vec<u8>> = HashSet::new();
    on_path.insert(root.symbols().to_vec());
    let mut path = vec![root.clone()];
    let mut frames = vec![Frame {
        children: root_offspring,
        next: 0,
    }];

    while let Some(frame) = frames.last_mut() {
        if frame.next >= frame.children.len() {
            frames.pop();
            let done = path.pop().expect("path tracks frames");
            on_path.remove(done.symbols());
            continue;
        }
        let child = frame.children[frame.next].clone();
        frame.next += 1;

        if on_path.contains(child.symbols()) {
            return CycleSearch {
                cycle_chain: Some(path),
                budget_exhausted: exhausted,
            };
        }
        if explored.contains(child.symbols()) {
            continue;
        }
        if path.len() >= budgets.max_chain || explored.len() >= budgets.max_genotypes {
            exhausted = true;
            continue;
        }
        explored.insert(child.symbols().to_vec());
        let grandchildren = expand(&child);
        on_path.insert(child.symbols().to_vec());
        path.push(child);
        frames.push(Frame {
            children: grandchildren,
            next: 0,
        });
    }

    CycleSearch {
        cycle_chain: None,
        budget_exhausted: exhausted,
    }
}

/// Classify one genome. Pure function of (genome, isa, limits, budgets).
pub fn classify(
    genome: &Genome,
    isa: &IsaSpec,
    limits: &ExecLimits,
    budgets: &ChainBudgets,
) -> Phenotype {
    let outcome = execute(genome, isa, limits);
    if outcome.offspring.is_empty() {
        return Phenotype {
            kind: PhenotypeKind::NonViable,
            chain: Vec::new(),
            budget_exhausted: false,
        };
    }
    if outcome.offspring[0] == *genome {
        return Phenotype {
            kind: PhenotypeKind::SelfReplicator,
            chain: vec![genome.clone()],
            budget_exhausted: false,
        };
    }
    let search = find_reproductive_cycle(
        genome,
        outcome.offspring,
        |g| execute(g, isa, limits).offspring,
        budgets,
    );
    match search.cycle_chain {
        Some(chain) => Phenotype {
            kind: PhenotypeKind::ColonyForming,
            chain,
            budget_exhausted: search.budget_exhausted,
        },
        None => Phenotype {
            kind: PhenotypeKind::NonViable,
            chain: Vec::new(),
            budget_exhausted: search.budget_exhausted,
        },
    }
}
