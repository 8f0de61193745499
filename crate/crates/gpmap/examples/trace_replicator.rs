//! Step through the canonical copy loop `cdfeaa` and watch it reproduce.
//!
//! The program allocates a child buffer, copies one symbol per circular
//! pass, and divides once the copy is complete. Its first offspring is an
//! exact copy of itself, so it classifies as a self-replicator.
//!
//! ```bash
//! cargo run --example trace_replicator
//! ```

use gpmap::phenotype::classify;
use gpmap::vm::execute_traced;
use gpmap::{ChainBudgets, ExecLimits, Genome, IsaSpec};

fn main() {
    let isa = IsaSpec::default_v1();
    let genome = Genome::from_letters("cdfeaa", isa.alphabet_size()).expect("valid letters");
    let limits = ExecLimits::for_length(genome.len());

    println!("genome  {}  (rank {})", genome.letters(), genome.rank());
    println!("budget  T = {} steps, M = {} offspring", limits.step_limit, limits.offspring_cap);
    println!();
    println!("step ip op copied read write emitted");
    let outcome = execute_traced(&genome, &isa, &limits, |t| {
        println!(
            "{:>4} {:>2}  {}  {:>6} {:>4} {:>5} {:>7}",
            t.step,
            t.ip,
            t.instruction.letter(),
            t.copied,
            t.read_head,
            t.write_head,
            t.emitted
        );
    });

    println!();
    println!("stopped: {} after {} steps", outcome.reason, outcome.steps_used);
    for (i, child) in outcome.offspring.iter().enumerate() {
        let exact = if child == &genome { "exact copy" } else { "mutant" };
        println!("offspring {}: {} ({exact})", i + 1, child.letters());
    }

    let phenotype = classify(&genome, &isa, &limits, &ChainBudgets::default());
    println!("phenotype: {}", phenotype.kind);
}
