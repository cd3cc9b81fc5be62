//! Local deterministic strategies never violate the inequality, and every
//! left-hand-side outcome sequence is counted on the right.

use jordan_bell::lhv::{classical_value, proof_check};

fn main() -> jordan_bell::Result<()> {
    for n in 2..=7 {
        let b = classical_value(n)?;
        println!(
            "n = {n}: max over {:>5} strategies = {}",
            b.strategies, b.value
        );
    }
    for n in [2, 3, 8, 12] {
        let p = proof_check(n)?;
        println!(
            "n = {n:>2}: {} sequences covered, multiplicities {:?}, all +1 covered by term {:?}",
            p.sequences, p.multiplicity, p.all_up_covered_by
        );
    }
    Ok(())
}
