//! The named optimal states, their violations and marginals.

use jordan_bell::states::{
    b3_prime_spectrum, correlation_table_psi2, ghz, ghz_check, psi2, psi3, psi3_prime,
    violation_of, x_star_n3, MeasurementSet,
};

fn main() -> jordan_bell::Result<()> {
    let s2 = psi2();
    println!(
        "psi2 violation {:.10}",
        violation_of(&s2, &MeasurementSet::z_x(2))?
    );
    for c in correlation_table_psi2() {
        println!(
            "  {} Alice {:>3} -> Bob {:>3}  p = {:.6}",
            c.bases, c.alice, c.bob, c.probability
        );
    }

    println!(
        "psi3' violation {:.10}",
        violation_of(&psi3_prime(), &MeasurementSet::z_x(3))?
    );
    let spec: Vec<String> = b3_prime_spectrum()?
        .iter()
        .map(|v| format!("{v:.6}"))
        .collect();
    println!("B3' spectrum [{}]", spec.join(", "));

    let x = x_star_n3();
    let s3 = psi3();
    println!(
        "psi3 violation {:.10} at x = {x:.6}",
        violation_of(&s3, &MeasurementSet::tilted(&[x; 3])?)?
    );
    for (i, re, _) in s3.to_triples() {
        println!("  |{i:03b}>  {re:+.6}");
    }
    let r = ghz_check(&s3, 1e-9);
    println!("psi3 marginal distances from I/2 {:.6?}", r.distances);
    println!(
        "GHZ marginal distances from I/2 {:.6?}",
        ghz_check(&ghz(3), 1e-9).distances
    );
    Ok(())
}
