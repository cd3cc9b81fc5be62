//! Runs the verification suite, then again with a corrupted polynomial.

use jordan_bell::verify::{run_suite, Fault, VerifyOptions};

fn main() {
    let report = run_suite(&VerifyOptions::default());
    for c in &report.checks {
        println!(
            "{:<5} {:<24} {:.3e}",
            if c.passed { "ok" } else { "FAIL" },
            c.name,
            c.residual
        );
    }
    let broken = run_suite(&VerifyOptions {
        fault: Some(Fault::CharPolyDropBeta),
        ..VerifyOptions::default()
    });
    println!("with injected fault, failing: {:?}", broken.failing());
}
