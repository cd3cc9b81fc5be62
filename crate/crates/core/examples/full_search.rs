//! Multistart Nelder–Mead over every overlap, compared with the equal-angle
//! optimum.
//!
//!     cargo run --release --example full_search -- 5 32 7

use std::time::Instant;

use jordan_bell::optimize::{maximize_equal_angle, maximize_full};

fn main() -> jordan_bell::Result<()> {
    let args: Vec<usize> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let n = args.first().copied().unwrap_or(4);
    let restarts = args.get(1).copied().unwrap_or(32);
    let seed = args.get(2).copied().unwrap_or(7) as u64;

    let start = Instant::now();
    let full = maximize_full(n, restarts, seed)?;
    let elapsed = start.elapsed();
    let cubic = maximize_equal_angle(n)?;

    println!("n = {n}, {restarts} restarts, seed {seed}");
    let xs: Vec<String> = full.xs.xs().iter().map(|x| format!("{x:.6}")).collect();
    println!("full search   x = [{}]", xs.join(", "));
    println!(
        "              lambda_max = {:.9}  ({:.2?})",
        full.lambda_max, elapsed
    );
    println!("equal angle   x = {:.6}", cubic.xs.xs()[0]);
    println!("              lambda_max = {:.9}", cubic.lambda_max);
    println!(
        "difference    {:.2e}",
        (full.lambda_max - cubic.lambda_max).abs()
    );
    println!("residual      {:.2e}", full.residual()?);
    Ok(())
}
