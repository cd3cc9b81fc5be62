//! Optimal equal overlap and violation as the number of parties grows.

use jordan_bell::optimize::violation_curve;

fn main() -> jordan_bell::Result<()> {
    let n_max = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(12);
    println!(" n  x         lambda_max");
    for p in violation_curve(2, n_max)? {
        println!("{:>2}  {:.6}  {:.6}", p.n, p.x, p.lambda_max);
    }
    Ok(())
}
