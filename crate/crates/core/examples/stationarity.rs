//! First-order conditions at the symmetric three-party optimum and away
//! from it.

use jordan_bell::bell::{bell_operator, JordanParams};
use jordan_bell::optimize::{equal_angle_optimum, f0_equals_f1_root, stationarity_report};

fn main() -> jordan_bell::Result<()> {
    let (x, lam) = equal_angle_optimum(3)?;
    let r = stationarity_report(&JordanParams::equal(3, x)?, lam)?;
    println!("optimum x = {x:.9}, lambda = {lam:.12}");
    let sci = |v: &[f64]| {
        v.iter()
            .map(|g| format!("{g:.2e}"))
            .collect::<Vec<_>>()
            .join(", ")
    };
    println!("  gradient [{}]", sci(&r.gradient));
    println!(
        "  pairwise residuals [{}]",
        sci(&r.linear_residuals.unwrap_or_default())
    );

    let p = JordanParams::new(vec![0.7, 0.8, 0.786])?;
    let lam = bell_operator(&p)?.lambda_max()?;
    let r = stationarity_report(&p, lam)?;
    println!("off optimum {:?}: gradient {:.4?}", p.xs(), r.gradient);

    for (xa, xb) in [(0.3, 0.55), (0.2, 0.9), (0.6, 0.4)] {
        let c = f0_equals_f1_root(xa, xb)?;
        println!("f0 = f1 at x_c = {:.6}: lambda = {:.12}", c.xc, c.lambda);
    }
    Ok(())
}
