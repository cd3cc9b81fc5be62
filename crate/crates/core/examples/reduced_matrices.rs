//! The (n+2)-dimensional reduction reproduces the nonzero spectrum of the
//! full 2^n operator.

use jordan_bell::bell::{bell_operator, char_poly_n3, reduced_matrix, JordanParams};
use jordan_bell::linalg::real_eigenvalues;

fn main() -> jordan_bell::Result<()> {
    for xs in [
        vec![0.3, 0.8],
        vec![0.2, 0.5, 0.9],
        vec![0.6, 0.7, 0.8, 0.9, 0.95],
    ] {
        let p = JordanParams::new(xs)?;
        let mut full: Vec<f64> = bell_operator(&p)?
            .eigen()?
            .values
            .into_iter()
            .filter(|v| v.abs() > 1e-9)
            .collect();
        full.sort_by(f64::total_cmp);
        let mut red: Vec<f64> = real_eigenvalues(&reduced_matrix(&p))?
            .iter()
            .map(|z| z.re)
            .collect();
        red.sort_by(f64::total_cmp);
        println!("x = {:?}", p.xs());
        println!("  full    {full:.9?}");
        println!("  reduced {red:.9?}");
        if p.n() == 3 {
            let f = char_poly_n3(&p)?;
            let worst = red.iter().map(|&l| f.eval(l).abs()).fold(0.0, f64::max);
            println!("  characteristic polynomial {f}");
            println!("  max |F(lambda)| over the spectrum {worst:.2e}");
        }
    }
    Ok(())
}
