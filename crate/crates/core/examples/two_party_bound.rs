//! Two parties: the closed form, the 4×4 reduced matrix and the full
//! operator all give the same bound, attained at x_a = x_b = 1/√2.

use std::f64::consts::FRAC_1_SQRT_2;

use jordan_bell::bell::{
    bell_operator, char_poly_n2, lambda_max_n2, reduced_matrix_n2, JordanParams,
};
use jordan_bell::linalg::real_eigenvalues;
use jordan_bell::optimize::maximize_equal_angle;

fn main() -> jordan_bell::Result<()> {
    let x = FRAC_1_SQRT_2;
    let op = bell_operator(&JordanParams::equal(2, x)?)?;
    println!("operator      lambda_max = {:.10}", op.lambda_max()?);
    println!("closed form   lambda_max = {:.10}", lambda_max_n2(x, x));
    println!(
        "target        (sqrt2-1)/2 = {:.10}",
        (2f64.sqrt() - 1.0) / 2.0
    );

    let m = reduced_matrix_n2(x, x);
    let mut eig: Vec<f64> = real_eigenvalues(&m)?.iter().map(|z| z.re).collect();
    eig.sort_by(f64::total_cmp);
    println!("reduced spectrum {eig:.6?}");
    println!("characteristic polynomial {}", char_poly_n2(x, x));

    let best = maximize_equal_angle(2)?;
    println!(
        "optimum x = {:.8}, lambda_max = {:.10}",
        best.xs.xs()[0],
        best.lambda_max
    );
    Ok(())
}
