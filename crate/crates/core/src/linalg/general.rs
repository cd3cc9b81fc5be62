//! Eigenvalues of general real square matrices.

// 1-based index loops mirror the textbook reductions.
#![allow(clippy::needless_range_loop)]

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use super::poly::{balance, hessenberg_qr};
use crate::error::{Error, Result};

/// All eigenvalues of a real (possibly non-symmetric) matrix, in no
/// particular order. Imaginary parts of the entries must vanish.
pub fn real_eigenvalues(m: &ComplexMatrix) -> Result<Vec<Complex64>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            found: m.cols(),
        });
    }
    if m.as_slice().iter().any(|z| z.im != 0.0) {
        return Err(Error::InvalidArgument("matrix has complex entries".into()));
    }
    let n = m.rows();
    let mut a = vec![vec![0.0; n + 1]; n + 1];
    for i in 0..n {
        for j in 0..n {
            a[i + 1][j + 1] = m[(i, j)].re;
        }
    }
    balance(&mut a, n);
    reduce_to_hessenberg(&mut a, n);
    hessenberg_qr(&mut a, n)
}

/// Gaussian elimination with pivoting to upper Hessenberg form (1-based).
fn reduce_to_hessenberg(a: &mut [Vec<f64>], n: usize) {
    for m in 2..n {
        let mut x = 0.0f64;
        let mut i = m;
        for j in m..=n {
            if a[j][m - 1].abs() > x.abs() {
                x = a[j][m - 1];
                i = j;
            }
        }
        if i != m {
            for j in (m - 1)..=n {
                let t = a[i][j];
                a[i][j] = a[m][j];
                a[m][j] = t;
            }
            for row in a.iter_mut().take(n + 1).skip(1) {
                row.swap(i, m);
            }
        }
        if x != 0.0 {
            for i in (m + 1)..=n {
                let mut y = a[i][m - 1];
                if y != 0.0 {
                    y /= x;
                    a[i][m - 1] = y;
                    for j in m..=n {
                        a[i][j] -= y * a[m][j];
                    }
                    for j in 1..=n {
                        a[j][m] += y * a[j][i];
                    }
                }
            }
        }
    }
    // clear the stored multipliers
    for i in 3..=n {
        for j in 1..(i - 1) {
            a[i][j] = 0.0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(v: Vec<Complex64>) -> Vec<Complex64> {
        let mut v = v;
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn triangular_matrix() {
        let m =
            ComplexMatrix::from_real_rows(&[&[2.0, 5.0, 1.0], &[0.0, -1.0, 3.0], &[0.0, 0.0, 0.5]]);
        let e = sorted(real_eigenvalues(&m).unwrap());
        let want = [-1.0, 0.5, 2.0];
        for (z, w) in e.iter().zip(want) {
            assert!((z.re - w).abs() < 1e-12 && z.im.abs() < 1e-12);
        }
    }

    #[test]
    fn rotation_block() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, -1.0], &[1.0, 0.0]]);
        let e = real_eigenvalues(&m).unwrap();
        assert!(e
            .iter()
            .all(|z| z.re.abs() < 1e-14 && (z.im.abs() - 1.0).abs() < 1e-14));
    }

    #[test]
    fn similarity_preserves_spectrum() {
        // S D S⁻¹ with a dense S
        let s = ComplexMatrix::from_real_rows(&[
            &[1.0, 2.0, 0.0, 1.0],
            &[0.0, 1.0, 3.0, 0.0],
            &[1.0, 0.0, 1.0, 2.0],
            &[2.0, 1.0, 0.0, 1.0],
        ]);
        let d = ComplexMatrix::from_diag(&[-2.0, -0.5, 0.25, 3.0]);
        // inverse by Gauss-Jordan on a small dense copy
        let n = 4;
        let mut aug: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                (0..2 * n)
                    .map(|j| {
                        if j < n {
                            s[(i, j)].re
                        } else if j - n == i {
                            1.0
                        } else {
                            0.0
                        }
                    })
                    .collect()
            })
            .collect();
        for c in 0..n {
            let p = (c..n)
                .max_by(|&a, &b| aug[a][c].abs().total_cmp(&aug[b][c].abs()))
                .unwrap();
            aug.swap(c, p);
            let piv = aug[c][c];
            aug[c].iter_mut().for_each(|v| *v /= piv);
            for r in 0..n {
                if r != c {
                    let f = aug[r][c];
                    let row_c = aug[c].clone();
                    aug[r].iter_mut().zip(&row_c).for_each(|(v, w)| *v -= f * w);
                }
            }
        }
        let inv_rows: Vec<Vec<f64>> = aug.iter().map(|r| r[n..].to_vec()).collect();
        let inv_refs: Vec<&[f64]> = inv_rows.iter().map(Vec::as_slice).collect();
        let inv = ComplexMatrix::from_real_rows(&inv_refs);
        let m = &(&s * &d) * &inv;
        let e = sorted(real_eigenvalues(&m).unwrap());
        for (z, w) in e.iter().zip([-2.0, -0.5, 0.25, 3.0]) {
            assert!((z.re - w).abs() < 1e-10 && z.im.abs() < 1e-10, "{z} vs {w}");
        }
    }
}
