//! Real polynomials and their roots.
//!
//! Roots are the eigenvalues of the balanced companion matrix, computed with
//! the shifted Hessenberg QR iteration, followed by a guarded Newton polish.

// 1-based index loops mirror the textbook reductions.
#![allow(clippy::needless_range_loop)]

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficients below this magnitude at the top of the list are trimmed.
pub const TRIM_TOL: f64 = 1e-14;
/// Default bound on `|imag|` for a root to count as real.
pub const REAL_ROOT_TOL: f64 = 1e-9;

/// Polynomial with real coefficients in ascending degree order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealPolynomial {
    coeffs: Vec<f64>,
}

impl RealPolynomial {
    /// Builds a polynomial from ascending coefficients, trimming negligible
    /// leading terms.
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.abs() < TRIM_TOL) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Self { coeffs }
    }

    /// Builds `Π (x − r)` for the given real roots.
    pub fn from_roots(roots: &[f64]) -> Self {
        let mut c = vec![1.0];
        for &r in roots {
            let mut next = vec![0.0; c.len() + 1];
            for (i, &ci) in c.iter().enumerate() {
                next[i + 1] += ci;
                next[i] -= r * ci;
            }
            c = next;
        }
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::new(vec![0.0]);
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * i as f64)
                .collect(),
        )
    }

    pub fn coeff_l1(&self) -> f64 {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }

    pub fn roots(&self) -> Result<Vec<Complex64>> {
        poly_roots(self)
    }

    /// Largest root whose imaginary part is at most [`REAL_ROOT_TOL`].
    pub fn max_real_root(&self) -> Result<Option<f64>> {
        self.max_real_root_with(REAL_ROOT_TOL)
    }

    pub fn max_real_root_with(&self, imag_tol: f64) -> Result<Option<f64>> {
        Ok(self
            .roots()?
            .into_iter()
            .filter(|z| z.im.abs() <= imag_tol)
            .map(|z| z.re)
            .max_by(f64::total_cmp))
    }
}

impl fmt::Display for RealPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0.0 && self.coeffs.len() > 1 {
                continue;
            }
            let sign = if c < 0.0 { "-" } else { "+" };
            if first {
                if c < 0.0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            // unit coefficients are implied except on the constant
            let mag = if c.abs() == 1.0 && k > 0 {
                String::new()
            } else {
                c.abs().to_string()
            };
            match k {
                0 => write!(f, "{mag}")?,
                1 => write!(f, "{mag}λ")?,
                _ => write!(f, "{mag}λ^{k}")?,
            }
        }
        Ok(())
    }
}

/// All complex roots of `p` via its companion matrix.
pub fn poly_roots(p: &RealPolynomial) -> Result<Vec<Complex64>> {
    let deg = p.degree();
    if deg == 0 {
        return Err(Error::DegreeTooLow(0));
    }
    let lead = p.coeffs[deg];
    // companion matrix, 1-based storage for the QR kernel
    let mut a = vec![vec![0.0; deg + 1]; deg + 1];
    for j in 1..=deg {
        a[1][j] = -p.coeffs[deg - j] / lead;
    }
    for i in 2..=deg {
        a[i][i - 1] = 1.0;
    }
    balance(&mut a, deg);
    let raw = hessenberg_qr(&mut a, deg)?;
    Ok(raw.into_iter().map(|z| polish(p, z)).collect())
}

/// Newton polish that is only kept when it reduces the residual.
fn polish(p: &RealPolynomial, z0: Complex64) -> Complex64 {
    let dp = p.derivative();
    let mut z = z0;
    let mut best = p.eval_complex(z).norm();
    for _ in 0..8 {
        let d = dp.eval_complex(z);
        if d.norm() == 0.0 {
            break;
        }
        let cand = z - p.eval_complex(z) / d;
        let r = p.eval_complex(cand).norm();
        if r.is_nan() || r >= best {
            break;
        }
        z = cand;
        best = r;
    }
    // a root that started on the real axis stays there
    if z0.im == 0.0 {
        z.im = 0.0;
    }
    z
}

pub(super) fn balance(a: &mut [Vec<f64>], n: usize) {
    const RADIX: f64 = 2.0;
    let sqrdx = RADIX * RADIX;
    let mut done = false;
    while !done {
        done = true;
        for i in 1..=n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 1..=n {
                if j != i {
                    c += a[j][i].abs();
                    r += a[i][j].abs();
                }
            }
            if c != 0.0 && r != 0.0 {
                let mut g = r / RADIX;
                let mut f = 1.0;
                let s = c + r;
                while c < g {
                    f *= RADIX;
                    c *= sqrdx;
                }
                g = r * RADIX;
                while c > g {
                    f /= RADIX;
                    c /= sqrdx;
                }
                if (c + r) / f < 0.95 * s {
                    done = false;
                    let g = 1.0 / f;
                    for j in 1..=n {
                        a[i][j] *= g;
                    }
                    for row in a.iter_mut().take(n + 1).skip(1) {
                        row[i] *= f;
                    }
                }
            }
        }
    }
}

fn sign(a: f64, b: f64) -> f64 {
    if b >= 0.0 {
        a.abs()
    } else {
        -a.abs()
    }
}

/// Eigenvalues of an upper Hessenberg matrix (1-based storage) by the
/// Francis double-shift QR iteration. Destroys `a`.
#[allow(clippy::many_single_char_names)]
pub(super) fn hessenberg_qr(a: &mut [Vec<f64>], n: usize) -> Result<Vec<Complex64>> {
    const MAX_ITS: usize = 60;
    let mut wr = vec![0.0; n + 1];
    let mut wi = vec![0.0; n + 1];
    let mut anorm = 0.0;
    for i in 1..=n {
        for j in (i.max(2) - 1)..=n {
            anorm += a[i][j].abs();
        }
    }
    let mut nn = n as isize;
    let mut t = 0.0;
    let (mut p, mut q, mut r): (f64, f64, f64);
    let (mut x, mut y, mut z, mut w);
    while nn >= 1 {
        let mut its = 0;
        loop {
            let nu = nn as usize;
            let mut l = nu;
            while l >= 2 {
                let mut s = a[l - 1][l - 1].abs() + a[l][l].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a[l][l - 1].abs() + s == s {
                    a[l][l - 1] = 0.0;
                    break;
                }
                l -= 1;
            }
            x = a[nu][nu];
            if l == nu {
                wr[nu] = x + t;
                wi[nu] = 0.0;
                nn -= 1;
            } else {
                y = a[nu - 1][nu - 1];
                w = a[nu][nu - 1] * a[nu - 1][nu];
                if l == nu - 1 {
                    p = 0.5 * (y - x);
                    q = p * p + w;
                    z = q.abs().sqrt();
                    x += t;
                    if q >= 0.0 {
                        z = p + sign(z, p);
                        wr[nu - 1] = x + z;
                        wr[nu] = x + z;
                        if z != 0.0 {
                            wr[nu] = x - w / z;
                        }
                        wi[nu - 1] = 0.0;
                        wi[nu] = 0.0;
                    } else {
                        wr[nu - 1] = x + p;
                        wr[nu] = x + p;
                        wi[nu - 1] = -z;
                        wi[nu] = z;
                    }
                    nn -= 2;
                } else {
                    if its == MAX_ITS {
                        return Err(Error::NoConvergence(MAX_ITS));
                    }
                    if its == 10 || its == 20 || its == 40 {
                        // exceptional shift
                        t += x;
                        for i in 1..=nu {
                            a[i][i] -= x;
                        }
                        let s = a[nu][nu - 1].abs() + a[nu - 1][nu - 2].abs();
                        x = 0.75 * s;
                        y = x;
                        w = -0.4375 * s * s;
                    }
                    its += 1;
                    let mut m = nu - 2;
                    loop {
                        z = a[m][m];
                        r = x - z;
                        let s = y - z;
                        p = (r * s - w) / a[m + 1][m] + a[m][m + 1];
                        q = a[m + 1][m + 1] - z - r - s;
                        r = a[m + 2][m + 1];
                        let s = p.abs() + q.abs() + r.abs();
                        p /= s;
                        q /= s;
                        r /= s;
                        if m == l {
                            break;
                        }
                        let u = a[m][m - 1].abs() * (q.abs() + r.abs());
                        let v = p.abs() * (a[m - 1][m - 1].abs() + z.abs() + a[m + 1][m + 1].abs());
                        if u + v == v {
                            break;
                        }
                        m -= 1;
                    }
                    for i in (m + 2)..=nu {
                        a[i][i - 2] = 0.0;
                        if i != m + 2 {
                            a[i][i - 3] = 0.0;
                        }
                    }
                    let mut k = m;
                    while k < nu {
                        if k != m {
                            p = a[k][k - 1];
                            q = a[k + 1][k - 1];
                            r = 0.0;
                            if k != nu - 1 {
                                r = a[k + 2][k - 1];
                            }
                            x = p.abs() + q.abs() + r.abs();
                            if x != 0.0 {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        let s = sign((p * p + q * q + r * r).sqrt(), p);
                        if s != 0.0 {
                            if k == m {
                                if l != m {
                                    a[k][k - 1] = -a[k][k - 1];
                                }
                            } else {
                                a[k][k - 1] = -s * x;
                            }
                            p += s;
                            x = p / s;
                            y = q / s;
                            z = r / s;
                            q /= p;
                            r /= p;
                            for j in k..=nu {
                                p = a[k][j] + q * a[k + 1][j];
                                if k != nu - 1 {
                                    p += r * a[k + 2][j];
                                    a[k + 2][j] -= p * z;
                                }
                                a[k + 1][j] -= p * y;
                                a[k][j] -= p * x;
                            }
                            let mmin = if nu < k + 3 { nu } else { k + 3 };
                            for i in l..=mmin {
                                p = x * a[i][k] + y * a[i][k + 1];
                                if k != nu - 1 {
                                    p += z * a[i][k + 2];
                                    a[i][k + 2] -= p * r;
                                }
                                a[i][k + 1] -= p * q;
                                a[i][k] -= p;
                            }
                        }
                        k += 1;
                    }
                }
            }
            if nn < 1 || l + 1 >= nn as usize {
                break;
            }
        }
    }
    Ok((1..=n).map(|i| Complex64::new(wr[i], wi[i])).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted_real(p: &RealPolynomial) -> Vec<f64> {
        let mut r: Vec<f64> = p.roots().unwrap().iter().map(|z| z.re).collect();
        r.sort_by(f64::total_cmp);
        r
    }

    #[test]
    fn degree_zero_is_rejected() {
        assert_eq!(
            RealPolynomial::new(vec![3.0]).roots(),
            Err(Error::DegreeTooLow(0))
        );
        // trailing zero coefficients are trimmed first
        assert_eq!(RealPolynomial::new(vec![3.0, 0.0, 1e-16]).degree(), 0);
    }

    #[test]
    fn unit_square_roots() {
        let r = sorted_real(&RealPolynomial::new(vec![-1.0, 0.0, 1.0]));
        assert!((r[0] + 1.0).abs() < 1e-14 && (r[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn complex_pair() {
        let roots = RealPolynomial::new(vec![1.0, 0.0, 1.0]).roots().unwrap();
        assert!(roots
            .iter()
            .all(|z| z.re.abs() < 1e-14 && (z.im.abs() - 1.0).abs() < 1e-14));
        assert_eq!(
            RealPolynomial::new(vec![1.0, 0.0, 1.0])
                .max_real_root()
                .unwrap(),
            None
        );
    }

    #[test]
    fn cubic_with_one_positive_root() {
        let p = RealPolynomial::new(vec![-2.0, 5.0, 16.0, 8.0]);
        let r = p.max_real_root().unwrap().unwrap();
        assert!((r - 0.223).abs() < 5e-4);
        for z in p.roots().unwrap() {
            assert!(p.eval_complex(z).norm() <= 1e-8 * p.coeff_l1());
        }
    }

    #[test]
    fn planted_roots_recovered() {
        let planted = [-3.5, -1.25, 0.1, 0.7, 2.0, 4.5];
        let p = RealPolynomial::from_roots(&planted);
        let got = sorted_real(&p);
        for (a, b) in got.iter().zip(&planted) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn linear_polynomial() {
        let r = RealPolynomial::new(vec![3.0, -2.0]).roots().unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0].re - 1.5).abs() < 1e-15);
    }

    #[test]
    fn display_reads_naturally() {
        let p = RealPolynomial::new(vec![-2.0, 5.0, 16.0, 8.0]);
        assert_eq!(p.to_string(), "8λ^3 + 16λ^2 + 5λ - 2");
    }
}
