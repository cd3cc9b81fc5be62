//! Hermitian eigensolvers.
//!
//! [`hermitian_eigen`] is a cyclic complex Jacobi method and returns the full
//! decomposition. [`largest_eigenpair`] runs Lanczos with full
//! reorthogonalization and is meant for the low-rank Bell operators, whose
//! Krylov spaces close after a handful of steps.

use num_complex::Complex64;

use super::matrix::{inner, vec_norm, ComplexMatrix, HERMITIAN_TOL};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with matching orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn max(&self) -> (f64, Vec<Complex64>) {
        let k = self.values.len() - 1;
        (self.values[k], self.vectors.column(k))
    }

    /// `‖h − VΛV†‖_max`.
    pub fn reconstruction_error(&self, h: &ComplexMatrix) -> f64 {
        let lambda = ComplexMatrix::from_diag(&self.values);
        let rebuilt = &(&self.vectors * &lambda) * &self.vectors.adjoint();
        rebuilt.max_diff(h)
    }
}

fn check_hermitian(h: &ComplexMatrix) -> Result<()> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch {
            expected: h.rows(),
            found: h.cols(),
        });
    }
    let asym = h.hermitian_asymmetry().unwrap_or(f64::INFINITY);
    let allowed = HERMITIAN_TOL * h.max_abs();
    if asym > allowed {
        return Err(Error::NotHermitian {
            asymmetry: asym,
            allowed,
        });
    }
    Ok(())
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Full eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
pub fn hermitian_eigen(h: &ComplexMatrix) -> Result<HermitianEigen> {
    check_hermitian(h)?;
    let n = h.rows();
    let mut a = h.clone();
    // symmetrize away the allowed asymmetry
    for i in 0..n {
        a[(i, i)] = Complex64::new(a[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let avg = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            a[(i, j)] = avg;
            a[(j, i)] = avg.conj();
        }
    }
    let mut v = ComplexMatrix::identity(n);
    let scale = h.max_abs().max(f64::MIN_POSITIVE);

    let mut sweeps = 0;
    while off_diagonal_norm(&a) > 1e-15 * scale * (n as f64) {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence(MAX_SWEEPS));
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for r in 0..n {
            vectors[(r, dst)] = v[(r, src)];
        }
    }
    Ok(HermitianEigen { values, vectors })
}

/// Annihilates `a[p][q]` with the unitary `U = diag(1, e^{-iφ}) · R(θ)` on the
/// `(p, q)` plane, where `φ = arg a[p][q]`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let phase = apq / mag;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;

    let theta = (aqq - app) / (2.0 * mag);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // U columns: u_p = (c, -s e^{-iφ}), u_q = (s, c e^{-iφ}) on rows (p, q)
    let e = phase.conj();
    let upp = Complex64::new(c, 0.0);
    let uqp = -e * s;
    let upq = Complex64::new(s, 0.0);
    let uqq = e * c;

    let n = a.rows();
    // A <- A U
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * upp + akq * uqp;
        a[(k, q)] = akp * upq + akq * uqq;
    }
    // A <- U† A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = upp.conj() * apk + uqp.conj() * aqk;
        a[(q, k)] = upq.conj() * apk + uqq.conj() * aqk;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
    // V <- V U
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * upp + vkq * uqp;
        v[(k, q)] = vkp * upq + vkq * uqq;
    }
}

/// Deterministic dense start vector with no special alignment to any basis.
fn start_vector(n: usize) -> Vec<Complex64> {
    let mut state: u64 = 0x9E37_79B9_7F4A_7C15;
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        state = state
            .wrapping_mul(6_364_136_223_846_793_005)
            .wrapping_add(1_442_695_040_888_963_407);
        let u = (state >> 11) as f64 / (1u64 << 53) as f64;
        out.push(Complex64::new(0.5 + u, 0.0));
    }
    let norm = vec_norm(&out);
    out.iter().map(|z| z / norm).collect()
}

/// Largest eigenvalue and a unit eigenvector of a Hermitian matrix via
/// Lanczos with full reorthogonalization.
///
/// The Krylov space is grown until it becomes invariant, so the result is
/// exact (up to rounding) for every eigenvalue whose eigenvector overlaps the
/// fixed start vector.
pub fn largest_eigenpair(h: &ComplexMatrix) -> Result<(f64, Vec<Complex64>)> {
    check_hermitian(h)?;
    lanczos_max(h.rows(), h.max_abs(), |v| h.matvec(v))
}

/// [`largest_eigenpair`] for an operator given only by its action.
///
/// `apply` must be Hermitian on `C^dim`; `scale` is a rough bound on its
/// entries and sets the breakdown threshold.
pub fn lanczos_max<F>(dim: usize, scale: f64, apply: F) -> Result<(f64, Vec<Complex64>)>
where
    F: Fn(&[Complex64]) -> Vec<Complex64>,
{
    let n = dim;
    let scale = scale.max(f64::MIN_POSITIVE);
    let mut basis: Vec<Vec<Complex64>> = vec![start_vector(n)];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();

    loop {
        let k = basis.len() - 1;
        let mut w = apply(&basis[k]);
        alphas.push(inner(&basis[k], &w).re);
        // two passes of Gram-Schmidt against the whole basis
        for _ in 0..2 {
            for b in &basis {
                let proj = inner(b, &w);
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= proj * bi;
                }
            }
        }
        let beta = vec_norm(&w);
        if beta <= 1e-12 * scale || basis.len() == n {
            break;
        }
        betas.push(beta);
        basis.push(w.iter().map(|z| z / beta).collect());
    }

    let (theta, y) = tridiagonal_max(alphas, betas)?;
    let mut vec = vec![Complex64::new(0.0, 0.0); n];
    for (&coef, b) in y.iter().zip(&basis) {
        for (vi, bi) in vec.iter_mut().zip(b) {
            *vi += coef * bi;
        }
    }
    let norm = vec_norm(&vec);
    vec.iter_mut().for_each(|z| *z /= norm);
    Ok((theta, vec))
}

/// Largest eigenpair of the real symmetric tridiagonal matrix with diagonal
/// `d` and off-diagonal `e`, by implicit QL.
fn tridiagonal_max(mut d: Vec<f64>, mut e: Vec<f64>) -> Result<(f64, Vec<f64>)> {
    const MAX_ITS: usize = 60;
    let n = d.len();
    e.resize(n, 0.0);
    let mut z: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    for l in 0..n {
        let mut its = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            its += 1;
            if its > MAX_ITS {
                return Err(Error::NoConvergence(MAX_ITS));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for row in z.iter_mut() {
                    let f = row[i + 1];
                    row[i + 1] = s * row[i] + c * f;
                    row[i] = c * row[i] - s * f;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    let k = (0..n).max_by(|&a, &b| d[a].total_cmp(&d[b])).unwrap_or(0);
    Ok((d[k], z.iter().map(|row| row[k]).collect()))
}
