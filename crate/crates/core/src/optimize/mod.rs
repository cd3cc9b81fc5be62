//! Maximization of the largest Bell-operator eigenvalue over the overlaps.

mod simplex;
mod stationarity;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use simplex::{NelderMead, SimplexOptions, SimplexResult};
pub use stationarity::{
    f0_equals_f1_root, stationarity_report, ImplicationCheck, StationarityReport, FD_STEP,
};

use crate::bell::{
    bell_operator, cubic_coeffs, cubic_max_root, reduced_matrix, JordanParams, MAX_DENSE_PARTIES,
};
use crate::error::{Error, Result};
use crate::linalg::vec_norm;
use crate::states::kets;

pub const DEFAULT_RESTARTS: usize = 32;
pub const GRID_POINTS: usize = 1000;
pub const GOLDEN_TOL: f64 = 1e-12;
pub const MAX_EQUAL_ANGLE_PARTIES: usize = 16;
pub const MAX_FULL_PARTIES: usize = 7;
/// Largest party count for the equal-angle curve (no eigenvector needed).
pub const MAX_CURVE_PARTIES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    EqualAngleCubic,
    FullOperator,
    /// no optimization; the overlaps were given
    FixedAngles,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::EqualAngleCubic => "equal-angle-cubic",
            Method::FullOperator => "full-operator",
            Method::FixedAngles => "fixed-angles",
        })
    }
}

/// An optimum of the largest eigenvalue with the state attaining it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationResult {
    pub n: usize,
    pub xs: JordanParams,
    pub lambda_max: f64,
    /// unit eigenvector of dimension `2^n`
    pub eigvec: Vec<Complex64>,
    pub method: Method,
    pub converged: bool,
}

impl ViolationResult {
    /// `‖B v − λ v‖` for the reported pair.
    pub fn residual(&self) -> Result<f64> {
        let b = bell_operator(&self.xs)?;
        let bv = b.matrix().matvec(&self.eigvec);
        Ok(bv
            .iter()
            .zip(&self.eigvec)
            .map(|(a, v)| (a - v * self.lambda_max).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }
}

/// One point of the violation-versus-parties curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub n: usize,
    pub x: f64,
    pub lambda_max: f64,
}

/// Maximizes `f` on `[a, b]` by golden-section search.
pub fn golden_section_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Newton refinement of the stationary point of the equal-angle cubic root.
///
/// Solves `P(λ, t) = 0`, `∂P/∂t = 0` with `t = x²`; along the root branch
/// `dλ/dt = −P_t / P_λ`, so the second equation is exactly stationarity.
fn polish_equal_angle(n: usize, x0: f64, lambda0: f64) -> Option<(f64, f64)> {
    let nf = n as f64;
    let ni = n as i32;
    let (mut lam, mut t) = (lambda0, x0 * x0);
    for _ in 0..50 {
        let tn2 = t.powi(ni - 2);
        let tn1 = t.powi(ni - 1);
        let tn = t.powi(ni);
        let c = cubic_coeffs(n, t.sqrt());
        let p = ((lam + c[2]) * lam + c[1]) * lam + c[0];
        let c2t = -(nf - 1.0);
        let c1t = -nf + nf * tn1;
        let c0t = nf * nf * tn1 - (nf - 1.0) * (nf + 1.0) * tn - 1.0;
        let c1tt = nf * (nf - 1.0) * tn2;
        let c0tt = nf * nf * (nf - 1.0) * tn2 - (nf - 1.0) * nf * (nf + 1.0) * tn1;
        let pt = c2t * lam * lam + c1t * lam + c0t;
        let pl = 3.0 * lam * lam + 2.0 * c[2] * lam + c[1];
        let ptl = 2.0 * c2t * lam + c1t;
        let ptt = c1tt * lam + c0tt;
        let det = pl * ptt - pt * ptl;
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let dl = (p * ptt - pt * pt) / det;
        let dt = (pl * pt - ptl * p) / det;
        lam -= dl;
        t -= dt;
        if !(0.0..=1.0).contains(&t) {
            return None;
        }
        if dl.abs() < 1e-16 && dt.abs() < 1e-16 {
            break;
        }
    }
    if (lam - lambda0).abs() > 1e-8 || (t.sqrt() - x0).abs() > 1e-4 {
        return None;
    }
    Some((t.sqrt(), lam))
}

/// Optimal equal overlap and violation from the cubic, without eigenvector.
pub fn equal_angle_optimum(n: usize) -> Result<(f64, f64)> {
    if !(2..=MAX_CURVE_PARTIES).contains(&n) {
        return Err(Error::PartyCount(n, "2 <= n <= 64"));
    }
    let root = |x: f64| cubic_max_root(n, x.clamp(0.0, 1.0)).unwrap_or(f64::NEG_INFINITY);
    let step = 1.0 / (GRID_POINTS - 1) as f64;
    let (best_i, _) = (0..GRID_POINTS).map(|i| (i, root(i as f64 * step))).fold(
        (0, f64::NEG_INFINITY),
        |acc, (i, v)| if v > acc.1 { (i, v) } else { acc },
    );
    let lo = (best_i.saturating_sub(1)) as f64 * step;
    let hi = ((best_i + 1).min(GRID_POINTS - 1)) as f64 * step;
    let (x, lam) = golden_section_max(root, lo, hi, GOLDEN_TOL);
    Ok(polish_equal_angle(n, x, lam).unwrap_or((x, lam)))
}

/// Eigenvector of `B_n` for eigenvalue `lambda`, rebuilt from the reduced
/// matrix: if `M c = λ c` then `Σ c_j φ_j` is an eigenvector of `B_n`.
fn eigvec_from_reduced(params: &JordanParams, lambda: f64) -> Result<Vec<Complex64>> {
    let m = reduced_matrix(params);
    let dim = m.rows();
    // inverse iteration on M − λI with a tiny shift
    let mut a: Vec<Vec<f64>> = (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| m[(i, j)].re - if i == j { lambda + 1e-10 } else { 0.0 })
                .collect()
        })
        .collect();
    let perm =
        lu_decompose(&mut a).ok_or_else(|| Error::InvalidArgument("singular shift".into()))?;
    let mut c = vec![1.0; dim];
    for _ in 0..4 {
        c = lu_solve(&a, &perm, &c);
        let norm = c.iter().map(|v| v * v).sum::<f64>().sqrt();
        c.iter_mut().for_each(|v| *v /= norm);
    }
    let n = params.n();
    let xs = params.xs();
    let basis_vec = |flip: &dyn Fn(usize) -> bool| {
        let factors: Vec<_> = (0..n)
            .map(|l| {
                if flip(l) {
                    kets::u_plus(xs[l])
                } else {
                    kets::zero()
                }
            })
            .collect();
        kets::product(&factors)
    };
    let mut v = vec![Complex64::new(0.0, 0.0); 1 << n];
    let mut add = |coef: f64, phi: Vec<Complex64>| {
        v.iter_mut().zip(phi).for_each(|(a, b)| *a += b * coef);
    };
    add(c[0], basis_vec(&|_| false));
    for k in 0..n {
        add(c[n - k], basis_vec(&|l| l == k));
    }
    add(c[n + 1], basis_vec(&|_| true));
    let norm = vec_norm(&v);
    Ok(v.iter().map(|z| z / norm).collect())
}

fn lu_decompose(a: &mut [Vec<f64>]) -> Option<Vec<usize>> {
    let n = a.len();
    let mut perm: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs()))?;
        if a[p][k] == 0.0 {
            return None;
        }
        a.swap(k, p);
        perm.swap(k, p);
        let (top, bottom) = a.split_at_mut(k + 1);
        let pivot = &top[k];
        for row in bottom {
            let f = row[k] / pivot[k];
            row[k] = f;
            for (r, p) in row[k + 1..].iter_mut().zip(&pivot[k + 1..]) {
                *r -= f * p;
            }
        }
    }
    Some(perm)
}

fn lu_solve(lu: &[Vec<f64>], perm: &[usize], b: &[f64]) -> Vec<f64> {
    let n = lu.len();
    let mut y: Vec<f64> = perm.iter().map(|&p| b[p]).collect();
    for i in 0..n {
        for j in 0..i {
            y[i] -= lu[i][j] * y[j];
        }
    }
    for i in (0..n).rev() {
        for j in (i + 1)..n {
            y[i] -= lu[i][j] * y[j];
        }
        y[i] /= lu[i][i];
    }
    y
}

fn eigvec_at(params: &JordanParams, lambda: f64) -> Result<Vec<Complex64>> {
    if params.n() <= MAX_DENSE_PARTIES {
        Ok(bell_operator(params)?.max_eigenpair()?.1)
    } else {
        eigvec_from_reduced(params, lambda)
    }
}

/// Best violation with all overlaps equal, from the cubic's largest root.
pub fn maximize_equal_angle(n: usize) -> Result<ViolationResult> {
    if !(2..=MAX_EQUAL_ANGLE_PARTIES).contains(&n) {
        return Err(Error::PartyCount(n, "2 <= n <= 16"));
    }
    let (x, lambda_max) = equal_angle_optimum(n)?;
    let xs = JordanParams::equal(n, x)?;
    let eigvec = eigvec_at(&xs, lambda_max)?;
    Ok(ViolationResult {
        n,
        xs,
        lambda_max,
        eigvec,
        method: Method::EqualAngleCubic,
        converged: true,
    })
}

/// Largest eigenvalue of the full `2^n` operator, `−∞` outside the domain.
pub fn full_objective(xs: &[f64]) -> f64 {
    JordanParams::new(xs.to_vec())
        .and_then(|p| bell_operator(&p))
        .and_then(|b| b.lambda_max())
        .unwrap_or(f64::NEG_INFINITY)
}

/// Initial simplex for one restart; deterministic in `(seed, restart)`.
pub fn initial_simplex(n: usize, seed: u64, restart: usize) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    (0..=n)
        .map(|_| (0..n).map(|_| rng.random_range(0.05..=0.95)).collect())
        .collect()
}

/// Multistart Nelder–Mead over all `n` overlaps on the full operator.
///
/// The best restart wins; ties go to the lowest restart index.
pub fn maximize_full(n: usize, restarts: usize, seed: u64) -> Result<ViolationResult> {
    maximize_full_with(n, restarts, seed, SimplexOptions::default())
}

pub fn maximize_full_with(
    n: usize,
    restarts: usize,
    seed: u64,
    options: SimplexOptions,
) -> Result<ViolationResult> {
    if !(2..=MAX_FULL_PARTIES).contains(&n) {
        return Err(Error::PartyCount(n, "2 <= n <= 7"));
    }
    if restarts == 0 {
        return Err(Error::InvalidArgument("restarts must be at least 1".into()));
    }
    let nm = NelderMead::new(0.0, 1.0, options);
    let mut best: Option<SimplexResult> = None;
    for r in 0..restarts {
        let run = nm.minimize(|x| -full_objective(x), initial_simplex(n, seed, r));
        if best.as_ref().is_none_or(|b| run.f < b.f) {
            best = Some(run);
        }
    }
    let best = best.expect("restarts >= 1");
    let xs = JordanParams::new(best.x)?;
    let (lambda_max, eigvec) = bell_operator(&xs)?.max_eigenpair()?;
    Ok(ViolationResult {
        n,
        xs,
        lambda_max,
        eigvec,
        method: Method::FullOperator,
        converged: best.converged,
    })
}

/// Equal-angle optimum for every `n` in `n_min..=n_max`.
pub fn violation_curve(n_min: usize, n_max: usize) -> Result<Vec<CurvePoint>> {
    if n_min < 2 || n_min > n_max {
        return Err(Error::InvalidArgument(format!(
            "need 2 <= n_min <= n_max, got {n_min}..{n_max}"
        )));
    }
    (n_min..=n_max)
        .map(|n| {
            let (x, lambda_max) = equal_angle_optimum(n)?;
            Ok(CurvePoint { n, x, lambda_max })
        })
        .collect()
}
