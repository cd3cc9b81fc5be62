//! First-order optimality checks for the largest eigenvalue.
//!
//! For three parties the largest eigenvalue is a root of
//! `F(λ, x) = λ⁵ + 3λ⁴ + (2+f₂)λ³ + f₂λ² + f₁λ + f₀`, so along the root
//! `F_λ ∂λ/∂x_l + (∂F/∂x_l)_λ = 0`. Stationarity therefore reduces to
//! `(∂F/∂x_l)_λ = 0` for every party, and eliminating `λ³ + λ²` between two
//! parties leaves a condition linear in `λ`.

use serde::{Deserialize, Serialize};

use crate::bell::{bell_operator, char_poly_n3, JordanParams, SymmetricInvariants};
use crate::error::{Error, Result};
use crate::linalg::{poly_roots, RealPolynomial};

/// Central-difference step for the gradient.
pub const FD_STEP: f64 = 1e-5;
/// Allowed distance between the given `λ` and the operator spectrum.
pub const EIGENVALUE_TOL: f64 = 1e-6;
/// Residual bound below which the printed pairwise form is taken to hold.
const PAIRWISE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationarityReport {
    /// central-difference `∂λ_max/∂x_l`
    pub gradient: Vec<f64>,
    /// `F_λ·∂λ/∂x_l + (∂F/∂x_l)_λ` per party (three parties only)
    pub implicit_residuals: Option<Vec<f64>>,
    /// `(∂F/∂x_l)_λ` per party (three parties only)
    pub partials: Option<Vec<f64>>,
    /// `x_b(x_a²−1)(f₁'λ + f₀')_a − x_a(x_b²−1)(f₁'λ + f₀')_b` for the pairs
    /// `(a,b)`, `(a,c)`, `(c,b)`
    pub linear_residuals: Option<Vec<f64>>,
    /// `(x_a²−x_b²)[f₁ − x_a²x_b²β(x_c²−1)]λ + (x_a²−x_b²)[f₀ − x_a²x_b²β(x_c²−1)]`
    /// for the same pairs
    pub printed_residuals: Option<Vec<f64>>,
    /// printed pairwise form fails while the derived linear form holds
    pub printed_form_flagged: bool,
    /// `max |gradient|`
    pub max_abs: f64,
}

fn lambda_max_at(params: &JordanParams, l: usize, x: f64) -> Result<f64> {
    bell_operator(&params.with(l, x)?)?.lambda_max()
}

/// Partial derivatives of `(α, β, γ)` with respect to the first argument.
fn invariant_partials(xa: f64, xb: f64, xc: f64) -> (f64, f64, f64) {
    let (b2, c2) = (xb * xb, xc * xc);
    (2.0 * xa * (b2 + c2), 2.0 * xa * b2 * c2, 2.0 * xa)
}

/// `(∂f₀/∂x_a, ∂f₁/∂x_a, ∂f₂/∂x_a)`.
fn f_partials(xa: f64, xb: f64, xc: f64) -> (f64, f64, f64) {
    let s = SymmetricInvariants::new(xa, xb, xc);
    let (da, db, dg) = invariant_partials(xa, xb, xc);
    let f0 = db * (s.alpha - 2.0 * s.beta - 1.0) + s.beta * (da - 2.0 * db);
    let f1 = db * (2.0 * s.gamma - s.alpha - 3.0) + s.beta * (2.0 * dg - da);
    let f2 = dg - da + db;
    (f0, f1, f2)
}

/// Arguments reordered so party `l` comes first.
fn rotate_to(xs: [f64; 3], l: usize) -> (f64, f64, f64) {
    match l {
        0 => (xs[0], xs[1], xs[2]),
        1 => (xs[1], xs[0], xs[2]),
        _ => (xs[2], xs[0], xs[1]),
    }
}

fn partial_f(xs: [f64; 3], l: usize, lambda: f64) -> f64 {
    let (a, b, c) = rotate_to(xs, l);
    let (f0, f1, f2) = f_partials(a, b, c);
    f2 * (lambda.powi(3) + lambda * lambda) + f1 * lambda + f0
}

fn linear_residual(xa: f64, xb: f64, xc: f64, lambda: f64) -> f64 {
    let (f0a, f1a, _) = f_partials(xa, xb, xc);
    let (f0b, f1b, _) = f_partials(xb, xa, xc);
    xb * (xa * xa - 1.0) * (f1a * lambda + f0a) - xa * (xb * xb - 1.0) * (f1b * lambda + f0b)
}

fn printed_residual(xa: f64, xb: f64, xc: f64, lambda: f64) -> f64 {
    let s = SymmetricInvariants::new(xa, xb, xc);
    let k = xa * xa * xb * xb * s.beta * (xc * xc - 1.0);
    let d = xa * xa - xb * xb;
    d * (s.f1() - k) * lambda + d * (s.f0() - k)
}

/// First-order conditions at `params` for the eigenvalue `lambda`.
pub fn stationarity_report(params: &JordanParams, lambda: f64) -> Result<StationarityReport> {
    let op = bell_operator(params)?;
    let spectrum = op.eigen()?.values;
    let gap = spectrum
        .iter()
        .map(|v| (v - lambda).abs())
        .fold(f64::INFINITY, f64::min);
    if gap > EIGENVALUE_TOL {
        return Err(Error::NotAnEigenvalue(lambda, gap));
    }

    let gradient = params
        .xs()
        .iter()
        .enumerate()
        .map(|(l, &x)| {
            let hi = (x + FD_STEP).min(1.0);
            let lo = (x - FD_STEP).max(0.0);
            Ok((lambda_max_at(params, l, hi)? - lambda_max_at(params, l, lo)?) / (hi - lo))
        })
        .collect::<Result<Vec<f64>>>()?;
    let max_abs = gradient.iter().map(|g| g.abs()).fold(0.0, f64::max);

    let mut report = StationarityReport {
        gradient,
        implicit_residuals: None,
        partials: None,
        linear_residuals: None,
        printed_residuals: None,
        printed_form_flagged: false,
        max_abs,
    };
    if let [xa, xb, xc] = *params.xs() {
        let xs = [xa, xb, xc];
        let f = char_poly_n3(params)?;
        let f_lambda = f.derivative().eval(lambda);
        let partials: Vec<f64> = (0..3).map(|l| partial_f(xs, l, lambda)).collect();
        report.implicit_residuals = Some(
            report
                .gradient
                .iter()
                .zip(&partials)
                .map(|(g, p)| f_lambda * g + p)
                .collect(),
        );
        report.partials = Some(partials);
        let pairs = [(xa, xb, xc), (xa, xc, xb), (xc, xb, xa)];
        let linear: Vec<f64> = pairs
            .iter()
            .map(|&(a, b, c)| linear_residual(a, b, c, lambda))
            .collect();
        let printed: Vec<f64> = pairs
            .iter()
            .map(|&(a, b, c)| printed_residual(a, b, c, lambda))
            .collect();
        let worst = |v: &[f64]| v.iter().map(|r| r.abs()).fold(0.0, f64::max);
        report.printed_form_flagged =
            worst(&printed) > PAIRWISE_TOL && worst(&linear) <= PAIRWISE_TOL;
        report.linear_residuals = Some(linear);
        report.printed_residuals = Some(printed);
    }
    Ok(report)
}

/// Outcome of imposing `f₀ = f₁` on the printed pairwise condition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImplicationCheck {
    pub xa: f64,
    pub xb: f64,
    /// the `x_c` solving `f₀ = f₁`
    pub xc: f64,
    pub f0: f64,
    pub f1: f64,
    /// `λ` solving the printed linear condition there
    pub lambda: f64,
}

/// For fixed `x_a ≠ x_b`, solves `f₀ = f₁` for `x_c` and returns the `λ`
/// forced by the printed pairwise condition.
///
/// `f₀ − f₁` is quadratic in `t = x_c²`; its coefficients are recovered by
/// interpolation at three nodes and its roots by the companion matrix. Roots
/// with `f₁ − x_a²x_b²β(x_c²−1) = 0` leave `λ` undetermined and are skipped.
pub fn f0_equals_f1_root(xa: f64, xb: f64) -> Result<ImplicationCheck> {
    if (xa * xa - xb * xb).abs() < 1e-12 {
        return Err(Error::InvalidArgument("x_a and x_b must differ".into()));
    }
    let g = |t: f64| {
        let s = SymmetricInvariants::new(xa, xb, t.sqrt());
        s.f0() - s.f1()
    };
    let (g0, g1, g2) = (g(0.0), g(0.5), g(1.0));
    // quadratic through (0, g0), (0.5, g1), (1, g2)
    let c2 = 2.0 * (g0 - 2.0 * g1 + g2);
    let c1 = g2 - g0 - c2;
    let p = RealPolynomial::new(vec![g0, c1, c2]);
    let roots = poly_roots(&p)?;
    for z in roots {
        if z.im.abs() > 1e-9 || z.re < -1e-12 || z.re > 1.0 + 1e-12 {
            continue;
        }
        let t = z.re.clamp(0.0, 1.0);
        let xc = t.sqrt();
        let s = SymmetricInvariants::new(xa, xb, xc);
        let k = xa * xa * xb * xb * s.beta * (xc * xc - 1.0);
        let denom = s.f1() - k;
        if denom.abs() < 1e-12 {
            continue;
        }
        return Ok(ImplicationCheck {
            xa,
            xb,
            xc,
            f0: s.f0(),
            f1: s.f1(),
            lambda: -(s.f0() - k) / denom,
        });
    }
    Err(Error::InvalidArgument(format!(
        "f0 = f1 has no admissible root for x_a={xa}, x_b={xb}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::x_star_n3;

    #[test]
    fn symmetric_optimum_is_stationary() {
        let x = x_star_n3();
        let p = JordanParams::equal(3, x).unwrap();
        let r = stationarity_report(&p, 5f64.sqrt() - 2.0).unwrap();
        assert!(r.max_abs <= 1e-5, "{r:?}");
        for v in r.partials.unwrap() {
            assert!(v.abs() < 1e-12);
        }
        for v in r.linear_residuals.unwrap() {
            assert!(v.abs() < 1e-12);
        }
        assert!(!r.printed_form_flagged);
    }

    #[test]
    fn asymmetric_point_is_not_stationary() {
        let p = JordanParams::new(vec![0.7, 0.8, 0.786]).unwrap();
        let lam = bell_operator(&p).unwrap().lambda_max().unwrap();
        let r = stationarity_report(&p, lam).unwrap();
        assert!(r.max_abs > 1e-3);
        // the implicit-function identity holds everywhere on the root
        for v in r.implicit_residuals.unwrap() {
            assert!(v.abs() < 1e-7, "{v}");
        }
    }

    #[test]
    fn rejects_non_eigenvalue() {
        let p = JordanParams::equal(3, 0.5).unwrap();
        assert!(matches!(
            stationarity_report(&p, 0.9),
            Err(Error::NotAnEigenvalue(..))
        ));
    }

    #[test]
    fn partial_derivatives_match_finite_differences() {
        let xs = [0.4, 0.65, 0.9];
        let lam = 0.13;
        let h = 1e-6;
        let f_at = |v: [f64; 3]| {
            char_poly_n3(&JordanParams::new(v.to_vec()).unwrap())
                .unwrap()
                .eval(lam)
        };
        for l in 0..3 {
            let (mut up, mut dn) = (xs, xs);
            up[l] += h;
            dn[l] -= h;
            let fd = (f_at(up) - f_at(dn)) / (2.0 * h);
            assert!((fd - partial_f(xs, l, lam)).abs() < 1e-8);
        }
    }

    #[test]
    fn equal_f_forces_minus_one() {
        let c = f0_equals_f1_root(0.3, 0.55).unwrap();
        assert!((c.f0 - c.f1).abs() < 1e-12);
        assert!((c.lambda + 1.0).abs() < 1e-9);
    }
}
