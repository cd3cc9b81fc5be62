//! Cross-module verification suite.
//!
//! Every check yields a residual and the tolerance it is held to. Failures,
//! including errors raised while computing a residual, are reported rather
//! than propagated, so an over-tight tolerance produces a readable report.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bell::{
    bell_operator, cubic_max_root, reduced_matrix, reduced_matrix_n3, JordanParams,
    SymmetricInvariants,
};
use crate::error::Result;
use crate::lhv::{
    classical_value, game_classical_value, game_measurements, game_quantum_simulated,
    game_quantum_value, proof_check,
};
use crate::linalg::{hermitian_eigen, inner, real_eigenvalues, RealPolynomial};
use crate::optimize::{equal_angle_optimum, f0_equals_f1_root, stationarity_report};
use crate::states::{
    b3_prime_spectrum, correlation_table_psi2, ghz_check, inequality_terms, psi2, psi3, psi3_prime,
    psi3_prime_excluded_span, x_star_n3, MeasurementSet,
};

/// Eigenvalues smaller than this in magnitude are treated as zero.
pub const ZERO_EIGENVALUE_TOL: f64 = 1e-9;

/// Published optimum for each party count, `(n, x, λ_max)`, to six places.
pub const TABLE: [(usize, f64, f64); 5] = [
    (3, 0.786151, 0.236068),
    (4, 0.830913, 0.249757),
    (5, 0.860012, 0.257836),
    (6, 0.880509, 0.263187),
    (7, 0.895745, 0.266998),
];

/// Deliberate defects used to confirm that the suite can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// drops the `β` factor from the linear coefficient of the three-party
    /// characteristic polynomial
    CharPolyDropBeta,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    /// replaces every check's own tolerance when set
    pub tolerance: Option<f64>,
    pub seed: u64,
    /// random parameter draws per party count for the spectral checks
    pub draws: usize,
    pub fault: Option<Fault>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            tolerance: None,
            seed: 7,
            draws: 10,
            fault: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

impl VerifyReport {
    pub fn failing(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect()
    }
}

/// A residual with its own tolerance and a short description.
struct Outcome {
    residual: f64,
    tolerance: f64,
    detail: String,
}

fn outcome(residual: f64, tolerance: f64, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome {
        residual,
        tolerance,
        detail: detail.into(),
    })
}

fn max_abs<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    it.into_iter().fold(
        0.0,
        |m, v| if v.is_nan() { f64::NAN } else { m.max(v.abs()) },
    )
}

fn random_params(rng: &mut ChaCha8Rng, n: usize) -> Result<JordanParams> {
    JordanParams::new((0..n).map(|_| rng.random_range(0.0..1.0)).collect())
}

/// Nonzero part of a spectrum, sorted ascending.
fn nonzero_sorted(values: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = values
        .into_iter()
        .filter(|x| x.abs() > ZERO_EIGENVALUE_TOL)
        .collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Largest gap between the nonzero spectrum of the dense operator and the
/// eigenvalues of the `(n + 2)` reduced matrix, over `draws` random
/// parameter vectors for each `n` in `n_range`. Returns `∞` when the two
/// nonzero spectra differ in size.
pub fn block_equivalence_residual(
    n_range: std::ops::RangeInclusive<usize>,
    draws: usize,
    seed: u64,
) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for n in n_range {
        for _ in 0..draws {
            let p = random_params(&mut rng, n)?;
            let full = nonzero_sorted(bell_operator(&p)?.eigen()?.values);
            let reduced_eigs = real_eigenvalues(&reduced_matrix(&p))?;
            let imag = max_abs(reduced_eigs.iter().map(|z| z.im));
            let reduced = nonzero_sorted(reduced_eigs.iter().map(|z| z.re));
            if full.len() != reduced.len() {
                return Ok(f64::INFINITY);
            }
            let gap = max_abs(full.iter().zip(&reduced).map(|(a, b)| a - b));
            worst = worst.max(gap).max(imag);
        }
    }
    Ok(worst)
}

/// Largest gap between the operator's top eigenvalue and the equal-angle
/// cubic's largest root on a grid of `points` overlaps.
pub fn equal_angle_residual(
    n_range: std::ops::RangeInclusive<usize>,
    points: usize,
) -> Result<f64> {
    let mut worst = 0.0f64;
    for n in n_range {
        for i in 0..points {
            let x = i as f64 / (points - 1) as f64;
            let op = bell_operator(&JordanParams::equal(n, x)?)?.lambda_max()?;
            worst = worst.max((op - cubic_max_root(n, x)?).abs());
        }
    }
    Ok(worst)
}

/// Three-party characteristic polynomial, optionally with the injected fault.
fn char_poly_n3_with(xa: f64, xb: f64, xc: f64, fault: Option<Fault>) -> RealPolynomial {
    let s = SymmetricInvariants::new(xa, xb, xc);
    let mut c = s.char_poly_coeffs();
    if fault == Some(Fault::CharPolyDropBeta) {
        c[1] = 2.0 * s.gamma - s.alpha - 3.0;
    }
    RealPolynomial::new(c.to_vec())
}

/// Largest `|F(λ)| / Σ|coeff|` over the eigenvalues `λ` of the 5×5 reduced
/// matrix, across `triples` random overlap triples.
pub fn char_poly_residual(triples: usize, seed: u64, fault: Option<Fault>) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..triples {
        let [xa, xb, xc]: [f64; 3] = std::array::from_fn(|_| rng.random_range(0.0..1.0));
        let p = char_poly_n3_with(xa, xb, xc, fault);
        let scale = p.coeff_l1();
        for z in real_eigenvalues(&reduced_matrix_n3(xa, xb, xc))? {
            worst = worst.max(p.eval_complex(z).norm() / scale);
        }
    }
    Ok(worst)
}

/// `max |λ + 1|` from the `f₀ = f₁` implication at `samples` points.
pub fn implication_residual(samples: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut done = 0;
    while done < samples {
        let xa: f64 = rng.random_range(0.05..0.95);
        let xb: f64 = rng.random_range(0.05..0.95);
        if (xa - xb).abs() < 0.05 {
            continue;
        }
        let c = f0_equals_f1_root(xa, xb)?;
        worst = worst.max((c.lambda + 1.0).abs()).max((c.f0 - c.f1).abs());
        done += 1;
    }
    Ok(worst)
}

fn check_block_equivalence(o: &VerifyOptions) -> Result<Outcome> {
    let r = block_equivalence_residual(2..=7, o.draws, o.seed)?;
    outcome(r, 1e-8, format!("{} draws per n, n = 2..7", o.draws))
}

fn check_equal_angle(_: &VerifyOptions) -> Result<Outcome> {
    outcome(
        equal_angle_residual(2..=7, 51)?,
        1e-8,
        "51-point grid, n = 2..7",
    )
}

fn check_char_poly(o: &VerifyOptions) -> Result<Outcome> {
    let r = char_poly_residual(1000, o.seed, o.fault)?;
    let detail = match o.fault {
        Some(f) => format!("1000 random triples, fault {f:?} injected"),
        None => "1000 random triples".into(),
    };
    outcome(r, 1e-8, detail)
}

fn check_classical(_: &VerifyOptions) -> Result<Outcome> {
    let values = (2..=7)
        .map(|n| Ok(classical_value(n)?.value))
        .collect::<Result<Vec<f64>>>()?;
    // any positive value breaks the bound; zero must be attained
    let r = values.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    outcome(r, 0.0, "exhaustive enumeration, n = 2..7")
}

fn check_proof(_: &VerifyOptions) -> Result<Outcome> {
    let mut bad = 0usize;
    for n in 2..=12 {
        let rep = proof_check(n)?;
        if rep.all_up_covered_by != [0] {
            bad += 1;
        }
    }
    outcome(bad as f64, 0.0, "every sequence covered, n = 2..12")
}

fn check_psi2(_: &VerifyOptions) -> Result<Outcome> {
    let b = bell_operator(&JordanParams::equal(2, FRAC_1_SQRT_2)?)?;
    let s = psi2();
    let r = (b.expectation(s.amplitudes()) - (SQRT_2 - 1.0) / 2.0).abs();
    outcome(r, 1e-10, "<psi2|B2|psi2> = (sqrt2 - 1)/2")
}

fn check_psi2_correlations(_: &VerifyOptions) -> Result<Outcome> {
    let want = (2.0 + SQRT_2) / 4.0;
    let table = correlation_table_psi2();
    let r = max_abs(table.iter().map(|c| c.probability - want));
    outcome(r, 1e-12, format!("{} correspondences", table.len()))
}

fn check_psi3_prime(_: &VerifyOptions) -> Result<Outcome> {
    let s = psi3_prime();
    let t = inequality_terms(&s, &MeasurementSet::z_x(3))?;
    let ortho = max_abs(
        psi3_prime_excluded_span()
            .iter()
            .map(|v| inner(v, s.amplitudes()).norm()),
    );
    let r = (t.delta() - 0.125)
        .abs()
        .max(t.rhs_all_second.abs())
        .max(max_abs(t.rhs_flips.iter().copied()))
        .max(ortho);
    outcome(r, 1e-12, "delta = 1/8 with vanishing right-hand side")
}

fn check_b3_prime(_: &VerifyOptions) -> Result<Outcome> {
    let spec = b3_prime_spectrum()?;
    let count = |target: f64| spec.iter().filter(|v| (*v - target).abs() < 1e-10).count();
    let cubic = RealPolynomial::new(vec![-2.0, 5.0, 16.0, 8.0]);
    let rest: Vec<f64> = spec
        .iter()
        .copied()
        .filter(|v| v.abs() >= 1e-10 && (v + 0.5).abs() >= 1e-10)
        .collect();
    if count(0.0) != 3 || count(-0.5) != 2 || rest.len() != 3 {
        return outcome(f64::INFINITY, 1e-9, format!("unexpected multiset {spec:?}"));
    }
    let r = max_abs(rest.iter().map(|&v| cubic.eval(v)));
    let top = rest.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if (top - 0.223).abs() > 5e-4 {
        return outcome(f64::INFINITY, 1e-9, format!("positive root {top}"));
    }
    outcome(r, 1e-9, format!("0 x3, -1/2 x2, cubic roots, top {top:.6}"))
}

fn check_psi3(_: &VerifyOptions) -> Result<Outcome> {
    let p = JordanParams::equal(3, x_star_n3())?;
    let e = hermitian_eigen(bell_operator(&p)?.matrix())?;
    let (lam, v) = e.max();
    let s = psi3();
    let fidelity = inner(&v, s.amplitudes()).norm();
    let r = (1.0 - fidelity)
        .abs()
        .max((lam - (5f64.sqrt() - 2.0)).abs());
    outcome(
        r,
        1e-6,
        format!("overlap with top eigenvector {fidelity:.12}"),
    )
}

fn check_psi3_not_ghz(_: &VerifyOptions) -> Result<Outcome> {
    let rep = ghz_check(&psi3(), 0.01);
    // shortfall below the required distance from I/2
    let r = (0.01 - rep.max_distance).max(0.0);
    outcome(
        r,
        0.0,
        format!("max marginal distance {:.6}", rep.max_distance),
    )
}

fn check_table(_: &VerifyOptions) -> Result<Outcome> {
    let mut worst = 0.0f64;
    for (n, x, lam) in TABLE {
        let (xs, ls) = equal_angle_optimum(n)?;
        worst = worst.max((xs - x).abs()).max((ls - lam).abs());
    }
    outcome(worst, 1e-5, "n = 3..7 against the published rows")
}

fn check_analytic_n3(_: &VerifyOptions) -> Result<Outcome> {
    let (x, lam) = equal_angle_optimum(3)?;
    let r = (x * x - (5f64.sqrt() - 1.0) / 2.0)
        .abs()
        .max((lam - (5f64.sqrt() - 2.0)).abs());
    outcome(r, 1e-9, "x*^2 = (sqrt5 - 1)/2, lambda* = sqrt5 - 2")
}

fn check_monotone(_: &VerifyOptions) -> Result<Outcome> {
    let lams = (2..=7)
        .map(|n| Ok(equal_angle_optimum(n)?.1))
        .collect::<Result<Vec<f64>>>()?;
    let r = lams
        .windows(2)
        .map(|w| (w[0] - w[1]).max(0.0))
        .fold(0.0, f64::max);
    // strict increase: equal neighbours fail too
    let strict = lams.windows(2).all(|w| w[1] > w[0]);
    outcome(
        if strict { r } else { r.max(f64::MIN_POSITIVE) },
        0.0,
        "lambda*(n), n = 2..7",
    )
}

fn check_stationarity(_: &VerifyOptions) -> Result<Outcome> {
    let (x, lam) = equal_angle_optimum(3)?;
    let rep = stationarity_report(&JordanParams::equal(3, x)?, lam)?;
    outcome(
        rep.max_abs,
        1e-5,
        "central-difference gradient at the n = 3 optimum",
    )
}

fn check_implication(o: &VerifyOptions) -> Result<Outcome> {
    outcome(
        implication_residual(10, o.seed)?,
        1e-9,
        "f0 = f1 forces lambda = -1, 10 points",
    )
}

fn check_game(_: &VerifyOptions) -> Result<Outcome> {
    let c = game_classical_value();
    let x = x_star_n3();
    let sim = game_quantum_simulated(&psi3(), &game_measurements(x)?)?;
    let formula = game_quantum_value(5f64.sqrt() - 2.0);
    let sim_prime = game_quantum_simulated(&psi3_prime(), &MeasurementSet::z_x(3))?;
    let r = (c.value - 0.8)
        .abs()
        .max((sim - formula).abs())
        .max((sim_prime - game_quantum_value(0.125)).abs());
    outcome(
        r,
        1e-10,
        format!("classical {:.6}, quantum {:.6}", c.value, sim),
    )
}

type CheckFn = fn(&VerifyOptions) -> Result<Outcome>;

const CHECKS: &[(&str, CheckFn)] = &[
    ("block-equivalence", check_block_equivalence),
    ("equal-angle-consistency", check_equal_angle),
    ("char-poly-n3", check_char_poly),
    ("classical-bound", check_classical),
    ("proof-coverage", check_proof),
    ("psi2-violation", check_psi2),
    ("psi2-correlations", check_psi2_correlations),
    ("psi3prime-violation", check_psi3_prime),
    ("b3prime-spectrum", check_b3_prime),
    ("psi3-top-eigenvector", check_psi3),
    ("psi3-not-ghz", check_psi3_not_ghz),
    ("table-rows", check_table),
    ("analytic-n3-optimum", check_analytic_n3),
    ("monotonicity", check_monotone),
    ("stationarity", check_stationarity),
    ("f0-f1-implication", check_implication),
    ("nonlocal-game", check_game),
];

/// Names of all checks in execution order.
pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|(n, _)| *n).collect()
}

/// Runs every check.
pub fn run_suite(options: &VerifyOptions) -> VerifyReport {
    let checks: Vec<CheckResult> = CHECKS
        .iter()
        .map(|(name, f)| {
            let (residual, default_tol, detail) = match f(options) {
                Ok(o) => (o.residual, o.tolerance, o.detail),
                Err(e) => (f64::INFINITY, 0.0, format!("error: {e}")),
            };
            let tolerance = options.tolerance.unwrap_or(default_tol);
            CheckResult {
                name: (*name).to_string(),
                passed: residual <= tolerance,
                residual,
                tolerance,
                detail,
            }
        })
        .collect();
    VerifyReport {
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}
