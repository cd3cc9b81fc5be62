//! Bell operators and their Jordan-basis reductions.
//!
//! Every party holds one qubit. Setting 1 projects onto `|0⟩`, setting 2 onto
//! `|u₊⟩ = x|0⟩ + √(1−x²)|1⟩`. Within the span of `{|0⟩, |u₊⟩}` per party the
//! operator
//!
//! ```text
//! B_n = ⊗Q_1 − ⊗Q_2 − Σ_l (I − Q_l2) ⊗_{m≠l} Q_m1
//! ```
//!
//! has rank at most `n + 2`; its range is spanned by the all-`|u₁⟩` product,
//! the all-`|u₂⟩` product and the `n` single-flip products. [`reduced_matrix`]
//! is the action of `B_n` on that span in the (non-orthogonal) product basis.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eigen, inner, lanczos_max, ComplexMatrix, HermitianEigen, RealPolynomial,
    HERMITIAN_TOL,
};
use crate::states::kets;

/// Largest party count supported by the dense `2^n` operator.
pub const MAX_DENSE_PARTIES: usize = 10;

/// Per-party overlap cosines `x_l = cos θ_l` of the Jordan angles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JordanParams {
    xs: Vec<f64>,
}

impl JordanParams {
    pub fn new(xs: Vec<f64>) -> Result<Self> {
        if xs.len() < 2 {
            return Err(Error::PartyCount(xs.len(), "n >= 2"));
        }
        if let Some(&bad) = xs.iter().find(|x| !(0.0..=1.0).contains(*x)) {
            return Err(Error::OverlapOutOfRange(bad));
        }
        Ok(Self { xs })
    }

    /// All parties share the overlap `x`.
    pub fn equal(n: usize, x: f64) -> Result<Self> {
        Self::new(vec![x; n])
    }

    pub fn n(&self) -> usize {
        self.xs.len()
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn with(&self, party: usize, x: f64) -> Result<Self> {
        let mut xs = self.xs.clone();
        xs[party] = x;
        Self::new(xs)
    }
}

fn check_overlap(x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::OverlapOutOfRange(x))
    }
}

/// Rank-one 2×2 projector onto the `+1` outcome of a binary observable.
#[derive(Debug, Clone, PartialEq)]
pub struct Projector {
    matrix: ComplexMatrix,
}

impl Projector {
    /// Projector onto a unit vector.
    pub fn onto(v: [Complex64; 2]) -> Self {
        Self {
            matrix: ComplexMatrix::outer(&v, &v),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// `I − P`, the projector onto the `−1` outcome.
    pub fn complement(&self) -> ComplexMatrix {
        &ComplexMatrix::identity(2) - &self.matrix
    }

    /// `max |P² − P|`.
    pub fn idempotency_error(&self) -> f64 {
        (&self.matrix * &self.matrix).max_diff(&self.matrix)
    }
}

/// `|0⟩⟨0|`, the setting-1 projector.
pub fn projector_z() -> Projector {
    Projector {
        matrix: ComplexMatrix::from_diag(&[1.0, 0.0]),
    }
}

/// `|u₊⟩⟨u₊|` with `|u₊⟩ = x|0⟩ + √(1−x²)|1⟩`.
pub fn projector_tilted(x: f64) -> Result<Projector> {
    check_overlap(x)?;
    let s = (1.0 - x * x).max(0.0).sqrt();
    Ok(Projector::onto([
        Complex64::new(x, 0.0),
        Complex64::new(s, 0.0),
    ]))
}

/// Hermitian `2^n × 2^n` realization of `B_n`.
#[derive(Debug, Clone)]
pub struct BellOperator {
    params: JordanParams,
    matrix: ComplexMatrix,
    /// `(sign, v)` with `B_n = Σ sign |v⟩⟨v|`
    terms: Vec<(f64, Vec<Complex64>)>,
}

impl BellOperator {
    pub fn n(&self) -> usize {
        self.params.n()
    }

    pub fn params(&self) -> &JordanParams {
        &self.params
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Trace forced by the construction: each of the `n + 2` terms is a
    /// product of rank-one projectors, so `tr B_n = 1 − 1 − n`.
    pub fn expected_trace(n: usize) -> f64 {
        -(n as f64)
    }

    pub fn eigen(&self) -> Result<HermitianEigen> {
        hermitian_eigen(&self.matrix)
    }

    /// `B_n v` from the rank-one terms, without touching the dense matrix.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
        for (sign, t) in &self.terms {
            let c = inner(t, v) * sign;
            out.iter_mut().zip(t).for_each(|(o, ti)| *o += ti * c);
        }
        out
    }

    /// Largest eigenvalue and its eigenvector.
    pub fn max_eigenpair(&self) -> Result<(f64, Vec<Complex64>)> {
        lanczos_max(self.matrix.rows(), 1.0, |v| self.apply(v))
    }

    pub fn lambda_max(&self) -> Result<f64> {
        Ok(self.max_eigenpair()?.0)
    }

    pub fn expectation(&self, state: &[Complex64]) -> f64 {
        self.matrix.sandwich(state, state).re
    }
}

/// Builds `B_n`. Every term is a projector onto a product vector, so the
/// matrix is accumulated as a signed sum of `n + 2` outer products.
pub fn bell_operator(params: &JordanParams) -> Result<BellOperator> {
    let n = params.n();
    if n > MAX_DENSE_PARTIES {
        return Err(Error::PartyCount(n, "n <= 10 for the dense operator"));
    }
    let xs = params.xs();
    xs.iter().try_for_each(|&x| check_overlap(x))?;
    let zeros = vec![kets::zero(); n];
    let mut terms = vec![
        (1.0, kets::product(&zeros)),
        (
            -1.0,
            kets::product(&xs.iter().map(|&x| kets::u_plus(x)).collect::<Vec<_>>()),
        ),
    ];
    for (l, &x) in xs.iter().enumerate() {
        let mut factors = zeros.clone();
        factors[l] = kets::u_minus(x);
        terms.push((-1.0, kets::product(&factors)));
    }
    let dim = 1 << n;
    let mut matrix = ComplexMatrix::zeros(dim, dim);
    for (sign, v) in &terms {
        for (i, vi) in v.iter().enumerate() {
            if vi.re == 0.0 && vi.im == 0.0 {
                continue;
            }
            let row = vi * sign;
            for (j, vj) in v.iter().enumerate() {
                matrix[(i, j)] += row * vj.conj();
            }
        }
    }
    debug_assert!(matrix.is_hermitian(HERMITIAN_TOL));
    Ok(BellOperator {
        params: params.clone(),
        matrix,
        terms,
    })
}

/// Action of `B_n` on the `(n + 2)`-dimensional range, as a coefficient map.
///
/// Basis order: the all-setting-1 product, then the single-flip products for
/// parties `n−1, …, 0` (last party first), then the all-setting-2 product.
/// For `n = 2` this is the `(c₁₁, c₁₂, c₂₁, c₂₂)` ordering, for `n = 3` the
/// `(φ₁, …, φ₅)` ordering.
pub fn reduced_matrix(params: &JordanParams) -> ComplexMatrix {
    let n = params.n();
    let xs = params.xs();
    let dim = n + 2;
    let last = n + 1;
    // basis slot of the flip on party l
    let slot = |l: usize| n - l;
    let prod_except = |k: Option<usize>| -> f64 {
        xs.iter()
            .enumerate()
            .filter(|&(i, _)| Some(i) != k)
            .map(|(_, &x)| x)
            .product()
    };
    let all = prod_except(None);
    let nf = n as f64;

    let mut m = vec![vec![0.0; dim]; dim];
    m[0][0] = 1.0 - nf;
    m[last][0] = -all;
    for l in 0..n {
        m[slot(l)][0] = xs[l];
    }
    for k in 0..n {
        let col = slot(k);
        m[0][col] = (2.0 - nf) * xs[k];
        for l in (0..n).filter(|&l| l != k) {
            m[slot(l)][col] = xs[k] * xs[l];
        }
        m[last][col] = -prod_except(Some(k));
    }
    m[0][last] = all;
    m[last][last] = -1.0;

    let rows: Vec<&[f64]> = m.iter().map(Vec::as_slice).collect();
    ComplexMatrix::from_real_rows(&rows)
}

/// The two-party 4×4 coefficient matrix in the `(c₁₁, c₁₂, c₂₁, c₂₂)` basis.
pub fn reduced_matrix_n2(xa: f64, xb: f64) -> ComplexMatrix {
    let ab = xa * xb;
    ComplexMatrix::from_real_rows(&[
        &[-1.0, 0.0, 0.0, ab],
        &[xb, 0.0, ab, 0.0],
        &[xa, ab, 0.0, 0.0],
        &[-ab, -xa, -xb, -1.0],
    ])
}

/// The three-party 5×5 coefficient matrix in the `(φ₁, …, φ₅)` basis with
/// `φ₁ = u₁v₁w₁, φ₂ = u₁v₁w₂, φ₃ = u₁v₂w₁, φ₄ = u₂v₁w₁, φ₅ = u₂v₂w₂`.
pub fn reduced_matrix_n3(xa: f64, xb: f64, xc: f64) -> ComplexMatrix {
    let abc = xa * xb * xc;
    let (ab, ac, bc) = (xa * xb, xa * xc, xb * xc);
    ComplexMatrix::from_real_rows(&[
        &[-2.0, -xc, -xb, -xa, abc],
        &[xc, 0.0, bc, ac, 0.0],
        &[xb, bc, 0.0, ab, 0.0],
        &[xa, ac, ab, 0.0, 0.0],
        // (5,3) is −x_a x_c; a + sign here breaks the block equivalence
        &[-abc, -ab, -ac, -bc, -1.0],
    ])
}

/// `λ²(λ+1)² − x_a²(1−x_a²)x_b²(1−x_b²)`.
pub fn char_poly_n2(xa: f64, xb: f64) -> RealPolynomial {
    let k = xa * xa * (1.0 - xa * xa) * xb * xb * (1.0 - xb * xb);
    RealPolynomial::new(vec![-k, 0.0, 1.0, 2.0, 1.0])
}

/// Closed form of the two-party largest eigenvalue.
pub fn lambda_max_n2(xa: f64, xb: f64) -> f64 {
    let s = xa * (1.0 - xa * xa).max(0.0).sqrt() * xb * (1.0 - xb * xb).max(0.0).sqrt();
    0.5 * ((1.0 + 4.0 * s).sqrt() - 1.0)
}

/// Symmetric functions of the squared overlaps of three parties.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetricInvariants {
    /// `(x_a x_b)² + (x_a x_c)² + (x_b x_c)²`
    pub alpha: f64,
    /// `(x_a x_b x_c)²`
    pub beta: f64,
    /// `x_a² + x_b² + x_c²`
    pub gamma: f64,
}

impl SymmetricInvariants {
    pub fn new(xa: f64, xb: f64, xc: f64) -> Self {
        let (a, b, c) = (xa * xa, xb * xb, xc * xc);
        Self {
            alpha: a * b + a * c + b * c,
            beta: a * b * c,
            gamma: a + b + c,
        }
    }

    pub fn from_params(params: &JordanParams) -> Result<Self> {
        match *params.xs() {
            [xa, xb, xc] => Ok(Self::new(xa, xb, xc)),
            _ => Err(Error::PartyCount(params.n(), "n = 3")),
        }
    }

    /// `f₀ = β(α − 2β − 1)`, the constant term.
    pub fn f0(&self) -> f64 {
        self.beta * (self.alpha - 2.0 * self.beta - 1.0)
    }

    /// `f₁ = β(2γ − α − 3)`, the linear coefficient.
    pub fn f1(&self) -> f64 {
        self.beta * (2.0 * self.gamma - self.alpha - 3.0)
    }

    /// `f₂ = γ − α + β`, the quadratic coefficient.
    pub fn f2(&self) -> f64 {
        self.gamma - self.alpha + self.beta
    }

    /// Ascending coefficients of the degree-5 characteristic polynomial.
    pub fn char_poly_coeffs(&self) -> [f64; 6] {
        [self.f0(), self.f1(), self.f2(), 2.0 + self.f2(), 3.0, 1.0]
    }
}

/// Characteristic polynomial `det(λI − M)` of the three-party 5×5 matrix:
///
/// ```text
/// λ⁵ + 3λ⁴ + (2+γ−α+β)λ³ + (γ−α+β)λ² + β(2γ−α−3)λ + β(α−2β−1)
/// ```
pub fn char_poly_n3(params: &JordanParams) -> Result<RealPolynomial> {
    let inv = SymmetricInvariants::from_params(params)?;
    Ok(RealPolynomial::new(inv.char_poly_coeffs().to_vec()))
}

/// Cubic whose largest root is the largest eigenvalue of `B_n` when all
/// overlaps equal `x`:
///
/// ```text
/// λ³ + [n−(n−1)x²]λ² + (n−1−nx²+x²ⁿ)λ + nx²ⁿ − (n−1)x²ⁿ⁺² − x²
/// ```
pub fn cubic_equal_angle(n: usize, x: f64) -> Result<RealPolynomial> {
    if n < 2 {
        return Err(Error::PartyCount(n, "n >= 2"));
    }
    check_overlap(x)?;
    Ok(RealPolynomial::new(cubic_coeffs(n, x).to_vec()))
}

pub(crate) fn cubic_coeffs(n: usize, x: f64) -> [f64; 4] {
    let nf = n as f64;
    let x2 = x * x;
    let x2n = x2.powi(n as i32);
    [
        nf * x2n - (nf - 1.0) * x2n * x2 - x2,
        nf - 1.0 - nf * x2 + x2n,
        nf - (nf - 1.0) * x2,
        1.0,
    ]
}

/// Largest real root of the equal-angle cubic.
///
/// The roots are eigenvalues of a Hermitian block, hence real; the imaginary
/// tolerance only absorbs the splitting of near-double roots.
pub fn cubic_max_root(n: usize, x: f64) -> Result<f64> {
    let p = cubic_equal_angle(n, x)?;
    p.max_real_root_with(1e-6)?
        .ok_or_else(|| Error::InvalidArgument(format!("cubic for n={n}, x={x} has no real root")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn projectors() {
        let z = projector_z();
        assert_eq!(z.matrix(), &ComplexMatrix::from_diag(&[1.0, 0.0]));
        assert_eq!(z.complement(), ComplexMatrix::from_diag(&[0.0, 1.0]));
        assert!(z.idempotency_error() < 1e-15);

        assert!(projector_tilted(1.0).unwrap().matrix().max_diff(z.matrix()) < 1e-15);
        let orth = projector_tilted(0.0).unwrap();
        assert!(
            orth.matrix()
                .max_diff(&ComplexMatrix::from_diag(&[0.0, 1.0]))
                < 1e-15
        );

        let plus = projector_tilted(FRAC_1_SQRT_2).unwrap();
        assert!(plus
            .matrix()
            .as_slice()
            .iter()
            .all(|v| (v.re - 0.5).abs() < 1e-15));
        assert!(plus.idempotency_error() < 1e-12);
        assert!((plus.matrix().trace().re - 1.0).abs() < 1e-15);

        assert_eq!(projector_tilted(1.2), Err(Error::OverlapOutOfRange(1.2)));
    }

    #[test]
    fn params_validation() {
        assert!(JordanParams::new(vec![0.5]).is_err());
        assert!(JordanParams::new(vec![0.5, -0.1]).is_err());
        assert!(JordanParams::new(vec![0.5, 1.0]).is_ok());
    }

    #[test]
    fn matches_kronecker_construction() {
        use crate::linalg::kron_all;
        let p = JordanParams::new(vec![0.3, 0.9, 0.55, 0.0]).unwrap();
        let q1 = projector_z();
        let q2: Vec<Projector> = p
            .xs()
            .iter()
            .map(|&x| projector_tilted(x).unwrap())
            .collect();
        let mut want = &kron_all(std::iter::repeat_n(q1.matrix(), 4))
            - &kron_all(q2.iter().map(Projector::matrix));
        for (l, ql) in q2.iter().enumerate() {
            let c = ql.complement();
            want = &want - &kron_all((0..4).map(|m| if m == l { &c } else { q1.matrix() }));
        }
        let b = bell_operator(&p).unwrap();
        assert!(b.matrix().max_diff(&want) < 1e-15);
        let v: Vec<Complex64> = (0..16)
            .map(|i| Complex64::new(i as f64 - 7.0, 0.5 * i as f64))
            .collect();
        let (dense, terms) = (b.matrix().matvec(&v), b.apply(&v));
        assert!(dense
            .iter()
            .zip(&terms)
            .all(|(a, c)| (a - c).norm() < 1e-12));
    }

    #[test]
    fn operator_trace_and_hermiticity() {
        for n in 2..=5 {
            let p = JordanParams::new((0..n).map(|i| 0.2 + 0.13 * i as f64).collect()).unwrap();
            let b = bell_operator(&p).unwrap();
            assert!(b.matrix().is_hermitian(HERMITIAN_TOL));
            assert!((b.matrix().trace().re - BellOperator::expected_trace(n)).abs() < 1e-12);
        }
    }

    #[test]
    fn identical_settings_give_no_violation() {
        let b = bell_operator(&JordanParams::equal(2, 1.0).unwrap()).unwrap();
        assert!(b.lambda_max().unwrap().abs() < 1e-12);
    }

    #[test]
    fn two_party_optimum() {
        let b = bell_operator(&JordanParams::equal(2, FRAC_1_SQRT_2).unwrap()).unwrap();
        let want = (2f64.sqrt() - 1.0) / 2.0;
        assert!((b.lambda_max().unwrap() - want).abs() < 1e-12);
        assert!((lambda_max_n2(FRAC_1_SQRT_2, FRAC_1_SQRT_2) - want).abs() < 1e-15);
        let root = char_poly_n2(FRAC_1_SQRT_2, FRAC_1_SQRT_2)
            .max_real_root()
            .unwrap()
            .unwrap();
        assert!((root - want).abs() < 1e-12);
    }

    #[test]
    fn three_party_optimum() {
        let x = ((5f64.sqrt() - 1.0) / 2.0).sqrt();
        let b = bell_operator(&JordanParams::equal(3, x).unwrap()).unwrap();
        assert!((b.lambda_max().unwrap() - (5f64.sqrt() - 2.0)).abs() < 1e-12);
        assert!((x - 0.786151).abs() < 1e-6);
    }

    #[test]
    fn explicit_reductions_match_general_form() {
        let p2 = JordanParams::new(vec![0.3, 0.7]).unwrap();
        assert!(reduced_matrix(&p2).max_diff(&reduced_matrix_n2(0.3, 0.7)) < 1e-15);
        let p3 = JordanParams::new(vec![0.3, 0.6, 0.8]).unwrap();
        assert!(reduced_matrix(&p3).max_diff(&reduced_matrix_n3(0.3, 0.6, 0.8)) < 1e-15);
    }

    #[test]
    fn zero_overlap_reductions() {
        // diag(-1, 0, 0, -1) and diag(-2, 0, 0, 0, -1)
        assert_eq!(
            reduced_matrix_n2(0.0, 0.0),
            ComplexMatrix::from_diag(&[-1.0, 0.0, 0.0, -1.0])
        );
        assert_eq!(
            reduced_matrix_n3(0.0, 0.0, 0.0),
            ComplexMatrix::from_diag(&[-2.0, 0.0, 0.0, 0.0, -1.0])
        );
        let cp = char_poly_n3(&JordanParams::equal(3, 0.0).unwrap()).unwrap();
        assert_eq!(cp.coeffs(), &[0.0, 0.0, 0.0, 2.0, 3.0, 1.0]);
    }

    #[test]
    fn invariants_definitions() {
        let s = SymmetricInvariants::new(0.3, 0.6, 0.8);
        assert!((s.beta - (0.3f64 * 0.6 * 0.8).powi(2)).abs() < 1e-15);
        assert!((s.gamma - (0.09 + 0.36 + 0.64)).abs() < 1e-15);
        assert!((s.alpha - (0.0324 + 0.0576 + 0.2304)).abs() < 1e-15);
        assert!(SymmetricInvariants::from_params(&JordanParams::equal(2, 0.5).unwrap()).is_err());
    }

    #[test]
    fn cubic_table_row_n7() {
        let r = cubic_max_root(7, 0.895745).unwrap();
        assert!((r - 0.266998).abs() < 1e-6);
        assert!(cubic_equal_angle(1, 0.5).is_err());
    }

    #[test]
    fn dense_limit() {
        let p = JordanParams::equal(11, 0.5).unwrap();
        assert!(matches!(bell_operator(&p), Err(Error::PartyCount(11, _))));
    }
}
