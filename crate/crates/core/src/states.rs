//! Named states and measurements that attain or illustrate the violations.
//!
//! Basis order: party 0 is the most significant qubit, so `|abc⟩` has index
//! `4a + 2b + c`.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bell::{projector_tilted, projector_z, Projector};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, inner, kron_all, vec_norm, ComplexMatrix};

const NORM_TOL: f64 = 1e-12;

fn re(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

/// Single-qubit kets used by the named states.
pub mod kets {
    use super::*;

    pub fn zero() -> [Complex64; 2] {
        [re(1.0), re(0.0)]
    }

    pub fn one() -> [Complex64; 2] {
        [re(0.0), re(1.0)]
    }

    pub fn plus_x() -> [Complex64; 2] {
        [re(FRAC_1_SQRT_2), re(FRAC_1_SQRT_2)]
    }

    pub fn minus_x() -> [Complex64; 2] {
        [re(FRAC_1_SQRT_2), re(-FRAC_1_SQRT_2)]
    }

    /// `x|0⟩ + √(1−x²)|1⟩`
    pub fn u_plus(x: f64) -> [Complex64; 2] {
        [re(x), re((1.0 - x * x).max(0.0).sqrt())]
    }

    /// `−√(1−x²)|0⟩ + x|1⟩`
    pub fn u_minus(x: f64) -> [Complex64; 2] {
        [re(-(1.0 - x * x).max(0.0).sqrt()), re(x)]
    }

    /// Tensor product of single-qubit kets, first factor most significant.
    pub fn product(factors: &[[Complex64; 2]]) -> Vec<Complex64> {
        factors.iter().fold(vec![re(1.0)], |acc, k| {
            acc.iter().flat_map(|a| [a * k[0], a * k[1]]).collect()
        })
    }
}

/// Unit-norm pure state of `n` qubits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PureState {
    n: usize,
    amplitudes: Vec<Complex64>,
}

/// `(basis index, re, im)`.
pub type AmplitudeTriple = (usize, f64, f64);

impl PureState {
    /// Accepts amplitudes already normalized to within `1e-12`.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let dim = amplitudes.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "state dimension {dim} is not a power of two"
            )));
        }
        let norm = vec_norm(&amplitudes);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidArgument(format!(
                "state norm {norm} is not 1"
            )));
        }
        Ok(Self {
            n: dim.trailing_zeros() as usize,
            amplitudes,
        })
    }

    /// Normalizes, then fixes the global phase.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = vec_norm(&amplitudes);
        if norm == 0.0 {
            return Err(Error::InvalidArgument("zero vector".into()));
        }
        let v = amplitudes.iter().map(|z| z / norm).collect();
        Ok(Self::new(v)?.canonical_phase())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        vec_norm(&self.amplitudes)
    }

    /// Rotates the global phase so the first nonzero amplitude is real and
    /// positive.
    pub fn canonical_phase(mut self) -> Self {
        if let Some(first) = self.amplitudes.iter().find(|z| z.norm() > 1e-14) {
            let phase = first.conj() / first.norm();
            self.amplitudes.iter_mut().for_each(|z| *z *= phase);
        }
        self
    }

    /// `|⟨self|other⟩|`.
    pub fn overlap(&self, other: &[Complex64]) -> f64 {
        inner(&self.amplitudes, other).norm()
    }

    pub fn density_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.amplitudes, &self.amplitudes)
    }

    /// Reduced density matrix of one qubit.
    pub fn marginal(&self, qubit: usize) -> ComplexMatrix {
        self.density_matrix().reduce_to_qubit(self.n, qubit)
    }

    pub fn to_triples(&self) -> Vec<AmplitudeTriple> {
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(i, z)| (i, z.re, z.im))
            .collect()
    }

    pub fn from_triples(triples: &[AmplitudeTriple]) -> Result<Self> {
        let dim = triples
            .iter()
            .map(|t| t.0 + 1)
            .max()
            .unwrap_or(0)
            .next_power_of_two();
        let mut amps = vec![re(0.0); dim.max(2)];
        for &(i, r, im) in triples {
            amps[i] = Complex64::new(r, im);
        }
        Self::new(amps)
    }

    /// `⊗_l ops[l]` applied to the state, one qubit at a time.
    pub fn apply_local(&self, ops: &[&ComplexMatrix]) -> Vec<Complex64> {
        assert_eq!(ops.len(), self.n, "one operator per qubit");
        let mut v = self.amplitudes.clone();
        for (q, op) in ops.iter().enumerate() {
            let shift = self.n - 1 - q;
            let mask = 1usize << shift;
            for i in 0..v.len() {
                if i & mask != 0 {
                    continue;
                }
                let (a0, a1) = (v[i], v[i | mask]);
                v[i] = op[(0, 0)] * a0 + op[(0, 1)] * a1;
                v[i | mask] = op[(1, 0)] * a0 + op[(1, 1)] * a1;
            }
        }
        v
    }

    /// Probability of the product event given by one projector per party.
    pub fn event_probability(&self, projectors: &[&ComplexMatrix]) -> f64 {
        vec_norm(&self.apply_local(projectors)).powi(2)
    }
}

/// Two binary observables per party, each given by its `+1` projector.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSet {
    settings: Vec<[Projector; 2]>,
}

impl MeasurementSet {
    pub fn new(settings: Vec<[Projector; 2]>) -> Result<Self> {
        for pair in &settings {
            for p in pair {
                if p.idempotency_error() > 1e-12 || !p.matrix().is_hermitian(1e-12) {
                    return Err(Error::InvalidArgument(
                        "projector is not a Hermitian idempotent".into(),
                    ));
                }
            }
        }
        Ok(Self { settings })
    }

    /// `σ_z` for setting 1, `σ_x` for setting 2 on every party.
    pub fn z_x(n: usize) -> Self {
        Self::tilted(&vec![FRAC_1_SQRT_2; n]).expect("valid overlap")
    }

    /// `|0⟩⟨0|` for setting 1 and `|u₊(x_l)⟩⟨u₊(x_l)|` for setting 2.
    pub fn tilted(xs: &[f64]) -> Result<Self> {
        let settings = xs
            .iter()
            .map(|&x| Ok([projector_z(), projector_tilted(x)?]))
            .collect::<Result<_>>()?;
        Ok(Self { settings })
    }

    pub fn n(&self) -> usize {
        self.settings.len()
    }

    /// `setting` is 0 or 1.
    pub fn projector(&self, party: usize, setting: usize) -> &Projector {
        &self.settings[party][setting]
    }

    /// Bell operator assembled from these projectors by Kronecker products.
    pub fn bell_operator(&self) -> ComplexMatrix {
        let n = self.n();
        let first: Vec<&ComplexMatrix> = self.settings.iter().map(|s| s[0].matrix()).collect();
        let second: Vec<&ComplexMatrix> = self.settings.iter().map(|s| s[1].matrix()).collect();
        let mut b = &kron_all(first.iter().copied()) - &kron_all(second.iter().copied());
        for l in 0..n {
            let comp = self.settings[l][1].complement();
            let term = kron_all((0..n).map(|m| if m == l { &comp } else { first[m] }));
            b = &b - &term;
        }
        b
    }
}

/// Outcome probabilities entering the inequality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityTerms {
    /// `P(all setting-1 outcomes +1)`
    pub lhs_first: f64,
    /// `P(all setting-2 outcomes +1)`
    pub rhs_all_second: f64,
    /// `P(party l setting 2 = −1, others setting 1 = +1)` per party
    pub rhs_flips: Vec<f64>,
}

impl InequalityTerms {
    /// LHS − RHS.
    pub fn delta(&self) -> f64 {
        self.lhs_first - self.rhs_all_second - self.rhs_flips.iter().sum::<f64>()
    }
}

/// The individual probabilities of the inequality for `state` under `meas`.
pub fn inequality_terms(state: &PureState, meas: &MeasurementSet) -> Result<InequalityTerms> {
    if state.n() != meas.n() {
        return Err(Error::DimensionMismatch {
            expected: meas.n(),
            found: state.n(),
        });
    }
    let n = state.n();
    let first: Vec<&ComplexMatrix> = (0..n).map(|l| meas.projector(l, 0).matrix()).collect();
    let second: Vec<&ComplexMatrix> = (0..n).map(|l| meas.projector(l, 1).matrix()).collect();
    let complements: Vec<ComplexMatrix> =
        (0..n).map(|l| meas.projector(l, 1).complement()).collect();
    let rhs_flips = (0..n)
        .map(|l| {
            let mut ops = first.clone();
            ops[l] = &complements[l];
            state.event_probability(&ops)
        })
        .collect();
    Ok(InequalityTerms {
        lhs_first: state.event_probability(&first),
        rhs_all_second: state.event_probability(&second),
        rhs_flips,
    })
}

/// LHS − RHS of the inequality evaluated from joint outcome probabilities.
pub fn violation_of(state: &PureState, meas: &MeasurementSet) -> Result<f64> {
    Ok(inequality_terms(state, meas)?.delta())
}

/// Two-party state attaining `(√2 − 1)/2` with `σ_z`/`σ_x` observables.
pub fn psi2() -> PureState {
    let s = 1.0 + SQRT_2;
    let k = 0.5 * (1.0 / (2.0 + SQRT_2)).sqrt();
    PureState::new(vec![re(k * s), re(k), re(k), re(-k * s)]).expect("unit norm")
}

/// Conditional probability that Bob finds `bob` given Alice found `alice`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Correspondence {
    /// Alice's basis then Bob's, e.g. `"zx"`
    pub bases: String,
    pub alice: String,
    pub bob: String,
    pub probability: f64,
}

/// The eight basis-pair correspondences of [`psi2`].
pub fn correlation_table_psi2() -> Vec<Correspondence> {
    use kets::*;
    type Ket = fn() -> [Complex64; 2];
    type Row = (&'static str, [(&'static str, Ket, &'static str, Ket); 2]);
    let table: [Row; 4] = [
        ("zz", [("|0>", zero, "|0>", zero), ("|1>", one, "|1>", one)]),
        (
            "zx",
            [("|0>", zero, "|+x>", plus_x), ("|1>", one, "|-x>", minus_x)],
        ),
        (
            "xz",
            [("|+x>", plus_x, "|0>", zero), ("|-x>", minus_x, "|1>", one)],
        ),
        (
            "xx",
            [
                ("|+x>", plus_x, "|-x>", minus_x),
                ("|-x>", minus_x, "|+x>", plus_x),
            ],
        ),
    ];
    let psi = psi2();
    let id = ComplexMatrix::identity(2);
    let mut out = Vec::with_capacity(8);
    for (bases, pairs) in table {
        for (a_name, a, b_name, b) in pairs {
            let pa = ComplexMatrix::outer(&a(), &a());
            let pb = ComplexMatrix::outer(&b(), &b());
            let joint = psi.event_probability(&[&pa, &pb]);
            let marginal = psi.event_probability(&[&pa, &id]);
            out.push(Correspondence {
                bases: bases.to_string(),
                alice: a_name.to_string(),
                bob: b_name.to_string(),
                probability: joint / marginal,
            });
        }
    }
    out
}

/// Three-qubit state with LHS `1/8` and every RHS term zero under `σ_z`/`σ_x`.
pub fn psi3_prime() -> PureState {
    let k = 1.0 / (2.0 * SQRT_2);
    let signs = [1.0, 1.0, 1.0, -1.0, 1.0, -1.0, -1.0, -1.0];
    PureState::new(signs.iter().map(|s| re(s * k)).collect()).expect("unit norm")
}

/// `{|+x,+x,+x⟩, |−x,0,0⟩, |0,−x,0⟩, |0,0,−x⟩}`, the span [`psi3_prime`]
/// avoids.
pub fn psi3_prime_excluded_span() -> [Vec<Complex64>; 4] {
    use kets::*;
    [
        product(&[plus_x(), plus_x(), plus_x()]),
        product(&[minus_x(), zero(), zero()]),
        product(&[zero(), minus_x(), zero()]),
        product(&[zero(), zero(), minus_x()]),
    ]
}

/// The three-qubit operator with `σ_z`/`σ_x` observables.
pub fn b3_prime() -> ComplexMatrix {
    let [ppp, mzz, zmz, zzm] = psi3_prime_excluded_span();
    let zzz = kets::product(&[kets::zero(); 3]);
    let proj = |v: &Vec<Complex64>| ComplexMatrix::outer(v, v);
    let mut b = &proj(&zzz) - &proj(&ppp);
    for v in [mzz, zmz, zzm] {
        b = &b - &proj(&v);
    }
    b
}

/// Ascending eigenvalues of [`b3_prime`].
pub fn b3_prime_spectrum() -> Result<Vec<f64>> {
    Ok(hermitian_eigen(&b3_prime())?.values)
}

/// Overlap `x*` with `x*² = (√5 − 1)/2` that maximizes the three-party
/// violation.
pub fn x_star_n3() -> f64 {
    ((5f64.sqrt() - 1.0) / 2.0).sqrt()
}

fn psi3_coefficients() -> (f64, f64, f64) {
    let r5 = 5f64.sqrt();
    (
        (4.0 - 8.0 / r5).sqrt(),
        (-1.5 + 7.0 / (2.0 * r5)).sqrt(),
        (1.0 - 2.0 / r5).sqrt(),
    )
}

/// Optimal three-party state for `|0⟩⟨0|` and `|u₊(x*)⟩⟨u₊(x*)|` observables:
///
/// `a|000⟩ + b(|001⟩ + |010⟩ + |100⟩ − |111⟩) − c(|011⟩ + |101⟩ + |110⟩)`
///
/// with `a = √(4 − 8/√5)`, `b = √(−3/2 + 7/(2√5))`, `c = √(1 − 2/√5)`.
pub fn psi3() -> PureState {
    let (a, b, c) = psi3_coefficients();
    PureState::normalized(vec![
        re(a),
        re(b),
        re(b),
        re(-c),
        re(b),
        re(-c),
        re(-c),
        re(-b),
    ])
    .expect("nonzero")
}

/// [`psi3`] with the odd-weight amplitudes negated, i.e. `σ_z⊗σ_z⊗σ_z`
/// applied. It is optimal for the setting-2 vector `x|0⟩ − √(1−x²)|1⟩`.
pub fn psi3_reflected() -> PureState {
    let amps = psi3()
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(i, z)| if i.count_ones() % 2 == 1 { -z } else { *z })
        .collect();
    PureState::normalized(amps).expect("nonzero")
}

/// Single-party marginals compared against the maximally mixed state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GhzReport {
    /// `‖ρ_l − I/2‖_max` per party
    pub distances: Vec<f64>,
    pub max_distance: f64,
    /// all marginals maximally mixed within the tolerance
    pub maximally_mixed: bool,
}

/// A GHZ-type state has every single-party marginal equal to `I/2`.
pub fn ghz_check(state: &PureState, tol: f64) -> GhzReport {
    let half = ComplexMatrix::identity(2).scale(0.5);
    let distances: Vec<f64> = (0..state.n())
        .map(|q| state.marginal(q).max_diff(&half))
        .collect();
    let max_distance = distances.iter().copied().fold(0.0, f64::max);
    GhzReport {
        maximally_mixed: max_distance <= tol,
        distances,
        max_distance,
    }
}

pub fn ghz(n: usize) -> PureState {
    let mut amps = vec![re(0.0); 1 << n];
    amps[0] = re(FRAC_1_SQRT_2);
    amps[(1 << n) - 1] = re(FRAC_1_SQRT_2);
    PureState::new(amps).expect("unit norm")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bell::{bell_operator, JordanParams};

    #[test]
    fn named_states_are_normalized() {
        for s in [psi2(), psi3_prime(), psi3(), psi3_reflected(), ghz(3)] {
            assert!((s.norm() - 1.0).abs() < 1e-12);
        }
        let (a, b, c) = psi3_coefficients();
        assert!((a * a + 4.0 * b * b + 3.0 * c * c - 1.0).abs() < 1e-12);
    }

    #[test]
    fn psi2_is_maximally_entangled() {
        let e = hermitian_eigen(&psi2().marginal(0)).unwrap();
        assert!(e.values.iter().all(|v| (v - 0.5).abs() < 1e-12));
    }

    #[test]
    fn correlations_all_equal() {
        let want = (2.0 + SQRT_2) / 4.0;
        let table = correlation_table_psi2();
        assert_eq!(table.len(), 8);
        for c in table {
            assert!((c.probability - want).abs() < 1e-12, "{c:?}");
        }
    }

    #[test]
    fn psi3_prime_forms() {
        use kets::*;
        let p = psi3_prime();
        for v in psi3_prime_excluded_span() {
            assert!(p.overlap(&v) < 1e-12);
        }
        let xb: Vec<Complex64> = [
            product(&[plus_x(), plus_x(), minus_x()]),
            product(&[plus_x(), minus_x(), plus_x()]),
            product(&[minus_x(), plus_x(), plus_x()]),
            product(&[minus_x(), minus_x(), minus_x()])
                .iter()
                .map(|z| -z)
                .collect(),
        ]
        .iter()
        .fold(vec![re(0.0); 8], |acc, v| {
            acc.iter().zip(v).map(|(a, b)| a + b * 0.5).collect()
        });
        assert!(p.overlap(&xb) > 1.0 - 1e-12);
    }

    #[test]
    fn z_x_measurements_recover_psi2_violation() {
        let v = violation_of(&psi2(), &MeasurementSet::z_x(2)).unwrap();
        assert!((v - (SQRT_2 - 1.0) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn product_state_matches_operator() {
        let zzz = PureState::new(kets::product(&[kets::zero(); 3])).unwrap();
        let meas = MeasurementSet::z_x(3);
        let by_prob = violation_of(&zzz, &meas).unwrap();
        let by_op = meas
            .bell_operator()
            .sandwich(zzz.amplitudes(), zzz.amplitudes())
            .re;
        assert!((by_prob - by_op).abs() < 1e-12);
        // 1 − 1/8 − 3·(1/2)
        assert!((by_prob + 0.625).abs() < 1e-12);
    }

    #[test]
    fn dimension_mismatch() {
        assert!(violation_of(&psi2(), &MeasurementSet::z_x(3)).is_err());
    }

    #[test]
    fn psi3_is_top_eigenvector() {
        let b = bell_operator(&JordanParams::equal(3, x_star_n3()).unwrap()).unwrap();
        let (_, v) = b.max_eigenpair().unwrap();
        assert!(psi3().overlap(&v) > 1.0 - 1e-10);
        assert!((b.expectation(psi3().amplitudes()) - (5f64.sqrt() - 2.0)).abs() < 1e-12);
    }

    #[test]
    fn ghz_reports() {
        let g = ghz_check(&ghz(3), 1e-12);
        assert!(g.maximally_mixed && g.max_distance < 1e-15);
        let prod = PureState::new(kets::product(&[kets::zero(); 3])).unwrap();
        assert!((ghz_check(&prod, 1e-12).max_distance - 0.5).abs() < 1e-15);
        assert!(ghz_check(&psi3(), 1e-12).max_distance > 0.01);
    }

    #[test]
    fn canonical_phase_and_triples() {
        let s = PureState::normalized(vec![re(0.0), Complex64::new(0.0, -2.0)]).unwrap();
        assert!((s.amplitudes()[1] - re(1.0)).norm() < 1e-15);
        let back = PureState::from_triples(&psi3().to_triples()).unwrap();
        assert_eq!(back, psi3());
    }
}
