use num_complex::Complex64;
use proptest::prelude::*;

use jordan_bell::bell::{
    bell_operator, char_poly_n3, cubic_max_root, lambda_max_n2, projector_tilted, reduced_matrix,
    JordanParams, Projector,
};
use jordan_bell::cli::{game_report, run_from, state_report, StateName};
use jordan_bell::lhv::{
    all_strategies, bell_functional, game_measurements, game_quantum_simulated, game_quantum_value,
    DeterministicStrategy,
};
use jordan_bell::linalg::{
    hermitian_eigen, kron, poly_roots, real_eigenvalues, ComplexMatrix, RealPolynomial,
};
use jordan_bell::optimize::{maximize_full, violation_curve, ViolationResult};
use jordan_bell::states::{violation_of, MeasurementSet, PureState};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn complex() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(a, b)| c(a, b))
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec(complex(), rows * cols)
        .prop_map(move |d| ComplexMatrix::from_vec(rows, cols, d).unwrap())
}

fn hermitian(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    matrix(n, n).prop_map(|m| (&m + &m.adjoint()).scale(0.5))
}

fn unit_vector(dim: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec(complex(), dim).prop_filter_map("zero vector", |v| {
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        (norm > 1e-3).then(|| v.iter().map(|z| z / norm).collect())
    })
}

fn state(n: usize) -> impl Strategy<Value = PureState> {
    unit_vector(1 << n).prop_map(|v| PureState::normalized(v).unwrap())
}

fn projector() -> impl Strategy<Value = Projector> {
    unit_vector(2).prop_map(|v| Projector::onto([v[0], v[1]]))
}

fn overlaps(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0..=1.0f64, n)
}

/// Characteristic polynomial `det(λI − A)` by Faddeev–LeVerrier.
fn faddeev_leverrier(a: &ComplexMatrix) -> Vec<f64> {
    let n = a.rows();
    let id = ComplexMatrix::identity(n);
    let mut coeffs = vec![c(0.0, 0.0); n + 1];
    coeffs[n] = c(1.0, 0.0);
    let mut m = ComplexMatrix::zeros(n, n);
    for k in 1..=n {
        m = &(a * &m) + &id.scale(coeffs[n - k + 1].re);
        let am = a * &m;
        coeffs[n - k] = am.trace() * (-1.0 / k as f64);
    }
    coeffs.iter().map(|z| z.re).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kron_is_associative(a in matrix(2, 2), b in matrix(2, 3), d in matrix(3, 2)) {
        let left = kron(&kron(&a, &b), &d);
        let right = kron(&a, &kron(&b, &d));
        prop_assert!(left.max_diff(&right) < 1e-14);
    }

    #[test]
    fn kron_matches_index_loop(a in matrix(2, 2), b in matrix(2, 2)) {
        let k = kron(&a, &b);
        for i in 0..2 {
            for j in 0..2 {
                for p in 0..2 {
                    for q in 0..2 {
                        prop_assert_eq!(k[(2 * i + p, 2 * j + q)], a[(i, j)] * b[(p, q)]);
                    }
                }
            }
        }
    }

    #[test]
    fn eigen_reconstructs(h in hermitian(6)) {
        let e = hermitian_eigen(&h).unwrap();
        prop_assert!(e.reconstruction_error(&h) <= 1e-10 * h.max_abs().max(1.0));
        prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        let v = &e.vectors;
        let gram = &v.adjoint() * v;
        prop_assert!(gram.max_diff(&ComplexMatrix::identity(6)) < 1e-12);
    }

    #[test]
    fn eigenvalues_are_characteristic_roots(h in hermitian(8)) {
        let e = hermitian_eigen(&h).unwrap();
        let p = RealPolynomial::new(faddeev_leverrier(&h));
        let mut roots: Vec<f64> = poly_roots(&p).unwrap().iter().map(|z| z.re).collect();
        roots.sort_by(f64::total_cmp);
        for (r, v) in roots.iter().zip(&e.values) {
            prop_assert!((r - v).abs() < 1e-6, "{:?} vs {:?}", roots, e.values);
        }
    }

    #[test]
    fn planted_roots_are_recovered(mut planted in prop::collection::vec(-3.0..3.0f64, 1..7)) {
        planted.sort_by(f64::total_cmp);
        // keep the roots separated so they are well conditioned
        prop_assume!(planted.windows(2).all(|w| w[1] - w[0] > 0.05));
        let p = RealPolynomial::from_roots(&planted);
        let scale = p.coeff_l1();
        let roots = poly_roots(&p).unwrap();
        for z in &roots {
            prop_assert!(p.eval_complex(*z).norm() <= 1e-8 * scale);
        }
        let mut re: Vec<f64> = roots.iter().map(|z| z.re).collect();
        re.sort_by(f64::total_cmp);
        for (a, b) in re.iter().zip(&planted) {
            prop_assert!((a - b).abs() < 1e-6);
        }
    }

    #[test]
    fn reduced_matrix_carries_the_nonzero_spectrum(n in 2usize..=5, xs in overlaps(5)) {
        let p = JordanParams::new(xs[..n].to_vec()).unwrap();
        let mut full: Vec<f64> = bell_operator(&p).unwrap().eigen().unwrap().values
            .into_iter().filter(|v| v.abs() > 1e-9).collect();
        let mut red: Vec<f64> = real_eigenvalues(&reduced_matrix(&p)).unwrap()
            .iter().map(|z| z.re).filter(|v| v.abs() > 1e-9).collect();
        full.sort_by(f64::total_cmp);
        red.sort_by(f64::total_cmp);
        prop_assume!(full.len() == red.len());
        for (a, b) in full.iter().zip(&red) {
            prop_assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn operator_trace_is_minus_n(n in 2usize..=6, xs in overlaps(6)) {
        let b = bell_operator(&JordanParams::new(xs[..n].to_vec()).unwrap()).unwrap();
        prop_assert!((b.matrix().trace().re + n as f64).abs() < 1e-12);
        prop_assert!(b.matrix().is_hermitian(1e-12));
    }

    #[test]
    fn cubic_matches_operator_on_equal_angles(n in 2usize..=7, x in 0.0..=1.0f64) {
        let op = bell_operator(&JordanParams::equal(n, x).unwrap()).unwrap().lambda_max().unwrap();
        prop_assert!((op - cubic_max_root(n, x).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn two_party_cubic_matches_quartic(x in 0.0..=1.0f64) {
        prop_assert!((cubic_max_root(2, x).unwrap() - lambda_max_n2(x, x)).abs() < 1e-9);
    }

    #[test]
    fn three_party_polynomial_is_symmetric(a in 0.0..=1.0f64, b in 0.0..=1.0f64, d in 0.0..=1.0f64) {
        let f = |v: Vec<f64>| char_poly_n3(&JordanParams::new(v).unwrap()).unwrap();
        let base = f(vec![a, b, d]);
        for perm in [vec![b, a, d], vec![d, b, a], vec![a, d, b], vec![b, d, a], vec![d, a, b]] {
            let other = f(perm);
            for (p, q) in base.coeffs().iter().zip(other.coeffs()) {
                prop_assert!((p - q).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn violation_matches_operator_expectation(s in state(3), ps in prop::collection::vec(projector(), 6)) {
        let settings = vec![
            [ps[0].clone(), ps[1].clone()],
            [ps[2].clone(), ps[3].clone()],
            [ps[4].clone(), ps[5].clone()],
        ];
        let meas = MeasurementSet::new(settings).unwrap();
        let from_probs = violation_of(&s, &meas).unwrap();
        let op = meas.bell_operator();
        let from_op = op.sandwich(s.amplitudes(), s.amplitudes()).re;
        prop_assert!((from_probs - from_op).abs() < 1e-12);
    }

    #[test]
    fn tilted_measurements_match_the_operator(s in state(3), xs in overlaps(3)) {
        let meas = MeasurementSet::tilted(&xs).unwrap();
        let b = bell_operator(&JordanParams::new(xs).unwrap()).unwrap();
        prop_assert!((violation_of(&s, &meas).unwrap() - b.expectation(s.amplitudes())).abs() < 1e-12);
    }

    #[test]
    fn quantum_value_bounded_by_top_eigenvalue(s in state(3), xs in overlaps(3)) {
        let b = bell_operator(&JordanParams::new(xs).unwrap()).unwrap();
        prop_assert!(b.expectation(s.amplitudes()) <= b.lambda_max().unwrap() + 1e-12);
    }

    #[test]
    fn state_triples_round_trip(s in state(3)) {
        let back = PureState::from_triples(&s.to_triples()).unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn projectors_are_idempotent(x in 0.0..=1.0f64) {
        prop_assert!(projector_tilted(x).unwrap().idempotency_error() < 1e-15);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn mixtures_of_local_strategies_never_violate(weights in prop::collection::vec(0.0..1.0f64, 64)) {
        // evaluate the inequality on the mixed outcome distribution
        let total: f64 = weights.iter().sum();
        prop_assume!(total > 0.0);
        let strategies: Vec<DeterministicStrategy> = all_strategies(3).collect();
        let prob = |event: &dyn Fn(&DeterministicStrategy) -> bool| -> f64 {
            strategies.iter().zip(&weights).filter(|(s, _)| event(s)).map(|(_, w)| w / total).sum()
        };
        let lhs = prob(&|s| s.outcomes().iter().all(|o| o.0 == 1));
        let mut rhs = prob(&|s| s.outcomes().iter().all(|o| o.1 == 1));
        for l in 0..3 {
            rhs += prob(&|s| {
                s.outcomes().iter().enumerate().all(|(m, o)| if m == l { o.1 == -1 } else { o.0 == 1 })
            });
        }
        prop_assert!(lhs - rhs <= 1e-12);
        // linearity: the same value from the deterministic functional
        let linear: f64 = strategies.iter().zip(&weights).map(|(s, w)| w / total * bell_functional(s)).sum();
        prop_assert!((linear - (lhs - rhs)).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn game_simulation_matches_formula(s in state(3), x in 0.0..=1.0f64) {
        let meas = game_measurements(x).unwrap();
        let sim = game_quantum_simulated(&s, &meas).unwrap();
        let formula = game_quantum_value(violation_of(&s, &meas).unwrap());
        prop_assert!((sim - formula).abs() < 1e-10);
    }
}

#[test]
fn full_search_is_reproducible() {
    let a = maximize_full(3, 4, 42).unwrap();
    let b = maximize_full(3, 4, 42).unwrap();
    assert_eq!(a, b);
}

#[test]
fn identical_configs_give_identical_output() {
    for args in [
        vec![
            "jordan-bell",
            "violation",
            "--n",
            "3",
            "--full",
            "--restarts",
            "3",
            "--seed",
            "5",
            "--format",
            "json",
        ],
        vec!["jordan-bell", "table", "--n-max", "9", "--format", "csv"],
        vec!["jordan-bell", "verify", "--format", "json"],
    ] {
        let a = run_from(args.clone());
        let b = run_from(args);
        assert_eq!(a, b);
    }
}

#[test]
fn json_round_trips() {
    let v = run_from(["jordan-bell", "violation", "--n", "4", "--format", "json"]);
    let parsed: ViolationResult = serde_json::from_str(&v.stdout).unwrap();
    assert_eq!(
        parsed,
        jordan_bell::optimize::maximize_equal_angle(4).unwrap()
    );

    let t = run_from(["jordan-bell", "table", "--n-max", "8", "--format", "json"]);
    let rows: Vec<jordan_bell::optimize::CurvePoint> = serde_json::from_str(&t.stdout).unwrap();
    assert_eq!(rows, violation_curve(3, 8).unwrap());

    let g = run_from(["jordan-bell", "game", "--format", "json"]);
    let parsed: jordan_bell::cli::GameReport = serde_json::from_str(&g.stdout).unwrap();
    assert_eq!(parsed, game_report().unwrap());

    let s = run_from(["jordan-bell", "state", "psi3", "--format", "json"]);
    let parsed: jordan_bell::cli::StateReport = serde_json::from_str(&s.stdout).unwrap();
    assert_eq!(parsed, state_report(StateName::Psi3).unwrap());

    let k = run_from(["jordan-bell", "classical", "--n", "4", "--format", "json"]);
    let parsed: jordan_bell::cli::ClassicalReport = serde_json::from_str(&k.stdout).unwrap();
    assert_eq!(
        serde_json::to_string_pretty(&parsed).unwrap() + "\n",
        k.stdout
    );

    let r = run_from(["jordan-bell", "verify", "--format", "json"]);
    let parsed: jordan_bell::verify::VerifyReport = serde_json::from_str(&r.stdout).unwrap();
    assert!(parsed.passed);
    assert_eq!(
        serde_json::to_string_pretty(&parsed).unwrap() + "\n",
        r.stdout
    );
}

#[test]
fn csv_is_plain() {
    let t = run_from(["jordan-bell", "table", "--n-max", "12", "--format", "csv"]);
    assert!(!t.stdout.contains('\r'));
    for line in t.stdout.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 3);
        for f in &fields[1..] {
            assert!(
                f.chars()
                    .all(|ch| ch.is_ascii_digit() || ch == '.' || ch == '-'),
                "{f}"
            );
            assert_eq!(f.split('.').nth(1).map(str::len), Some(6));
        }
    }
    let rows: Vec<f64> = t
        .stdout
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
        .collect();
    assert!(rows.windows(2).all(|w| w[1] > w[0]));
}
