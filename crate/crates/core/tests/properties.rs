use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use qpl_core::moments::{moment_eigenvalues_numeric, MomentMatrix};
use qpl_core::povm::{equatorial_axes, equatorial_max_m_norm};
use qpl_core::qmath::{bloch_trace_product, eig_hermitian, partial_trace_first, tensor};
use qpl_core::seqsim::sequential_correlation;
use qpl_core::*;

fn bloch() -> impl Strategy<Value = BlochOperator> {
    (-2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64).prop_map(|(c0, x, y, z)| BlochOperator::new(c0, [x, y, z]))
}

fn unit() -> impl Strategy<Value = UnitVector3> {
    (0.0..PI, 0.0..2.0 * PI)
        .prop_map(|(t, p)| UnitVector3::new([t.sin() * p.cos(), t.sin() * p.sin(), t.cos()]).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn dense_spectrum_matches_bloch(op in bloch()) {
        let e = eig_hermitian(&ComplexMatrix::from_bloch(&op)).unwrap();
        let [lo, hi] = op.eigenvalues();
        prop_assert!((e.values[0] - lo).abs() < 1e-10);
        prop_assert!((e.values[1] - hi).abs() < 1e-10);
    }

    #[test]
    fn trace_product_matches_dense(a in bloch(), b in bloch()) {
        let dense = (&ComplexMatrix::from_bloch(&a) * &ComplexMatrix::from_bloch(&b)).trace();
        prop_assert!((dense.re - bloch_trace_product(&a, &b)).abs() < 1e-12);
        prop_assert!(dense.im.abs() < 1e-12);
    }

    #[test]
    fn partial_trace_factorizes(a in bloch(), b in bloch()) {
        let (da, db) = (ComplexMatrix::from_bloch(&a), ComplexMatrix::from_bloch(&b));
        let pt = partial_trace_first(&tensor(&da, &db).unwrap()).unwrap();
        prop_assert!((&pt - &db.scale(da.trace())).frobenius_norm() < 1e-12);
    }

    #[test]
    fn sandwich_matches_dense(m in bloch(), r in bloch()) {
        let dm = ComplexMatrix::from_bloch(&m);
        let dense = &(&dm * &ComplexMatrix::from_bloch(&r)) * &dm;
        let via = ComplexMatrix::from_bloch(&m.sandwich(&r));
        prop_assert!((&dense - &via).frobenius_norm() < 1e-12);
    }

    #[test]
    fn moment_closed_form_matches_dense(u in -1.0..1.0f64, v in -1.0..1.0f64, w in -1.0..1.0f64) {
        let m = MomentMatrix { k: 2, u, v, w };
        let mut closed = moment_eigenvalues(&m).to_vec();
        closed.sort_by(f64::total_cmp);
        let numeric = moment_eigenvalues_numeric(&m).unwrap();
        for (a, b) in closed.iter().zip(&numeric) {
            prop_assert!((a - b).abs() < 1e-10);
        }
    }
}

fn bloch_from_parts(c0: f64, c: [f64; 3]) -> ComplexMatrix {
    ComplexMatrix::from_bloch(&BlochOperator::new(c0, c))
}

#[test]
fn four_by_four_reconstruction_residual() {
    let mut seed = 7u64;
    let mut next = || {
        seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((seed >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
    };
    for _ in 0..500 {
        let a = bloch_from_parts(next(), [next(), next(), next()]);
        let b = bloch_from_parts(next(), [next(), next(), next()]);
        let c = bloch_from_parts(next(), [next(), next(), next()]);
        let d = bloch_from_parts(next(), [next(), next(), next()]);
        let m = &tensor(&a, &b).unwrap() + &tensor(&c, &d).unwrap().scale(Complex64::new(next(), 0.0));
        let e = eig_hermitian(&m).unwrap();
        assert!((&m - &e.reconstruct()).frobenius_norm() <= 1e-10 * m.frobenius_norm());
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn sufficient_never_exceeds_necessary(axes in prop::collection::vec(unit(), 2..=10)) {
        let nec = eta_necessary(&axes).unwrap();
        let suf = eta_sufficient(&axes).unwrap();
        prop_assert!(suf <= nec + 1e-12, "sufficient {suf} > necessary {nec}");
    }

    #[test]
    fn symmetric_global_marginals_exact(axes in prop::collection::vec(unit(), 2..=8), eta in 0.0..=1.0f64) {
        let set = PovmSet::from_axes(&axes, eta).unwrap();
        let g = build_symmetric_global(&set).unwrap();
        let r = verify_global(&g, &set).unwrap();
        prop_assert!(r.completeness_residual < 1e-14);
        prop_assert!(r.marginal_residual < 1e-14);
        let (max_m, _) = max_m_norm(&axes).unwrap();
        prop_assert_eq!(r.positive, eta * max_m <= 1.0 + 1e-10);
    }

    #[test]
    fn classical_distributions_are_psd_and_obey_chains(n in 3usize..=8, seed in any::<u64>()) {
        let corr = classical_sample_oracle(n, OracleMode::Exact, seed).unwrap();
        for k in 2..n {
            prop_assert!(MomentMatrix::from_correlations(&corr, k).unwrap().is_psd());
        }
        let report = chained_report(&corr).unwrap();
        for v in report.values {
            prop_assert!(v <= n as f64 - 2.0 + 1e-12);
        }
    }

    #[test]
    fn sharp_correlation_depends_on_separation_only(offset in 0.0..2.0 * PI, n in 2usize..12, l in 1usize..12) {
        prop_assume!(l < n);
        let sep = l as f64 * PI / n as f64;
        let c = sequential_correlation(offset, offset + sep, 1.0).unwrap();
        prop_assert!((c - sep.cos()).abs() < 1e-12);
    }

    #[test]
    fn local_and_nonlocal_functionals_agree(n in 2usize..=30, eta in 0.0..=1.0f64) {
        let nonlocal = steering_functional(&TwoQubitState::singlet(), n, eta).unwrap();
        let local = local_analogue(n, eta, SimMode::Analytic).unwrap();
        prop_assert!((nonlocal.functional - local.functional).abs() < 1e-12);
        prop_assert!((local.functional - eta).abs() < 1e-12);
        prop_assert_eq!(local.violated, eta > f_bound(n).unwrap() + 1e-12);
        prop_assert_eq!(nonlocal.violated, local.violated);
    }
}

#[test]
fn equatorial_bounds_agree() {
    for n in 2..=16 {
        let axes = equatorial_axes(n);
        let nec = eta_necessary(&axes).unwrap();
        let closed = eta_opt_equatorial(n).unwrap();
        assert!((nec - closed).abs() < 1e-10, "N={n}");
        assert!((closed - eta_opt_uola(n).unwrap()).abs() < 1e-10, "N={n}");
        assert!((max_m_norm(&axes).unwrap().0 - equatorial_max_m_norm(n).unwrap()).abs() < 1e-10);
        // The averaged bound matches only while every nonzero |m_a| is maximal.
        let suf = eta_sufficient(&axes).unwrap();
        if n <= 3 {
            assert!((suf - nec).abs() < 1e-10, "N={n}");
        } else {
            assert!(suf < nec - 1e-3, "N={n}");
        }
    }
}

#[test]
fn equatorial_threshold_decreases_to_two_over_pi() {
    let values: Vec<f64> = (2..=1000).map(|n| eta_opt_equatorial(n).unwrap()).collect();
    assert!(values.windows(2).all(|w| w[1] < w[0]));
    assert!((values.last().unwrap() - 2.0 / PI).abs() < 1e-5);
}

#[test]
fn f_bound_equals_equatorial_threshold() {
    for n in 2..=1000 {
        assert!((f_bound(n).unwrap() - eta_opt_equatorial(n).unwrap()).abs() < 1e-10, "N={n}");
    }
}

#[test]
fn compatible_first_measurements_respect_classical_bound() {
    for n in 3..200 {
        let eta = eta_opt_equatorial(n).unwrap();
        let s = chained_sequential_value(n, eta, SimMode::Analytic).unwrap().value;
        let classical = n as f64 - 2.0;
        if n == 3 {
            assert!((s - classical).abs() < 1e-12);
        } else {
            assert!(s < classical);
        }
    }
}

#[test]
fn sharp_violation_at_every_n() {
    for n in 2..=40 {
        assert!(steering_functional(&TwoQubitState::singlet(), n, 1.0).unwrap().violated);
        assert!(local_analogue(n, 1.0, SimMode::Analytic).unwrap().violated);
    }
}
