mod common;

use common::max_abs_diff;
use graphon::builtin;
use graphon::linalg::{analytic_transform, expm, sym_eig, TaylorFamily};
use graphon::Error;
use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;
use rand::Rng;

fn random_symmetric(rng: &mut impl Rng, n: usize, scale: f64) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = rng.random_range(-scale..scale);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}

#[test]
fn eigen_examples() {
    let d = sym_eig(&DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
        1.0, 3.0,
    ])))
    .unwrap();
    assert_eq!(d.eigenvalues, vec![3.0, 1.0]);
    assert!((d.vector(0)[1].abs() - 1.0).abs() < 1e-15);

    let b = builtin::bipartite().symmetrized_operator();
    let e = sym_eig(&b).unwrap();
    assert!((e.eigenvalues[0] - 0.5).abs() < 1e-15);
    assert!((e.eigenvalues[1] + 0.5).abs() < 1e-15);

    let mut rng = common::rng(3);
    let m = random_symmetric(&mut rng, 8, 1.0);
    assert!(max_abs_diff(&sym_eig(&m).unwrap().reconstruct(), &m) < 1e-9);
}

#[test]
fn eigenvalues_match_nalgebra() {
    let mut rng = common::rng(4);
    for n in 1..=12 {
        let m = random_symmetric(&mut rng, n, 2.0);
        let ours = sym_eig(&m).unwrap();
        let mut theirs: Vec<f64> = SymmetricEigen::new(m.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        theirs.sort_by(|a, b| b.total_cmp(a));
        for (a, b) in ours.eigenvalues.iter().zip(&theirs) {
            assert!((a - b).abs() < 1e-10, "n = {n}: {a} vs {b}");
        }
    }
}

#[test]
fn expm_examples() {
    let z = DMatrix::<f64>::zeros(3, 3);
    assert_eq!(expm(&z).unwrap(), DMatrix::identity(3, 3));
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![-2.0, 0.7]));
    let e = expm(&d).unwrap();
    assert!((e[(0, 0)] / (-2.0f64).exp() - 1.0).abs() < 1e-14);
    assert!((e[(1, 1)] / 0.7f64.exp() - 1.0).abs() < 1e-14);
    assert_eq!(e[(0, 1)], 0.0);
    for t in [0.01, 1.0, 7.5] {
        let swap = DMatrix::from_row_slice(2, 2, &[0.0, t, t, 0.0]);
        let e = expm(&swap).unwrap();
        assert!((e[(0, 0)] / t.cosh() - 1.0).abs() < 1e-12);
        assert!((e[(0, 1)] / t.sinh() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn expm_matches_nalgebra() {
    let mut rng = common::rng(5);
    for n in 1..=8 {
        let m = random_symmetric(&mut rng, n, 1.5);
        let ours = expm(&m).unwrap();
        let theirs = m.clone().exp();
        let rel = max_abs_diff(&ours, &theirs) / theirs.abs().max();
        assert!(rel < 1e-10, "n = {n}: {rel}");
    }
}

#[test]
fn expm_overflow_is_an_error() {
    let m = DMatrix::from_element(2, 2, 1e4);
    assert!(matches!(expm(&m), Err(Error::Overflow { .. })));
}

#[test]
fn transform_examples() {
    let c6 = builtin::cycle_adjacency(6);
    let exp = TaylorFamily::exp();
    for t in [1e-3, 0.05, 1.0 / 6.0 - 1e-3] {
        let ours = analytic_transform(&exp, &c6, t).unwrap().value;
        assert!(max_abs_diff(&ours, &expm(&(&c6 * t)).unwrap()) < 1e-10);
    }
    let res = TaylorFamily::resolvent();
    for t in [1e-4, 0.01, 0.1] {
        let ours = analytic_transform(&res, &c6, t).unwrap();
        let direct = (DMatrix::identity(6, 6) - &c6 * t)
            .lu()
            .try_inverse()
            .unwrap();
        assert!(max_abs_diff(&ours.value, &direct) < 1e-9, "t = {t}");
        assert!(ours.order >= 1 && ours.order <= 200);
    }
    let zero = analytic_transform(&res, &DMatrix::zeros(4, 4), 0.3).unwrap();
    assert_eq!(zero.value, DMatrix::identity(4, 4));
    let err = analytic_transform(&res, &c6, 1.0 / 6.0);
    assert!(matches!(err, Err(Error::ConvergenceGuard { .. })));
    assert!(format!("{}", err.unwrap_err()).contains("radius"));
}

#[test]
fn zero_coefficients_are_rejected() {
    fn odd(k: usize) -> f64 {
        if k % 2 == 1 {
            1.0
        } else {
            0.0
        }
    }
    let sinh = TaylorFamily::new("odd", odd, f64::INFINITY);
    let err = analytic_transform(&sinh, &builtin::cycle_adjacency(4), 0.01);
    assert!(matches!(err, Err(Error::ZeroCoefficient { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigen_residuals_and_orthonormality(seed in any::<u64>(), n in 1usize..=10) {
        let mut rng = common::rng(seed);
        let b = random_symmetric(&mut rng, n, 1.0);
        let s = sym_eig(&b).unwrap();
        let norm = b.norm().max(1e-300);
        for k in 0..n {
            let v = s.vector(k);
            let r = (&b * &v - &v * s.eigenvalues[k]).norm();
            prop_assert!(r <= 1e-9 * norm);
            for l in 0..n {
                let dot = v.dot(&s.vector(l));
                let want = if k == l { 1.0 } else { 0.0 };
                prop_assert!((dot - want).abs() < 1e-10);
            }
        }
        let sum: f64 = s.eigenvalues.iter().sum();
        prop_assert!((sum - b.trace()).abs() < 1e-9);
        prop_assert!(s.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn exp_times_exp_of_negative_is_identity(seed in any::<u64>(), n in 1usize..=8) {
        let mut rng = common::rng(seed);
        let mut x = random_symmetric(&mut rng, n, 1.0);
        let norm = x.clone().symmetric_eigenvalues().amax();
        if norm > 2.0 {
            x *= 2.0 / norm;
        }
        let prod = expm(&x).unwrap() * expm(&-&x).unwrap();
        prop_assert!(max_abs_diff(&prod, &DMatrix::identity(n, n)) < 1e-8);
    }

    #[test]
    fn exp_family_matches_expm_inside_guard(seed in any::<u64>(), n in 1usize..=7, frac in 0.01f64..0.95) {
        let mut rng = common::rng(seed);
        let l = random_symmetric(&mut rng, n, 1.0);
        let k = l.abs().max();
        prop_assume!(k > 0.0);
        // the exp family has infinite radius; stay in a moderate range anyway
        let t = frac / (k * n as f64);
        let ours = analytic_transform(&TaylorFamily::exp(), &l, t).unwrap().value;
        prop_assert!(max_abs_diff(&ours, &expm(&(&l * t)).unwrap()) < 1e-9);
    }
}
