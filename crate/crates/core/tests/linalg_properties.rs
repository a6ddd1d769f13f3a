mod common;

use common::*;
use pradius::ensembles::{sample, EnsembleKind, EnsembleSpec};
use pradius::io::matrix_from_json;
use pradius::linalg::{cartesian, herm_apply, herm_eigen, hermitian_eigenvalues, modulus, svd, trace, PowerFn};
use pradius::{ComplexMatrix, C64};
use proptest::prelude::*;

#[test]
fn eigen_examples() {
    let e = herm_eigen(&ComplexMatrix::from_real_diag(&[3.0, 1.0])).unwrap();
    assert_eq!(e.eigenvalues, vec![1.0, 3.0]);
    for j in 0..2 {
        let col: Vec<f64> = (0..2).map(|i| e.vectors[(i, j)].norm()).collect();
        assert!(col.iter().filter(|&&x| (x - 1.0).abs() < 1e-14).count() == 1);
    }
    let swap = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
    let e = herm_eigen(&swap).unwrap();
    assert!((e.eigenvalues[0] + 1.0).abs() < 1e-14 && (e.eigenvalues[1] - 1.0).abs() < 1e-14);
}

#[test]
fn svd_examples() {
    let s = svd(&ComplexMatrix::from_real_diag(&[3.0, -4.0])).unwrap().sigma;
    assert!((s[0] - 4.0).abs() < 1e-14 && (s[1] - 3.0).abs() < 1e-14);
    let s = svd(&ComplexMatrix::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]).unwrap()).unwrap().sigma;
    assert!((s[0] - 2.0).abs() < 1e-14 && s[1].abs() < 1e-14);
    let s = svd(&ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]).unwrap()).unwrap().sigma;
    assert!((s[0] - 2.0).abs() < 1e-14 && s[1].abs() < 1e-14);
}

#[test]
fn cartesian_and_trace_examples() {
    let (re, im) = cartesian(&j2());
    let half_swap = ComplexMatrix::from_real_rows(&[&[0.0, 0.5], &[0.5, 0.0]]).unwrap();
    assert!(re.max_abs_diff(&half_swap) < 1e-16);
    let expect = ComplexMatrix::from_rows(&[
        vec![C64::new(0.0, 0.0), C64::new(0.0, -0.5)],
        vec![C64::new(0.0, 0.5), C64::new(0.0, 0.0)],
    ])
    .unwrap();
    assert!(im.max_abs_diff(&expect) < 1e-16);

    let h = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, -1.0]]).unwrap();
    let (re, im) = cartesian(&h.scale(C64::new(0.0, 1.0)));
    assert!(re.max_abs() < 1e-16 && im.max_abs_diff(&h) < 1e-16);

    assert_eq!(trace(&ComplexMatrix::from_real_diag(&[1.0, 2.0])), C64::new(3.0, 0.0));
    assert_eq!(trace(&j2()), C64::new(0.0, 0.0));
    assert_eq!(trace(&(&j2() * &j2())), C64::new(0.0, 0.0));
}

#[test]
fn functional_calculus_examples() {
    let r = herm_apply(&ComplexMatrix::from_real_diag(&[1.0, 4.0]), PowerFn::power(0.5)).unwrap();
    assert!(r.max_abs_diff(&ComplexMatrix::from_real_diag(&[1.0, 2.0])) < 1e-14);
    let r = herm_apply(&ComplexMatrix::from_real_diag(&[0.0, 2.0]), PowerFn::power(0.0)).unwrap();
    assert!(r.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-14);
    let bad = ComplexMatrix::from_real_diag(&[-1e-3, 1.0]);
    assert!(herm_apply(&bad, PowerFn::power(0.5)).is_err());
    // roundoff-level negatives are clamped
    let ok = ComplexMatrix::from_real_diag(&[-1e-13, 1.0]);
    assert_eq!(herm_apply(&ok, PowerFn::power(0.5)).unwrap()[(0, 0)], C64::new(0.0, 0.0));
}

#[test]
fn modulus_examples() {
    let m = modulus(&ComplexMatrix::from_real_diag(&[2.0, -3.0])).unwrap();
    assert!(m.max_abs_diff(&ComplexMatrix::from_real_diag(&[2.0, 3.0])) < 1e-14);
    let u = sample(&EnsembleSpec::new(EnsembleKind::HaarUnitary, 4, 5)).unwrap();
    assert!(modulus(&u).unwrap().max_abs_diff(&ComplexMatrix::identity(4)) < 1e-12);
}

#[test]
fn matrix_format_rejects_bad_documents() {
    assert!(matrix_from_json(r#"{"n": 2, "data": [[[1,0],[0,0]], [[0,0]]]}"#).is_err());
    assert!(matrix_from_json(r#"{"n": 1, "data": [[[1e999, 0]]]}"#).is_err());
    assert!(matrix_from_json(r#"{"n": 3, "data": [[[1,0]]]}"#).is_err());
    assert!(matrix_from_json(r#"{"n": 1, "data": [[[1,0]]], "extra": 1}"#).is_err());
    let m = matrix_from_json(r#"{"n": 1, "data": [[[1.5,-2]]]}"#).unwrap();
    assert_eq!(m[(0, 0)], C64::new(1.5, -2.0));
}

/// 2x2 Hermitian eigenvalues in closed form.
fn eig2(h: &ComplexMatrix) -> (f64, f64) {
    let (a, d) = (h[(0, 0)].re, h[(1, 1)].re);
    let b = h[(0, 1)].norm();
    let m = 0.5 * (a + d);
    let r = (0.25 * (a - d).powi(2) + b * b).sqrt();
    (m - r, m + r)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigen_reconstructs(h in hermitian(8, 3.0)) {
        let e = herm_eigen(&h).unwrap();
        let scale = 1.0 + h.max_abs();
        prop_assert!(e.vectors.unitarity_residual() <= 1e-10);
        prop_assert!(e.reconstruct().max_abs_diff(&h) <= 1e-10 * scale);
        prop_assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        let tr = trace(&h).re;
        let sum: f64 = e.eigenvalues.iter().sum();
        prop_assert!((tr - sum).abs() <= 1e-10 * (1.0 + tr.abs()) * scale);
    }

    #[test]
    fn two_by_two_eigenvalues_match_closed_form(h in hermitian(2, 3.0).prop_filter("2x2", |h| h.dim() == 2)) {
        let (lo, hi) = eig2(&h);
        let e = herm_eigen(&h).unwrap().eigenvalues;
        prop_assert!((e[0] - lo).abs() <= 1e-12 * (1.0 + hi.abs()));
        prop_assert!((e[1] - hi).abs() <= 1e-12 * (1.0 + hi.abs()));
    }

    #[test]
    fn svd_reconstructs(t in matrix(8, 3.0)) {
        let d = svd(&t).unwrap();
        prop_assert!(d.left.unitarity_residual() <= 1e-10);
        prop_assert!(d.right.unitarity_residual() <= 1e-10);
        prop_assert!(d.reconstruct().max_abs_diff(&t) <= 1e-10 * (1.0 + t.max_abs()));
        prop_assert!(d.sigma.windows(2).all(|w| w[0] >= w[1]) && d.sigma.iter().all(|&s| s >= 0.0));
    }

    #[test]
    fn singular_values_square_to_gram_eigenvalues(t in matrix(7, 3.0)) {
        // oracle: eigenvalues of T*T by the tridiagonal route
        let gram = (&t.adjoint() * &t).hermitian_part();
        let lam = sorted_desc(&hermitian_eigenvalues(&gram).unwrap());
        let sigma = svd(&t).unwrap().sigma;
        let top = lam[0].max(1.0);
        for (s, l) in sigma.iter().zip(&lam) {
            prop_assert!((s * s - l).abs() <= 1e-9 * top, "{s} {l}");
        }
    }

    #[test]
    fn modulus_spectrum_is_singular_values(t in matrix(7, 3.0)) {
        let m = modulus(&t).unwrap();
        prop_assert!(m.hermitian_residual() <= 1e-12 * t.tol_scale());
        let eig = sorted_desc(&herm_eigen(&m.hermitian_part()).unwrap().eigenvalues);
        let sigma = svd(&t).unwrap().sigma;
        for (a, b) in eig.iter().zip(&sigma) {
            prop_assert!((a - b).abs() <= 1e-9 * (1.0 + sigma[0]));
        }
    }

    #[test]
    fn singular_values_are_unitarily_invariant(t in matrix(6, 3.0), seed in 0u64..1000) {
        let n = t.dim();
        let u = sample(&EnsembleSpec::new(EnsembleKind::HaarUnitary, n, seed)).unwrap();
        let v = sample(&EnsembleSpec::new(EnsembleKind::HaarUnitary, n, seed + 1)).unwrap();
        let a = svd(&t).unwrap().sigma;
        let b = svd(&(&(&u * &t) * &v)).unwrap().sigma;
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-9 * (1.0 + a[0]));
        }
    }

    #[test]
    fn cartesian_reconstructs(t in matrix(8, 5.0)) {
        let (re, im) = cartesian(&t);
        prop_assert_eq!(re.hermitian_residual(), 0.0);
        prop_assert_eq!(im.hermitian_residual(), 0.0);
        let back = &re + &im.scale(C64::new(0.0, 1.0));
        prop_assert!(back.max_abs_diff(&t) <= 1e-14 * t.tol_scale());
    }

    #[test]
    fn power_calculus_is_a_semigroup(h in positive(6, 2.0), a in 0.0f64..1.5, b in 0.0f64..1.5) {
        let pa = herm_apply(&h, PowerFn::power(a)).unwrap();
        let pb = herm_apply(&h, PowerFn::power(b)).unwrap();
        let pab = herm_apply(&h, PowerFn::power(a + b)).unwrap();
        let prod = &pa * &pb;
        prop_assert!(prod.max_abs_diff(&pab) <= 1e-9 * (1.0 + pab.max_abs()));
    }
}
