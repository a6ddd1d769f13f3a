mod common;

use std::f64::consts::PI;

use common::*;
use pradius::ensembles::{sample, EnsembleKind, EnsembleSpec};
use pradius::linalg::svd;
use pradius::schatten::{norm_of_values, p_num_radius, schatten_norm, w2_exact, PExponent};
use pradius::transforms::off_diag_block;
use pradius::{ComplexMatrix, C64};
use proptest::prelude::*;

fn p(v: f64) -> PExponent {
    PExponent::new(v).unwrap()
}

fn exponents() -> impl Strategy<Value = PExponent> {
    prop_oneof![
        Just(PExponent::ONE),
        Just(PExponent::TWO),
        Just(PExponent::INF),
        (1.0f64..8.0).prop_map(|v| PExponent::new(v).unwrap()),
    ]
}

/// Oracle: `(sum sigma^p)^(1/p)` computed naively from the singular values.
fn naive_norm(t: &ComplexMatrix, q: PExponent) -> f64 {
    let s = svd(t).unwrap().sigma;
    if q.is_infinite() {
        s[0]
    } else {
        s.iter().map(|x| x.powf(q.value())).sum::<f64>().powf(1.0 / q.value())
    }
}

/// Oracle: brute-force `max_theta ||Re(e^{i theta} T)||_p` on a fine grid.
fn brute_radius(t: &ComplexMatrix, q: PExponent, steps: usize) -> f64 {
    (0..steps)
        .map(|k| {
            let z = C64::from_polar(1.0, PI * k as f64 / steps as f64);
            schatten_norm(&t.scale(z).hermitian_part(), q).unwrap()
        })
        .fold(0.0, f64::max)
}

#[test]
fn norm_examples() {
    let d = ComplexMatrix::from_real_diag(&[3.0, 4.0]);
    assert!((schatten_norm(&d, PExponent::ONE).unwrap() - 7.0).abs() < 1e-14);
    assert!((schatten_norm(&d, PExponent::TWO).unwrap() - 5.0).abs() < 1e-14);
    assert!((schatten_norm(&d, PExponent::INF).unwrap() - 4.0).abs() < 1e-14);
    let n = ComplexMatrix::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]).unwrap();
    for q in [1.0, 1.5, 2.0, 3.0, f64::INFINITY] {
        assert!((schatten_norm(&n, p(q)).unwrap() - 2.0).abs() < 1e-14);
    }
    assert!(PExponent::new(0.5).is_err());
    assert_eq!(norm_of_values(&[0.0, 0.0], p(3.0)), 0.0);
}

#[test]
fn block_norm_identity() {
    let t = sample(&EnsembleSpec::new(EnsembleKind::Ginibre, 3, 1)).unwrap();
    let s = sample(&EnsembleSpec::new(EnsembleKind::Ginibre, 3, 2)).unwrap();
    let b = off_diag_block(&t, &s).unwrap();
    for q in [1.0, 1.5, 2.0, 3.0] {
        let (nt, ns) = (schatten_norm(&t, p(q)).unwrap(), schatten_norm(&s, p(q)).unwrap());
        let expect = (nt.powf(q) + ns.powf(q)).powf(1.0 / q);
        assert!((schatten_norm(&b, p(q)).unwrap() - expect).abs() < 1e-10 * expect);
    }
    let expect = schatten_norm(&t, PExponent::INF).unwrap().max(schatten_norm(&s, PExponent::INF).unwrap());
    assert!((schatten_norm(&b, PExponent::INF).unwrap() - expect).abs() < 1e-10 * expect);
}

#[test]
fn radius_examples() {
    let h = ComplexMatrix::from_real_diag(&[1.0, -2.0]);
    let r = p_num_radius(&h, PExponent::ONE, 720, false).unwrap();
    assert!(r.contains(3.0), "{r:?}");
    assert!(r.width() <= PI / 720.0 * 3.0);

    for q in [1.0, 2.0, 3.0, f64::INFINITY] {
        let expect = p(q).pow2(1.0, 1.0);
        let r = p_num_radius(&j2(), p(q), 720, true).unwrap();
        assert!(r.contains(expect) && r.width() <= 1e-6, "p={q}: {r:?}");
    }

    let t = sample(&EnsembleSpec::new(EnsembleKind::Ginibre, 4, 3)).unwrap();
    let r = p_num_radius(&t, PExponent::TWO, 720, true).unwrap();
    let w = w2_exact(&t);
    assert!(r.lower <= w + 1e-12 * w && w <= r.upper + 1e-12 * w, "{r:?} vs {w}");
    assert!(p_num_radius(&t, PExponent::TWO, 7, true).is_err());
}

#[test]
fn w2_closed_form_examples() {
    assert!((w2_exact(&j2()) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    let d = ComplexMatrix::from_real_diag(&[3.0, -4.0]);
    assert!((w2_exact(&d) - 5.0).abs() < 1e-14);
    let d = ComplexMatrix::from_diag(&[C64::new(0.0, 1.0), C64::new(1.0, 0.0)]);
    assert!((w2_exact(&d) - 1.0).abs() < 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn norm_matches_naive_oracle(t in matrix(6, 3.0), q in exponents()) {
        let got = schatten_norm(&t, q).unwrap();
        prop_assert!(close(got, naive_norm(&t, q), 1e-10));
    }

    #[test]
    fn norms_decrease_in_the_exponent(t in matrix(6, 3.0), a in 1.0f64..6.0, b in 1.0f64..6.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let n = |q: PExponent| schatten_norm(&t, q).unwrap();
        let (ninf, nq, np, n1) = (n(PExponent::INF), n(p(hi)), n(p(lo)), n(PExponent::ONE));
        let slack = 1e-10 * (1.0 + n1);
        prop_assert!(ninf <= nq + slack && nq <= np + slack && np <= n1 + slack);
    }

    #[test]
    fn mixed_submultiplicativity((t, s) in matrix_pair(5, 3.0), q in exponents()) {
        let scale = t.tol_scale().max(s.tol_scale());
        let sinf = schatten_norm(&s, PExponent::INF).unwrap();
        let tp = schatten_norm(&t, q).unwrap();
        prop_assert!(schatten_norm(&(&t * &s), q).unwrap() <= tp * sinf + 1e-9 * scale);
        prop_assert!(schatten_norm(&(&s * &t), q).unwrap() <= sinf * tp + 1e-9 * scale);
    }

    #[test]
    fn adjoint_and_unitary_invariance(t in matrix(5, 3.0), q in exponents(), seed in 0u64..500) {
        let base = schatten_norm(&t, q).unwrap();
        prop_assert!(close(schatten_norm(&t.adjoint(), q).unwrap(), base, 1e-10));
        let u = sample(&EnsembleSpec::new(EnsembleKind::HaarUnitary, t.dim(), seed)).unwrap();
        let conj = &(&u * &t) * &u.adjoint();
        prop_assert!(close(schatten_norm(&conj, q).unwrap(), base, 1e-9));
        let a = p_num_radius(&t, q, 180, true).unwrap();
        let b = p_num_radius(&conj, q, 180, true).unwrap();
        let tol = 1e-9 * t.tol_scale();
        prop_assert!(a.lower <= b.upper + tol && b.lower <= a.upper + tol, "{a:?} {b:?}");
    }

    #[test]
    fn radius_bracket_is_sound(t in matrix(4, 2.0), q in exponents(), n_grid in 8usize..200, refine: bool) {
        let r = p_num_radius(&t, q, n_grid, refine).unwrap();
        let brute = brute_radius(&t, q, 2048);
        let tol = 1e-12 * t.tol_scale();
        // the brute-force grid itself may sit below the true maximum by its own Lipschitz gap
        let gap = PI / 2048.0 * schatten_norm(&t, q).unwrap();
        prop_assert!(r.lower <= r.upper);
        prop_assert!(r.lower <= brute + gap + tol, "lower {} above brute force {}", r.lower, brute);
        prop_assert!(r.upper + tol >= brute, "upper {} below brute force {}", r.upper, brute);
        prop_assert!((0.0..PI).contains(&r.argmax_theta));
        if !refine {
            // never looser than the Lipschitz certificate
            let lip = PI / n_grid as f64 * schatten_norm(&t, q).unwrap();
            prop_assert!(r.width() <= lip + tol);
        }
    }

    #[test]
    fn basic_and_two_regime_bounds(t in matrix(5, 3.0), q in exponents()) {
        let r = p_num_radius(&t, q, 360, true).unwrap();
        let n = schatten_norm(&t, q).unwrap();
        let tol = 1e-9 * t.tol_scale();
        prop_assert!(0.5 * n <= r.upper + tol && r.lower <= n + tol);
        let c = if q.value() <= 2.0 { q.pow2(-1.0, 0.0) } else { q.pow2(1.0, 1.0) };
        prop_assert!(c * n <= r.upper + tol);
    }

    #[test]
    fn estimator_matches_closed_form_at_two(t in matrix(8, 3.0)) {
        let r = p_num_radius(&t, PExponent::TWO, 720, true).unwrap();
        let w = w2_exact(&t);
        prop_assert!((r.lower - w).abs() <= 1e-6 * (1.0 + w));
        prop_assert!(r.contains(w) || (r.upper - w).abs() <= 1e-12 * (1.0 + w));
    }

    #[test]
    fn hermitian_radius_is_the_norm(h in hermitian(5, 3.0), q in exponents()) {
        let r = p_num_radius(&h, q, 720, true).unwrap();
        let n = schatten_norm(&h, q).unwrap();
        prop_assert!(r.lower <= n + 1e-9 * h.tol_scale() && n <= r.upper + 1e-9 * h.tol_scale());
    }
}
