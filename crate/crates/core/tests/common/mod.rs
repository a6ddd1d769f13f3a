#![allow(dead_code)]

use pradius::{ComplexMatrix, C64};
use proptest::prelude::*;

/// Square complex matrices with entries in `[-range, range]^2`.
pub fn matrix(max_n: usize, range: f64) -> impl Strategy<Value = ComplexMatrix> {
    (1..=max_n).prop_flat_map(move |n| {
        prop::collection::vec(-range..range, 2 * n * n).prop_map(move |v| {
            ComplexMatrix::from_fn(n, |i, j| C64::new(v[2 * (i * n + j)], v[2 * (i * n + j) + 1]))
        })
    })
}

/// Two matrices of a common dimension.
pub fn matrix_pair(max_n: usize, range: f64) -> impl Strategy<Value = (ComplexMatrix, ComplexMatrix)> {
    (1..=max_n).prop_flat_map(move |n| {
        prop::collection::vec(-range..range, 4 * n * n).prop_map(move |v| {
            let at = |k: usize, i: usize, j: usize| {
                let o = k * 2 * n * n + 2 * (i * n + j);
                C64::new(v[o], v[o + 1])
            };
            (ComplexMatrix::from_fn(n, |i, j| at(0, i, j)), ComplexMatrix::from_fn(n, |i, j| at(1, i, j)))
        })
    })
}

pub fn hermitian(max_n: usize, range: f64) -> impl Strategy<Value = ComplexMatrix> {
    matrix(max_n, range).prop_map(|m| m.hermitian_part())
}

/// `A*A`, positive semidefinite.
pub fn positive(max_n: usize, range: f64) -> impl Strategy<Value = ComplexMatrix> {
    matrix(max_n, range).prop_map(|a| (&a.adjoint() * &a).hermitian_part())
}

pub fn j2() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap()
}

/// Sorted copy, descending.
pub fn sorted_desc(v: &[f64]) -> Vec<f64> {
    let mut v = v.to_vec();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

pub fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * (1.0 + a.abs().max(b.abs()))
}
