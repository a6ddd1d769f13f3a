//! Seeded structured random matrices.
//!
//! Every draw uses ChaCha8 seeded from the given 64-bit seed, and complex
//! Gaussians `(g1 + i g2)/sqrt(2)` from the standard normal (ziggurat)
//! sampler, so the same `EnsembleSpec` always yields the same bytes on any thread.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnsembleKind {
    Ginibre,
    Hermitian,
    Positive,
    HaarUnitary,
    SquareZero,
    Normal,
    RankDeficient,
}

impl EnsembleKind {
    pub const ALL: [EnsembleKind; 7] = [
        EnsembleKind::Ginibre,
        EnsembleKind::Hermitian,
        EnsembleKind::Positive,
        EnsembleKind::HaarUnitary,
        EnsembleKind::SquareZero,
        EnsembleKind::Normal,
        EnsembleKind::RankDeficient,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EnsembleKind::Ginibre => "ginibre",
            EnsembleKind::Hermitian => "hermitian",
            EnsembleKind::Positive => "positive",
            EnsembleKind::HaarUnitary => "haar_unitary",
            EnsembleKind::SquareZero => "square_zero",
            EnsembleKind::Normal => "normal",
            EnsembleKind::RankDeficient => "rank_deficient",
        }
    }
}

/// Shift added to `A*A` by the positive ensemble.
pub const POSITIVE_SHIFT: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub kind: EnsembleKind,
    pub n: usize,
    pub seed: u64,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

impl EnsembleSpec {
    pub fn new(kind: EnsembleKind, n: usize, seed: u64) -> Self {
        Self {
            kind,
            n,
            seed,
            params: BTreeMap::new(),
        }
    }

    pub fn with_param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }
}

pub fn sample(spec: &EnsembleSpec) -> Result<ComplexMatrix> {
    let n = spec.n;
    if n == 0 {
        return Err(Error::Ensemble("dimension must be at least 1".into()));
    }
    if let Some(k) = spec.params.keys().find(|k| k.as_str() != "rank") {
        return Err(Error::Ensemble(format!("unknown ensemble parameter `{k}`")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let m = match spec.kind {
        EnsembleKind::Ginibre => ginibre(&mut rng, n),
        EnsembleKind::Hermitian => ginibre(&mut rng, n).hermitian_part(),
        EnsembleKind::Positive => {
            let a = ginibre(&mut rng, n);
            let mut p = (&a.adjoint() * &a).hermitian_part();
            for i in 0..n {
                p[(i, i)] += POSITIVE_SHIFT;
            }
            p
        }
        EnsembleKind::HaarUnitary => haar_unitary(&mut rng, n),
        EnsembleKind::SquareZero => {
            if !n.is_multiple_of(2) {
                return Err(Error::Ensemble(format!(
                    "square_zero needs an even dimension, got {n}"
                )));
            }
            let h = n / 2;
            let b = ginibre(&mut rng, h);
            let z = ComplexMatrix::zeros(h);
            ComplexMatrix::from_blocks(&z, &b, &z, &z)?
        }
        EnsembleKind::Normal => {
            let q = haar_unitary(&mut rng, n);
            let z: Vec<C64> = (0..n).map(|_| complex_gaussian(&mut rng)).collect();
            let mut out = ComplexMatrix::zeros(n);
            for i in 0..n {
                for j in 0..n {
                    out[(i, j)] = (0..n).map(|k| q[(i, k)] * z[k] * q[(j, k)].conj()).sum();
                }
            }
            out
        }
        EnsembleKind::RankDeficient => {
            let r = match spec.params.get("rank") {
                None => (n / 2).max(1),
                Some(&r) if r.fract() == 0.0 && r >= 1.0 && r <= n as f64 => r as usize,
                Some(&r) => {
                    return Err(Error::Ensemble(format!(
                        "rank must be an integer in [1, {n}], got {r}"
                    )))
                }
            };
            let x: Vec<C64> = (0..n * r).map(|_| complex_gaussian(&mut rng)).collect();
            let y: Vec<C64> = (0..r * n).map(|_| complex_gaussian(&mut rng)).collect();
            ComplexMatrix::from_fn(n, |i, j| (0..r).map(|k| x[i * r + k] * y[k * n + j]).sum())
        }
    };
    Ok(m)
}

fn complex_gaussian(rng: &mut ChaCha8Rng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

fn ginibre(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let data: Vec<C64> = (0..n * n).map(|_| complex_gaussian(rng)).collect();
    ComplexMatrix::from_fn(n, |i, j| data[i * n + j])
}

/// Gram-Schmidt QR of a Ginibre draw; `R` has a positive diagonal, which
/// makes `Q` Haar distributed.
fn haar_unitary(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let g = ginibre(rng, n);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v: Vec<C64> = (0..n).map(|i| g[(i, j)]).collect();
        for _ in 0..2 {
            for q in &cols {
                let proj: C64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                v.iter_mut().zip(q).for_each(|(x, qi)| *x -= proj * qi);
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
        cols.push(v);
    }
    ComplexMatrix::from_fn(n, |i, j| cols[j][i])
}
