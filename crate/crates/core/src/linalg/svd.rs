//! One-sided (Hestenes) complex Jacobi SVD.

use crate::error::{Error, Result};
use crate::linalg::matrix::{ComplexMatrix, C64};

const MAX_SWEEPS: usize = 60;

/// `T = left * diag(sigma) * right*`.
#[derive(Clone, Debug)]
pub struct Svd {
    pub left: ComplexMatrix,
    /// Descending, non-negative.
    pub sigma: Vec<f64>,
    pub right: ComplexMatrix,
    /// `||W diag(sigma) V* - T||_max`
    pub residual: f64,
}

impl Svd {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.sigma.len();
        ComplexMatrix::from_fn(n, |i, j| {
            (0..n)
                .map(|k| self.left[(i, k)] * self.sigma[k] * self.right[(j, k)].conj())
                .sum()
        })
    }
}

pub fn svd(t: &ComplexMatrix) -> Result<Svd> {
    let n = t.dim();
    // column-major working copies: cols[j] is column j
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| (0..n).map(|i| t[(i, j)]).collect()).collect();
    let mut v: Vec<Vec<C64>> = (0..n)
        .map(|j| {
            let mut e = vec![C64::new(0.0, 0.0); n];
            e[j] = C64::new(1.0, 0.0);
            e
        })
        .collect();

    let mut sweeps = 0;
    loop {
        let mut rotated = false;
        for i in 0..n {
            for j in i + 1..n {
                if rotate_columns(&mut cols, &mut v, i, j) {
                    rotated = true;
                }
            }
        }
        if !rotated {
            break;
        }
        sweeps += 1;
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                routine: "jacobi svd",
                iterations: sweeps,
            });
        }
    }

    let norms: Vec<f64> = cols.iter().map(|c| norm2(c)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| norms[b].total_cmp(&norms[a]));
    let sigma_max = norms[order[0]];
    let cutoff = 8.0 * n as f64 * f64::EPSILON * sigma_max;
    let sigma: Vec<f64> = order
        .iter()
        .map(|&k| if norms[k] <= cutoff { 0.0 } else { norms[k] })
        .collect();

    let mut w: Vec<Vec<C64>> = Vec::with_capacity(n);
    let mut next_basis = 0;
    for (pos, &k) in order.iter().enumerate() {
        if sigma[pos] > 0.0 {
            let mut col: Vec<C64> = cols[k].iter().map(|z| z / norms[k]).collect();
            orthogonalize(&mut col, &w);
            let nrm = norm2(&col);
            col.iter_mut().for_each(|z| *z /= nrm);
            w.push(col);
        } else {
            // complete the left basis from coordinate vectors
            loop {
                let mut col = vec![C64::new(0.0, 0.0); n];
                col[next_basis] = C64::new(1.0, 0.0);
                next_basis += 1;
                orthogonalize(&mut col, &w);
                let nrm = norm2(&col);
                if nrm > 1e-3 {
                    col.iter_mut().for_each(|z| *z /= nrm);
                    w.push(col);
                    break;
                }
            }
        }
    }

    let left = ComplexMatrix::from_fn(n, |i, j| w[j][i]);
    let right = ComplexMatrix::from_fn(n, |i, j| v[order[j]][i]);
    let mut out = Svd {
        left,
        sigma,
        right,
        residual: 0.0,
    };
    out.residual = out.reconstruct().max_abs_diff(t);
    Ok(out)
}

fn norm2(x: &[C64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Two passes of modified Gram-Schmidt against `basis`.
fn orthogonalize(col: &mut [C64], basis: &[Vec<C64>]) {
    for _ in 0..2 {
        for b in basis {
            let proj: C64 = b.iter().zip(col.iter()).map(|(bi, ci)| bi.conj() * ci).sum();
            for (ci, bi) in col.iter_mut().zip(b) {
                *ci -= proj * bi;
            }
        }
    }
}

/// Orthogonalizes columns `i` and `j`; returns whether a rotation was applied.
fn rotate_columns(cols: &mut [Vec<C64>], v: &mut [Vec<C64>], i: usize, j: usize) -> bool {
    let (alpha, beta, gamma) = {
        let (x, y) = (&cols[i], &cols[j]);
        let alpha: f64 = x.iter().map(|z| z.norm_sqr()).sum();
        let beta: f64 = y.iter().map(|z| z.norm_sqr()).sum();
        let gamma: C64 = x.iter().zip(y).map(|(a, b)| a.conj() * b).sum();
        (alpha, beta, gamma)
    };
    let mag = gamma.norm();
    if mag <= f64::EPSILON * (alpha * beta).sqrt() || mag == 0.0 {
        return false;
    }
    let w = (gamma / mag).conj();
    let zeta = (beta - alpha) / (2.0 * mag);
    let t = if zeta == 0.0 {
        1.0
    } else {
        zeta.signum() / (zeta.abs() + (zeta * zeta + 1.0).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    apply_pair(cols, i, j, c, s, w);
    apply_pair(v, i, j, c, s, w);
    true
}

fn apply_pair(m: &mut [Vec<C64>], i: usize, j: usize, c: f64, s: f64, w: C64) {
    let (lo, hi) = m.split_at_mut(j);
    let (x, y) = (&mut lo[i], &mut hi[0]);
    for (a, b) in x.iter_mut().zip(y.iter_mut()) {
        let (xa, yb) = (*a, *b);
        *a = xa * c - w * yb * s;
        *b = xa * s + w * yb * c;
    }
}
