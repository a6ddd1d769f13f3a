//! Hermitian eigensolvers.
//!
//! Two independent routes are provided: a cyclic complex Jacobi method that
//! also returns eigenvectors, and an eigenvalues-only path (Householder
//! reduction to real tridiagonal form followed by implicit QL) used on the
//! hot path of the numerical-radius estimator.

use crate::error::{Error, Result};
use crate::linalg::matrix::{ComplexMatrix, C64};

const JACOBI_MAX_SWEEPS: usize = 100;
const QL_MAX_ITERATIONS: usize = 60;

/// Eigendecomposition `H = Q diag(eigenvalues) Q*` of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Columns are orthonormal eigenvectors, ordered like `eigenvalues`.
    pub vectors: ComplexMatrix,
    /// Max column residual `||H v - lambda v||_2`.
    pub residual: f64,
}

impl HermitianEigen {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let q = &self.vectors;
        let n = q.dim();
        ComplexMatrix::from_fn(n, |i, j| {
            (0..n)
                .map(|k| q[(i, k)] * self.eigenvalues[k] * q[(j, k)].conj())
                .sum()
        })
    }
}

fn check_hermitian(h: &ComplexMatrix) -> Result<()> {
    let residual = h.hermitian_residual();
    let tolerance = 1e-12 * h.tol_scale();
    if residual > tolerance {
        return Err(Error::NotHermitian {
            residual,
            tolerance,
        });
    }
    Ok(())
}

/// Cyclic Jacobi eigendecomposition of a Hermitian matrix.
pub fn herm_eigen(h: &ComplexMatrix) -> Result<HermitianEigen> {
    check_hermitian(h)?;
    let n = h.dim();
    let mut a = h.hermitian_part();
    let mut q = ComplexMatrix::identity(n);
    let total = a.frobenius_norm();

    let mut converged = n == 1 || total == 0.0;
    let mut sweeps = 0;
    while !converged {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence {
                routine: "hermitian jacobi",
                iterations: sweeps,
            });
        }
        sweeps += 1;
        for p in 0..n - 1 {
            for r in p + 1..n {
                rotate_hermitian(&mut a, &mut q, p, r);
            }
        }
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        converged = off <= 1e-15 * total;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, |i, j| q[(i, order[j])]);

    let mut residual: f64 = 0.0;
    for (k, &lambda) in eigenvalues.iter().enumerate() {
        let mut col: f64 = 0.0;
        for i in 0..n {
            let hv: C64 = (0..n).map(|j| h[(i, j)] * vectors[(j, k)]).sum();
            col += (hv - vectors[(i, k)] * lambda).norm_sqr();
        }
        residual = residual.max(col.sqrt());
    }

    Ok(HermitianEigen {
        eigenvalues,
        vectors,
        residual,
    })
}

/// One complex Jacobi rotation annihilating `a[p][r]`; accumulates into `q`.
fn rotate_hermitian(a: &mut ComplexMatrix, q: &mut ComplexMatrix, p: usize, r: usize) {
    let apr = a[(p, r)];
    let mag = apr.norm();
    if mag == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let arr = a[(r, r)].re;
    // negligible relative to both diagonal entries: drop it
    if mag < 1e-300 || (app.abs() + arr.abs() + mag == app.abs() + arr.abs()) {
        a[(p, r)] = C64::new(0.0, 0.0);
        a[(r, p)] = C64::new(0.0, 0.0);
        return;
    }
    let phase = apr / mag; // e^{i phi}
    let theta = (arr - app) / (2.0 * mag);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let w = phase.conj(); // e^{-i phi}
    let n = a.dim();

    for k in 0..n {
        if k == p || k == r {
            continue;
        }
        let akp = a[(k, p)];
        let akr = a[(k, r)];
        let new_kp = akp * c - w * akr * s;
        let new_kr = akp * s + w * akr * c;
        a[(k, p)] = new_kp;
        a[(p, k)] = new_kp.conj();
        a[(k, r)] = new_kr;
        a[(r, k)] = new_kr.conj();
    }
    a[(p, p)] = C64::new(app - t * mag, 0.0);
    a[(r, r)] = C64::new(arr + t * mag, 0.0);
    a[(p, r)] = C64::new(0.0, 0.0);
    a[(r, p)] = C64::new(0.0, 0.0);

    for k in 0..n {
        let qkp = q[(k, p)];
        let qkr = q[(k, r)];
        q[(k, p)] = qkp * c - w * qkr * s;
        q[(k, r)] = qkp * s + w * qkr * c;
    }
}

/// Reusable buffers for [`hermitian_eigenvalues_into`].
#[derive(Clone, Debug, Default)]
pub struct EigenWorkspace {
    a: Vec<C64>,
    u: Vec<C64>,
    p: Vec<C64>,
    d: Vec<f64>,
    e: Vec<f64>,
}

impl EigenWorkspace {
    pub fn new(n: usize) -> Self {
        Self {
            a: vec![C64::new(0.0, 0.0); n * n],
            u: vec![C64::new(0.0, 0.0); n],
            p: vec![C64::new(0.0, 0.0); n],
            d: vec![0.0; n],
            e: vec![0.0; n],
        }
    }

    /// Mutable view of the working matrix (row-major, `n*n`), to be filled
    /// with a Hermitian matrix before calling [`Self::solve`].
    pub fn matrix_mut(&mut self, n: usize) -> &mut [C64] {
        if self.a.len() != n * n {
            *self = Self::new(n);
        }
        &mut self.a
    }

    /// Eigenvalues (unsorted) of the matrix previously written through
    /// [`Self::matrix_mut`]. The working matrix is destroyed.
    pub fn solve(&mut self, n: usize) -> Result<&[f64]> {
        debug_assert_eq!(self.a.len(), n * n);
        tridiagonalize(n, &mut self.a, &mut self.u, &mut self.p, &mut self.d, &mut self.e);
        tql_eigenvalues(&mut self.d, &mut self.e)?;
        Ok(&self.d)
    }

    /// Like [`Self::solve`] but returns eigenvalue moduli.
    pub fn solve_abs(&mut self, n: usize) -> Result<&[f64]> {
        self.solve(n)?;
        self.d.iter_mut().for_each(|v| *v = v.abs());
        Ok(&self.d)
    }
}

/// Ascending eigenvalues of a Hermitian matrix via tridiagonal QL.
pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Result<Vec<f64>> {
    check_hermitian(h)?;
    let n = h.dim();
    let mut ws = EigenWorkspace::new(n);
    ws.matrix_mut(n).copy_from_slice(h.hermitian_part().as_slice());
    let mut out = ws.solve(n)?.to_vec();
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// Householder reduction of a Hermitian matrix (full storage) to a real
/// symmetric tridiagonal one with the same spectrum.
fn tridiagonalize(
    n: usize,
    a: &mut [C64],
    u: &mut [C64],
    p: &mut [C64],
    d: &mut [f64],
    e: &mut [f64],
) {
    for v in e.iter_mut() {
        *v = 0.0;
    }
    for k in 0..n.saturating_sub(2) {
        d[k] = a[k * n + k].re;
        let m0 = k + 1;
        let mut xnorm2 = 0.0;
        for i in m0..n {
            xnorm2 += a[i * n + k].norm_sqr();
        }
        let xnorm = xnorm2.sqrt();
        if xnorm == 0.0 {
            e[k] = 0.0;
            continue;
        }
        let x0 = a[m0 * n + k];
        let x0abs = x0.norm_sqr().sqrt();
        let phase = if x0abs > 0.0 { x0 / x0abs } else { C64::new(1.0, 0.0) };
        for i in m0..n {
            u[i] = a[i * n + k];
        }
        u[m0] += phase * xnorm;
        let h = xnorm * (xnorm + x0abs);
        e[k] = xnorm;

        // p = B u / h over the trailing block (full storage)
        for i in m0..n {
            let row = &a[i * n + m0..i * n + n];
            let mut s = C64::new(0.0, 0.0);
            for (bij, uj) in row.iter().zip(&u[m0..n]) {
                s += bij * uj;
            }
            p[i] = s / h;
        }
        let mut kk = 0.0;
        for i in m0..n {
            kk += (u[i].conj() * p[i]).re;
        }
        let kk = kk / (2.0 * h);
        for i in m0..n {
            p[i] -= u[i] * kk;
        }
        // B <- B - p u* - u p*
        for i in m0..n {
            let (pi, ui) = (p[i], u[i]);
            let row = &mut a[i * n + m0..i * n + n];
            for ((bij, uj), pj) in row.iter_mut().zip(&u[m0..n]).zip(&p[m0..n]) {
                *bij -= pi * uj.conj() + ui * pj.conj();
            }
        }
    }
    if n >= 2 {
        d[n - 2] = a[(n - 2) * n + (n - 2)].re;
        d[n - 1] = a[(n - 1) * n + (n - 1)].re;
        e[n - 2] = a[(n - 1) * n + (n - 2)].norm_sqr().sqrt();
    } else {
        d[0] = a[0].re;
    }
    e[n - 1] = 0.0;
}

/// Implicit QL on a symmetric tridiagonal matrix; `e[i]` couples `i` and
/// `i+1`. Eigenvalues are left in `d`.
fn tql_eigenvalues(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > QL_MAX_ITERATIONS {
                return Err(Error::NoConvergence {
                    routine: "tridiagonal ql",
                    iterations: iter,
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = (g * g + 1.0).sqrt();
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = (f * f + g * g).sqrt();
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}
