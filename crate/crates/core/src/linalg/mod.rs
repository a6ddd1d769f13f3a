//! Dense complex linear algebra: factorizations, functional calculus,
//! Cartesian decomposition and the modulus.

pub mod eigen;
pub mod matrix;
pub mod svd;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use eigen::{herm_eigen, hermitian_eigenvalues, EigenWorkspace, HermitianEigen};
pub use matrix::{ComplexMatrix, C64};
pub use svd::{svd, Svd};

/// Clamp band for eigenvalues of nominally PSD inputs, relative to scale.
pub const PSD_CLAMP: f64 = 1e-10;

/// Scalar function `x -> coef * x^exp` on `[0, inf)`, with `0^0 = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerFn {
    pub coef: f64,
    pub exp: f64,
}

impl PowerFn {
    pub fn power(exp: f64) -> Self {
        Self { coef: 1.0, exp }
    }

    pub fn eval(&self, x: f64) -> f64 {
        if self.exp == 0.0 {
            self.coef
        } else {
            self.coef * x.powf(self.exp)
        }
    }
}

/// `|T| = (T*T)^{1/2} = V diag(sigma) V*`.
pub fn modulus(t: &ComplexMatrix) -> Result<ComplexMatrix> {
    let d = svd(t)?;
    Ok(conjugate_diag(&d.right, &d.sigma))
}

/// `(Re T, Im T)` with `T = Re T + i Im T`.
pub fn cartesian(t: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let n = t.dim();
    let re = ComplexMatrix::from_fn(n, |i, j| (t[(i, j)] + t[(j, i)].conj()) * 0.5);
    let im = ComplexMatrix::from_fn(n, |i, j| (t[(i, j)] - t[(j, i)].conj()) * C64::new(0.0, -0.5));
    (re, im)
}

pub fn trace(t: &ComplexMatrix) -> C64 {
    t.trace()
}

/// `Q diag(values) Q*`
pub fn conjugate_diag(q: &ComplexMatrix, values: &[f64]) -> ComplexMatrix {
    let n = q.dim();
    ComplexMatrix::from_fn(n, |i, j| {
        (0..n)
            .map(|k| q[(i, k)] * values[k] * q[(j, k)].conj())
            .sum()
    })
}

/// Clamps roundoff-negative eigenvalues of a nominally PSD spectrum and
/// snaps numerically-zero ones to exactly zero.
pub fn clamp_psd_spectrum(values: &mut [f64], scale: f64) -> Result<()> {
    let tolerance = PSD_CLAMP * scale;
    let top = values.iter().cloned().fold(0.0, f64::max);
    let snap = 8.0 * values.len() as f64 * f64::EPSILON * top;
    for v in values.iter_mut() {
        if *v < -tolerance {
            return Err(Error::NegativeEigenvalue {
                value: *v,
                tolerance,
            });
        }
        if *v <= snap {
            *v = 0.0;
        }
    }
    Ok(())
}

/// `phi(H)` for a PSD Hermitian `H` through its eigendecomposition.
pub fn herm_apply(h: &ComplexMatrix, phi: PowerFn) -> Result<ComplexMatrix> {
    let eig = herm_eigen(h)?;
    let mut values = eig.eigenvalues.clone();
    clamp_psd_spectrum(&mut values, h.tol_scale())?;
    let mapped: Vec<f64> = values.iter().map(|&x| phi.eval(x)).collect();
    Ok(conjugate_diag(&eig.vectors, &mapped))
}
