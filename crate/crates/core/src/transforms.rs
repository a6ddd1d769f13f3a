//! Polar decomposition and the Aluthge family: `f(|T|) U g(|T|)`.
//!
//! `U` is always the unitary factor `W V*` of a full SVD `T = W S V*`, so the
//! transforms are well defined on singular operands too.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{conjugate_diag, svd, ComplexMatrix, PowerFn, Svd};

/// A pair `(f, g)` with `f(x) g(x) = x` on `[0, inf)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctionPair {
    /// `f = x^a`, `g = x^(1-a)`.
    Power { a: f64 },
    /// `f = c x^a`, `g = x^(1-a) / c`.
    ScaledPower { a: f64, c: f64 },
}

impl FunctionPair {
    pub fn power(a: f64) -> Result<Self> {
        let pair = FunctionPair::Power { a };
        pair.validate()?;
        Ok(pair)
    }

    pub fn scaled_power(a: f64, c: f64) -> Result<Self> {
        let pair = FunctionPair::ScaledPower { a, c };
        pair.validate()?;
        Ok(pair)
    }

    pub fn validate(&self) -> Result<()> {
        let (a, c) = self.params();
        if !(0.0..=1.0).contains(&a) {
            return Err(Error::InvalidParameter(format!(
                "pair exponent must lie in [0, 1], got {a}"
            )));
        }
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "pair scale must be positive and finite, got {c}"
            )));
        }
        Ok(())
    }

    /// `(a, c)`; plain powers have `c = 1`.
    pub fn params(&self) -> (f64, f64) {
        match *self {
            FunctionPair::Power { a } => (a, 1.0),
            FunctionPair::ScaledPower { a, c } => (a, c),
        }
    }

    pub fn f(&self) -> PowerFn {
        let (a, c) = self.params();
        PowerFn { coef: c, exp: a }
    }

    pub fn g(&self) -> PowerFn {
        let (a, c) = self.params();
        PowerFn {
            coef: 1.0 / c,
            exp: 1.0 - a,
        }
    }

    /// `f^2 + g^2` evaluated pointwise.
    pub fn square_sum(&self, x: f64) -> f64 {
        self.f().eval(x).powi(2) + self.g().eval(x).powi(2)
    }

    /// Compact label used in record params, e.g. `power(0.5)`.
    pub fn label(&self) -> String {
        match *self {
            FunctionPair::Power { a } => format!("power({a})"),
            FunctionPair::ScaledPower { a, c } => format!("scaled_power({a},{c})"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PolarFactors {
    pub unitary: ComplexMatrix,
    pub modulus: ComplexMatrix,
}

/// A cached SVD exposing functions of `|T|` and `|T*|` and the transforms.
#[derive(Clone, Debug)]
pub struct PolarCalculus {
    svd: Svd,
}

impl PolarCalculus {
    pub fn new(t: &ComplexMatrix) -> Result<Self> {
        Ok(Self { svd: svd(t)? })
    }

    pub fn svd(&self) -> &Svd {
        &self.svd
    }

    pub fn singular_values(&self) -> &[f64] {
        &self.svd.sigma
    }

    pub fn unitary(&self) -> ComplexMatrix {
        &self.svd.left * &self.svd.right.adjoint()
    }

    /// `phi(|T|) = V phi(S) V*`
    pub fn of_modulus(&self, phi: impl Fn(f64) -> f64) -> ComplexMatrix {
        let values: Vec<f64> = self.svd.sigma.iter().map(|&s| phi(s)).collect();
        conjugate_diag(&self.svd.right, &values)
    }

    /// `phi(|T*|) = W phi(S) W*`
    pub fn of_adjoint_modulus(&self, phi: impl Fn(f64) -> f64) -> ComplexMatrix {
        let values: Vec<f64> = self.svd.sigma.iter().map(|&s| phi(s)).collect();
        conjugate_diag(&self.svd.left, &values)
    }

    /// `f(|T|) U g(|T|) = V f(S) (V* W) g(S) V*`
    pub fn aluthge(&self, pair: FunctionPair) -> ComplexMatrix {
        let (f, g) = (pair.f(), pair.g());
        let v = &self.svd.right;
        let n = v.dim();
        let core = &v.adjoint() * &self.svd.left;
        let fs: Vec<f64> = self.svd.sigma.iter().map(|&s| f.eval(s)).collect();
        let gs: Vec<f64> = self.svd.sigma.iter().map(|&s| g.eval(s)).collect();
        let scaled = ComplexMatrix::from_fn(n, |i, j| core[(i, j)] * (fs[i] * gs[j]));
        &(v * &scaled) * &v.adjoint()
    }
}

pub fn polar(t: &ComplexMatrix) -> Result<PolarFactors> {
    let calc = PolarCalculus::new(t)?;
    Ok(PolarFactors {
        unitary: calc.unitary(),
        modulus: calc.of_modulus(|s| s),
    })
}

pub fn aluthge_fg(t: &ComplexMatrix, pair: FunctionPair) -> Result<ComplexMatrix> {
    pair.validate()?;
    Ok(PolarCalculus::new(t)?.aluthge(pair))
}

/// `|T|^t U |T|^(1-t)`; `t = 1/2` is the classical transform, `t = 1` Duggal's.
pub fn aluthge_t(t_op: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    aluthge_fg(t_op, FunctionPair::power(t)?)
}

/// `[[0, T], [S, 0]]`
pub fn off_diag_block(t: &ComplexMatrix, s: &ComplexMatrix) -> Result<ComplexMatrix> {
    let z = ComplexMatrix::zeros(t.dim());
    ComplexMatrix::from_blocks(&z, t, s, &z)
}
