//! Interval-certified evaluation of the inequality catalogue.
//!
//! Every quantity is carried as an interval: exact norms are widened by a
//! round-off band and p-numerical radii use the certified `[lower, upper]`
//! bracket. A link `lhs <= rhs` is certified to hold when
//! `lhs.hi <= rhs.lo + tol`, certified violated when `lhs.lo > rhs.hi + tol`,
//! and indeterminate otherwise. Equality entries only ask that the two
//! intervals overlap within `tol`.

pub mod interval;
mod registry;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, ComplexMatrix};
use crate::schatten::{p_num_radius_cached, schatten_norm, PExponent, RadiusCache, RadiusOptions};
use crate::transforms::{FunctionPair, PolarCalculus};
pub use interval::Interval;
use registry::Link;
pub use registry::{
    list_registry, lookup, Axis, Hypothesis, OperandRecipe, PRange, RegistryEntry, Relation, MIN_T_GRID,
};

/// Round-off band applied to exactly computed quantities, relative to scale.
pub const VALUE_BAND: f64 = 1e-10;
/// Verdict tolerance, relative to `1 + max_k ||X_k||_p`.
pub const VERDICT_TOL: f64 = 1e-9;
/// Equality-attainment tolerance, same scaling as [`VERDICT_TOL`].
pub const EQUALITY_TOL: f64 = 1e-8;
/// Hypothesis residual tolerance, relative to operand scale.
pub const HYPOTHESIS_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    AsPrinted,
    AsDerived,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::AsPrinted => "as_printed",
            Variant::AsDerived => "as_derived",
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "as_printed" => Ok(Variant::AsPrinted),
            "as_derived" => Ok(Variant::AsDerived),
            _ => Err(Error::Parse(format!("unknown variant `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    CertifiedHolds,
    CertifiedViolated,
    Indeterminate,
}

/// Optional per-check parameters; unset values take the entry defaults.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CheckParams {
    /// Pair / t-Aluthge exponent, default 1/2.
    pub t: Option<f64>,
    /// Interpolation exponent, default 1/2.
    pub nu: Option<f64>,
    /// Comparison exponent for norm monotonicity, default `2p`.
    pub q: Option<PExponent>,
    /// Scale `c` of a scaled power pair.
    pub pair_scale: Option<f64>,
    pub variant: Option<Variant>,
    /// Name of the structured witness, if the operands are one.
    pub witness: Option<String>,
}

/// The parameters a record was actually evaluated with.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RecordParams {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub nu: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub q: Option<PExponent>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub pair: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub variant: Option<Variant>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct OperandInfo {
    pub n: usize,
    /// FNV-1a of the little-endian operand bytes, hex.
    pub digest: String,
    #[serde(default)]
    pub ensembles: Vec<String>,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityRecord {
    pub id: String,
    pub operands: OperandInfo,
    pub p: PExponent,
    pub params: RecordParams,
    pub lhs: Interval,
    pub rhs: Interval,
    /// `rhs.lo - lhs.hi` of the reported link.
    pub slack: f64,
    pub tol: f64,
    pub verdict: Verdict,
    pub equality_attained: bool,
}

/// Reusable evaluation state: radius options plus a spectrum cache.
#[derive(Debug)]
pub struct Evaluator {
    pub options: RadiusOptions,
    cache: RadiusCache,
}

impl Default for Evaluator {
    fn default() -> Self {
        Self::new(RadiusOptions::default())
    }
}

impl Evaluator {
    pub fn new(options: RadiusOptions) -> Self {
        Self::with_cache(options, 8)
    }

    /// `capacity` operands' grid spectra are kept (FIFO).
    pub fn with_cache(options: RadiusOptions, capacity: usize) -> Self {
        Self {
            options,
            cache: RadiusCache::new(capacity),
        }
    }
}

pub(crate) struct Resolved {
    pub t: f64,
    pub nu: f64,
    pub q: PExponent,
    pub pair: FunctionPair,
    pub variant: Option<Variant>,
}

pub(crate) struct Ctx<'a> {
    ev: &'a mut Evaluator,
    pub p: PExponent,
    eps: f64,
}

impl Ctx<'_> {
    pub fn norm(&self, x: &ComplexMatrix, p: PExponent) -> Result<Interval> {
        Ok(self.exact(schatten_norm(x, p)?))
    }

    pub fn exact(&self, x: f64) -> Interval {
        Interval::nonneg_around(x, self.eps)
    }

    pub fn radius(&mut self, x: &ComplexMatrix, p: PExponent) -> Result<Interval> {
        let r = p_num_radius_cached(x, p, &self.ev.options, &mut self.ev.cache)?;
        Ok(Interval::new(r.lower, r.upper))
    }
}

pub fn check(
    id: &str,
    operands: &[ComplexMatrix],
    p: PExponent,
    params: &CheckParams,
) -> Result<InequalityRecord> {
    check_with(&mut Evaluator::default(), id, operands, p, params)
}

fn takes_pair(e: &RegistryEntry) -> bool {
    e.axis == Axis::T || e.hypotheses.iter().any(|h| matches!(h, Hypothesis::TransformZero(_)))
}

fn resolve(e: &RegistryEntry, p: PExponent, params: &CheckParams) -> Result<(Resolved, RecordParams)> {
    let reject = |name: &str| Error::InvalidParameter(format!("{} does not take parameter `{name}`", e.id));
    let unit = |name: &str, v: f64| {
        if (0.0..=1.0).contains(&v) {
            Ok(v)
        } else {
            Err(Error::InvalidParameter(format!("{name} must lie in [0, 1], got {v}")))
        }
    };
    let mut rec = RecordParams {
        witness: params.witness.clone(),
        ..Default::default()
    };

    let pair = if takes_pair(e) {
        let t = unit("t", params.t.unwrap_or(0.5))?;
        let pair = match params.pair_scale {
            Some(c) if c != 1.0 => FunctionPair::scaled_power(t, c)?,
            _ => FunctionPair::power(t)?,
        };
        rec.t = Some(t);
        rec.pair = Some(pair.label());
        pair
    } else {
        if params.t.is_some() {
            return Err(reject("t"));
        }
        if params.pair_scale.is_some() {
            return Err(reject("c"));
        }
        FunctionPair::Power { a: 0.5 }
    };

    let nu = if e.axis == Axis::Nu {
        let nu = unit("nu", params.nu.unwrap_or(0.5))?;
        rec.nu = Some(nu);
        nu
    } else if params.nu.is_some() {
        return Err(reject("nu"));
    } else {
        0.5
    };

    let q = if e.id == "SCH-MONO" {
        let q = match params.q {
            Some(q) => q,
            None if p.is_infinite() => PExponent::INF,
            None => PExponent::new(2.0 * p.value())?,
        };
        if q < p {
            return Err(Error::InvalidParameter(format!("q must be at least p = {p}, got {q}")));
        }
        rec.q = Some(q);
        q
    } else if params.q.is_some() {
        return Err(reject("q"));
    } else {
        p
    };

    let variant = if e.variants {
        let v = params.variant.unwrap_or(Variant::AsDerived);
        rec.variant = Some(v);
        Some(v)
    } else if params.variant.is_some() {
        return Err(reject("variant"));
    } else {
        None
    };

    let t = pair.params().0;
    Ok((Resolved { t, nu, q, pair, variant }, rec))
}

fn check_hypothesis(e: &RegistryEntry, h: Hypothesis, ops: &[ComplexMatrix], pair: FunctionPair) -> Result<()> {
    let fail = |residual: f64| {
        Err(Error::Hypothesis {
            check: e.id.to_string(),
            hypothesis: h.label(),
            residual,
        })
    };
    let tol = HYPOTHESIS_TOL;
    match h {
        Hypothesis::SelfAdjoint(i) | Hypothesis::Positive(i) => {
            let x = &ops[i];
            let s = x.tol_scale();
            let r = x.hermitian_residual();
            if r > tol * s {
                return fail(r);
            }
            if matches!(h, Hypothesis::Positive(_)) {
                let min = hermitian_eigenvalues(&x.hermitian_part())?[0];
                if min < -tol * s {
                    return fail(-min);
                }
            }
        }
        Hypothesis::Normal(i) => {
            let s = ops[i].tol_scale();
            let r = ops[i].normality_residual();
            if r > tol * s * s {
                return fail(r);
            }
        }
        Hypothesis::Unitary(i) => {
            let r = ops[i].unitarity_residual();
            if r > tol {
                return fail(r);
            }
        }
        Hypothesis::SquareZero(i) => {
            let s = ops[i].tol_scale();
            let r = (&ops[i] * &ops[i]).max_abs();
            if r > tol * s * s {
                return fail(r);
            }
        }
        Hypothesis::TransformZero(i) => {
            let r = PolarCalculus::new(&ops[i])?.aluthge(pair).max_abs();
            if r > 10.0 * tol * ops[i].tol_scale() {
                return fail(r);
            }
        }
        Hypothesis::ProductSelfAdjoint => {
            let ts = &ops[0] * &ops[1];
            let r = ts.hermitian_residual();
            if r > tol * ts.tol_scale() {
                return fail(r);
            }
        }
    }
    Ok(())
}

/// 64-bit FNV-1a over the operands' little-endian bytes.
pub fn operand_digest(ops: &[ComplexMatrix]) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for op in ops {
        for b in op.to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    format!("{h:016x}")
}

pub fn link_verdict(lhs: Interval, rhs: Interval, tol: f64) -> Verdict {
    if lhs.hi <= rhs.lo + tol {
        Verdict::CertifiedHolds
    } else if lhs.lo > rhs.hi + tol {
        Verdict::CertifiedViolated
    } else {
        Verdict::Indeterminate
    }
}

pub fn overlap_verdict(lhs: Interval, rhs: Interval, tol: f64) -> Verdict {
    if lhs.lo <= rhs.hi + tol && rhs.lo <= lhs.hi + tol {
        Verdict::CertifiedHolds
    } else {
        Verdict::CertifiedViolated
    }
}

fn combine(relation: Relation, links: &[Link], tol: f64) -> (Link, Verdict) {
    let verdicts: Vec<Verdict> = links
        .iter()
        .map(|l| match relation {
            Relation::Inequality => link_verdict(l.lhs, l.rhs, tol),
            Relation::Equality => overlap_verdict(l.lhs, l.rhs, tol),
        })
        .collect();
    let verdict = if verdicts.contains(&Verdict::CertifiedViolated) {
        Verdict::CertifiedViolated
    } else if verdicts.iter().all(|v| *v == Verdict::CertifiedHolds) {
        Verdict::CertifiedHolds
    } else {
        Verdict::Indeterminate
    };
    let key = |l: &Link| match relation {
        Relation::Inequality => l.rhs.lo - l.lhs.hi,
        Relation::Equality => -(l.lhs.mid() - l.rhs.mid()).abs(),
    };
    let reported = *links
        .iter()
        .min_by(|a, b| key(a).total_cmp(&key(b)))
        .expect("every entry yields at least one link");
    (reported, verdict)
}

pub fn check_with(
    ev: &mut Evaluator,
    id: &str,
    operands: &[ComplexMatrix],
    p: PExponent,
    params: &CheckParams,
) -> Result<InequalityRecord> {
    let entry = lookup(id)?;
    if operands.len() != entry.arity {
        return Err(Error::Arity {
            check: id.to_string(),
            expected: entry.arity,
            got: operands.len(),
        });
    }
    let n = operands[0].dim();
    if let Some(bad) = operands.iter().find(|o| o.dim() != n) {
        return Err(Error::DimensionMismatch { left: n, right: bad.dim() });
    }
    if !entry.p_range.contains(p) {
        return Err(Error::InvalidExponent(format!(
            "{id} is stated for p in {}, got {p}",
            entry.p_range.label()
        )));
    }
    let (resolved, rec_params) = resolve(entry, p, params)?;
    for &h in entry.hypotheses {
        check_hypothesis(entry, h, operands, resolved.pair)?;
    }

    let scale = operands.iter().map(|o| o.tol_scale()).fold(1.0, f64::max);
    let mut ctx = Ctx {
        ev,
        p,
        eps: VALUE_BAND * scale,
    };
    let links = (entry.eval)(&mut ctx, operands, &resolved)?;

    let mut big: f64 = 0.0;
    for o in operands {
        big = big.max(schatten_norm(o, p)?);
    }
    let tol = VERDICT_TOL * (1.0 + big);
    let (reported, verdict) = combine(entry.relation, &links, tol);
    // the two sides cannot be told apart: their enclosures meet within the band
    let eq_tol = EQUALITY_TOL * (1.0 + big);
    let equality_attained =
        reported.lhs.lo <= reported.rhs.hi + eq_tol && reported.rhs.lo <= reported.lhs.hi + eq_tol;

    Ok(InequalityRecord {
        id: id.to_string(),
        operands: OperandInfo {
            n,
            digest: operand_digest(operands),
            ensembles: Vec::new(),
            seed: None,
        },
        p,
        params: rec_params,
        lhs: reported.lhs,
        rhs: reported.rhs,
        slack: reported.rhs.lo - reported.lhs.hi,
        tol,
        verdict,
        equality_attained,
    })
}
