//! The catalogue of checkable statements.
//!
//! Each entry evaluates to one or more links `lhs <= rhs` (or `lhs = rhs`
//! for equality entries) built from interval-valued norms and radii.

use serde::Serialize;

use super::interval::Interval;
use super::{Ctx, Resolved, Variant};
use crate::error::{Error, Result};
use crate::linalg::{herm_apply, ComplexMatrix, PowerFn};
use crate::schatten::PExponent;
use crate::transforms::{off_diag_block, FunctionPair, PolarCalculus};

/// Grid over which the min-over-t entries minimize.
pub const MIN_T_GRID: [f64; 21] = [
    0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8,
    0.85, 0.9, 0.95, 1.0,
];

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Inequality,
    Equality,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum PRange {
    /// `lo <= p <= hi`
    Range { lo: PExponent, hi: PExponent },
    Fixed { p: PExponent },
}

impl PRange {
    const ALL: PRange = PRange::Range {
        lo: PExponent::ONE,
        hi: PExponent::INF,
    };
    const AT_LEAST_TWO: PRange = PRange::Range {
        lo: PExponent::TWO,
        hi: PExponent::INF,
    };

    pub fn contains(&self, p: PExponent) -> bool {
        match *self {
            PRange::Range { lo, hi } => lo <= p && p <= hi,
            PRange::Fixed { p: q } => p == q,
        }
    }

    pub fn label(&self) -> String {
        match self {
            PRange::Range { lo, hi } => format!("[{lo}, {hi}]"),
            PRange::Fixed { p } => format!("{{{p}}}"),
        }
    }
}

/// Which extra parameter axis a campaign sweeps for the entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    None,
    T,
    Nu,
}

/// Structural preconditions, checked numerically before evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "operand")]
pub enum Hypothesis {
    SelfAdjoint(usize),
    Positive(usize),
    Normal(usize),
    Unitary(usize),
    SquareZero(usize),
    /// The pair transform of the operand vanishes.
    TransformZero(usize),
    /// `T S` is self-adjoint for operands 0 and 1.
    ProductSelfAdjoint,
}

impl Hypothesis {
    pub fn label(&self) -> String {
        let name = |i: &usize| ["T", "S", "X"][*i];
        match self {
            Hypothesis::SelfAdjoint(i) => format!("{} self-adjoint", name(i)),
            Hypothesis::Positive(i) => format!("{} positive", name(i)),
            Hypothesis::Normal(i) => format!("{} normal", name(i)),
            Hypothesis::Unitary(i) => format!("{} unitary", name(i)),
            Hypothesis::SquareZero(i) => format!("{}^2 = 0", name(i)),
            Hypothesis::TransformZero(i) => format!("(f,g)-transform of {} vanishes", name(i)),
            Hypothesis::ProductSelfAdjoint => "TS self-adjoint".to_string(),
        }
    }
}

/// How a campaign draws operands for an entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OperandRecipe {
    /// One operand cycling ginibre / rank_deficient / normal.
    General,
    Hermitian,
    SquareZero,
    /// Two independent operands from the general cycle.
    GeneralPair,
    PositivePair,
    NormalPair,
    /// A general operand and a Haar unitary.
    WithUnitary,
    /// `(A, A*)` or `(H, H^2)`, alternating by trial.
    SelfAdjointProduct,
    /// Two positive operands and a ginibre middle factor.
    PositivePairWithMiddle,
}

type EvalFn = fn(&mut Ctx, &[ComplexMatrix], &Resolved) -> Result<Vec<Link>>;

#[derive(Clone, Copy, Debug)]
pub(crate) struct Link {
    pub lhs: Interval,
    pub rhs: Interval,
}

fn link(lhs: Interval, rhs: Interval) -> Link {
    Link { lhs, rhs }
}

#[derive(Clone, Copy, Serialize)]
pub struct RegistryEntry {
    pub id: &'static str,
    pub description: &'static str,
    pub statement: &'static str,
    pub hypotheses: &'static [Hypothesis],
    pub arity: usize,
    pub p_range: PRange,
    pub axis: Axis,
    pub relation: Relation,
    /// Whether the entry carries as_printed / as_derived variants.
    pub variants: bool,
    pub recipe: OperandRecipe,
    #[serde(skip)]
    pub(crate) eval: EvalFn,
}

impl std::fmt::Debug for RegistryEntry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RegistryEntry").field("id", &self.id).finish_non_exhaustive()
    }
}

impl RegistryEntry {
    /// Entries without variants are established results whose violation
    /// signals a bug rather than a misprint.
    pub fn theorem_level(&self) -> bool {
        !self.variants
    }

    pub fn variant_list(&self) -> &'static [Variant] {
        if self.variants {
            &[Variant::AsPrinted, Variant::AsDerived]
        } else {
            &[]
        }
    }
}

pub fn list_registry() -> &'static [RegistryEntry] {
    &REGISTRY
}

pub fn lookup(id: &str) -> Result<&'static RegistryEntry> {
    REGISTRY
        .iter()
        .find(|e| e.id == id)
        .ok_or_else(|| Error::UnknownCheck(id.to_string()))
}

use Hypothesis as H;
use OperandRecipe as R;

macro_rules! entry {
    ($id:literal, $desc:literal, $stmt:literal, $hyp:expr, $arity:literal, $range:expr,
     $axis:ident, $rel:ident, $variants:literal, $recipe:ident, $eval:ident) => {
        RegistryEntry {
            id: $id,
            description: $desc,
            statement: $stmt,
            hypotheses: $hyp,
            arity: $arity,
            p_range: $range,
            axis: Axis::$axis,
            relation: Relation::$rel,
            variants: $variants,
            recipe: R::$recipe,
            eval: $eval,
        }
    };
}

const FIX2: PRange = PRange::Fixed { p: PExponent::TWO };
const FIXINF: PRange = PRange::Fixed { p: PExponent::INF };

static REGISTRY: [RegistryEntry; 34] = [
    entry!("SCH-MONO", "Schatten norms decrease in the exponent",
        "||T||_inf <= ||T||_q <= ||T||_p <= ||T||_1 for p <= q (q defaults to 2p)",
        &[], 1, PRange::ALL, None, Inequality, false, General, sch_mono),
    entry!("SCH-MULT", "Mixed submultiplicativity with the operator norm",
        "||TS||_p <= ||T||_p ||S|| and ||ST||_p <= ||S|| ||T||_p",
        &[], 2, PRange::ALL, None, Inequality, false, GeneralPair, sch_mult),
    entry!("SCH-BLOCK", "p-norm of diagonal and off-diagonal block operators",
        "||diag(T,S)||_p = ||[[0,T],[S,0]]||_p = (||T||_p^p + ||S||_p^p)^(1/p)",
        &[], 2, PRange::ALL, None, Equality, false, GeneralPair, sch_block),
    entry!("WP-BASIC", "Norm equivalence of the p-numerical radius",
        "||T||_p / 2 <= w_p(T) <= ||T||_p",
        &[], 1, PRange::ALL, None, Inequality, false, General, wp_basic),
    entry!("WP-SA", "Self-adjoint operators attain the upper norm bound",
        "w_p(T) = ||T||_p",
        &[H::SelfAdjoint(0)], 1, PRange::ALL, None, Equality, false, Hermitian, wp_sa),
    entry!("WP-UNIT", "Weak unitary invariance",
        "w_p(Q T Q*) = w_p(T)",
        &[H::Unitary(1)], 2, PRange::ALL, None, Equality, false, WithUnitary, wp_unit),
    entry!("W2-EXACT", "Certified estimator against the closed form at p = 2",
        "w_2(T) = sqrt(||T||_2^2 / 2 + |tr T^2| / 2)",
        &[], 1, FIX2, None, Equality, false, General, w2_exact_entry),
    entry!("W2-SQZERO", "Hilbert-Schmidt radius of a square-zero operator",
        "w_2(T) = ||T||_2 / sqrt(2)",
        &[H::SquareZero(0)], 1, FIX2, None, Equality, false, SquareZero, w2_sqzero),
    entry!("ALU-HS", "t-Aluthge transforms contract the Hilbert-Schmidt norm",
        "||T~_t||_2 <= ||T||_2",
        &[], 1, FIX2, T, Inequality, false, General, alu_hs),
    entry!("YAM", "Numerical radius against the Aluthge transform",
        "w(T) <= (||T|| + w(T~)) / 2",
        &[], 1, FIXINF, None, Inequality, false, General, yam),
    entry!("YAM-MIN", "Minimum over t-Aluthge transforms",
        "w(T) <= (||T|| + min_t w(T~_t)) / 2",
        &[], 1, FIXINF, None, Inequality, false, General, yam_min),
    entry!("DP", "Norm of a sum of positive operators via the product",
        "||T+S|| <= max(||T||, ||S||) + ||TS||^(1/2)",
        &[H::Positive(0), H::Positive(1)], 2, FIXINF, None, Inequality, false, PositivePair, dp),
    entry!("KIT-SUM-POS", "Norm of a sum of positive operators via square roots",
        "||T+S|| <= max(||T||, ||S||) + ||T^(1/2) S^(1/2)||",
        &[H::Positive(0), H::Positive(1)], 2, FIXINF, None, Inequality, false, PositivePair, kit_sum_pos),
    entry!("SUM-ADJ", "Norm of T + S* via mixed moduli",
        "||T+S*|| <= max(||S||, ||T||) + max(|| |S|^(1/2) |T*|^(1/2) ||, || |T|^(1/2) |S*|^(1/2) ||)",
        &[], 2, FIXINF, None, Inequality, false, GeneralPair, sum_adj),
    entry!("SUM-ADJ-REF", "Averaged refinement of the T + S* bound",
        "||T+S*|| <= max(||S||, ||T||) + (|| |S|^(1/2) |T*|^(1/2) || + || |T|^(1/2) |S*|^(1/2) ||) / 2",
        &[], 2, FIXINF, None, Inequality, false, GeneralPair, sum_adj_ref),
    entry!("LEM-RE", "Self-adjoint products are dominated by the real part of the reversed product",
        "||TS||_p <= ||Re(ST)||_p",
        &[H::ProductSelfAdjoint], 2, PRange::ALL, None, Inequality, false, SelfAdjointProduct, lem_re),
    entry!("BC", "Two-regime lower bounds for the p-numerical radius",
        "2^(-1/p) ||T||_p <= w_p(T) (p <= 2), 2^(1/p-1) ||T||_p <= w_p(T) (p >= 2), w_p(T) <= ||T||_p",
        &[], 1, PRange::ALL, None, Inequality, false, General, bc),
    entry!("HEINZ", "Heinz-type interpolation for Schatten norms",
        "||A^nu X B^(1-nu)||_p <= ||AX||_p^nu ||XB||_p^(1-nu)",
        &[H::Positive(0), H::Positive(1)], 3, PRange::ALL, Nu, Inequality, false, PositivePairWithMiddle, heinz),
    entry!("LEM-SUMPOS-P", "Schatten norm of a sum of positive operators",
        "||T+S||_p <= (||T||_p^p + ||S||_p^p)^(1/p) + 2^(1/p) ||T^(1/2) S^(1/2)||_p",
        &[H::Positive(0), H::Positive(1)], 2, PRange::ALL, None, Inequality, false, PositivePair, lem_sumpos_p),
    entry!("THM1", "p-numerical radius via the (f,g)-Aluthge transform",
        "w_p(T) <= 2^(1/p-1) w_p(T~_fg) + 2^(1/p-2) ||f^2(|T|) + g^2(|T|)||_p",
        &[], 1, PRange::ALL, T, Inequality, false, General, thm1),
    entry!("COR1-T", "Power-pair specialization minimized over t",
        "w_p(T) <= min_t [2^(1/p-1) w_p(T~_(1-t)) + 2^(1/p-2) || |T|^(2(1-t)) + |T|^(2t) ||_p]",
        &[], 1, PRange::ALL, None, Inequality, false, General, cor1_t),
    entry!("REM-ALUHALF", "Classical Aluthge specialization",
        "w_p(T) <= 2^(1/p-1) (w_p(T~) + ||T||_p)",
        &[], 1, PRange::ALL, None, Inequality, false, General, rem_aluhalf),
    entry!("REM-SQZERO-EQ", "Radius when the Aluthge transform vanishes",
        "w_p(T) = 2^(1/p-1) ||T||_p",
        &[H::TransformZero(0)], 1, PRange::AT_LEAST_TWO, None, Equality, false, SquareZero, rem_sqzero_eq),
    entry!("THM2", "Squared radius via products with the (f,g)-Aluthge transform",
        "w_p(T)^2 <= (||g(|T|) T~_fg f(|T|)||_(p/2) + ||f(|T|) T~_fg* g(|T|)||_(p/2) + ||T*T + TT*||_(p/2)) / 4",
        &[], 1, PRange::AT_LEAST_TWO, T, Inequality, false, General, thm2),
    entry!("REM-ALUFGZERO-EQ", "Squared radius when the (f,g)-transform vanishes",
        "w_p(T)^2 = ||T*T + TT*||_(p/2) / 4",
        &[H::TransformZero(0)], 1, PRange::AT_LEAST_TWO, None, Equality, false, SquareZero, rem_alufgzero_eq),
    entry!("COR22", "Squared radius with the mixed sum split off",
        "w_p(T)^2 <= (cross terms) / 4 + 2^(2/p-2) (||T||_p^2 + ||T^2||_(p/2))",
        &[], 1, PRange::AT_LEAST_TWO, T, Inequality, false, General, cor22),
    entry!("THM3", "Radius of an off-diagonal block operator",
        "w_p([[0,T],[S,0]]) <= 2^(2/p-2) (||f(|S|) g(|T*|)||_p + ||f(|T|) g(|S*|)||_p) + 2^(1/p-2) (||f^2(|S|)+g^2(|S|)||_p^p + ||f^2(|T|)+g^2(|T|)||_p^p)^(1/p)",
        &[], 2, PRange::ALL, T, Inequality, false, GeneralPair, thm3),
    entry!("COR23", "Schatten norm of T + S*",
        "||T+S*||_p <= 2^(1/p-1) (||f(|S|) g(|T*|)||_p + ||f(|T|) g(|S*|)||_p) + (||f^2(|S|)+g^2(|S|)||_p^p + ||f^2(|T|)+g^2(|T|)||_p^p)^(1/p) / 2",
        &[], 2, PRange::ALL, T, Inequality, false, GeneralPair, cor23),
    entry!("REM-T-HALF-SUM", "T + S* bound at f = g = sqrt",
        "||T+S*||_p <= 2^(1/p-1) (|| |S|^(1/2) |T*|^(1/2) ||_p + || |T|^(1/2) |S*|^(1/2) ||_p) + c (||S||_p^p + ||T||_p^p)^(1/p); c = 1 derived, 2^(1/p-1) printed",
        &[], 2, PRange::ALL, None, Inequality, true, GeneralPair, rem_t_half_sum),
    entry!("EQ-MAXPM", "max of ||T+S||_p and ||T-S||_p",
        "max(||T+S||_p, ||T-S||_p) <= 2^(1/p-1) (|| |S*|^(1/2) |T*|^(1/2) ||_p + || |T|^(1/2) |S|^(1/2) ||_p) + c (||S||_p^p + ||T||_p^p)^(1/p); c = 1 derived, 2^(1/p-1) printed",
        &[], 2, PRange::ALL, None, Inequality, true, GeneralPair, eq_maxpm),
    entry!("EQ-MAXPM-NORMAL", "max of ||T+S||_p and ||T-S||_p for normal operands",
        "max(||T+S||_p, ||T-S||_p) <= 2^(1/p) || |T|^(1/2) |S|^(1/2) ||_p + c (||S||_p^p + ||T||_p^p)^(1/p); c = 1 derived, 2^(1/p-1) printed",
        &[H::Normal(0), H::Normal(1)], 2, PRange::ALL, None, Inequality, true, NormalPair, eq_maxpm_normal),
    entry!("REM-MAXPM-INF", "max of ||T+S|| and ||T-S|| in operator norm",
        "max(||T+S||, ||T-S||) <= (|| |S*|^(1/2) |T*|^(1/2) || + || |T|^(1/2) |S|^(1/2) ||) / 2 + c max(||S||, ||T||); c = 1 derived, 1/2 printed",
        &[], 2, FIXINF, None, Inequality, true, GeneralPair, rem_maxpm_inf),
    entry!("REM-POSREF", "Sum of positive operators, claimed refinement",
        "||T+S|| <= c max(||S||, ||T||) + ||T^(1/2) S^(1/2)||; c = 1 derived, 1/2 printed",
        &[H::Positive(0), H::Positive(1)], 2, FIXINF, None, Inequality, true, PositivePair, rem_posref),
    entry!("REM-THM2-T", "t-Aluthge chain for the squared radius",
        "w_p(T)^2 <= (|| |T| T~_t ||^(1-t) || T~_t |T| ||^t + || |T| T~_t* ||^t || T~_t* |T| ||^(1-t) + ||T*T+TT*||) / 4 (all (p/2)-norms) and w_p(T)^2 <= ||T||_(p/2) min_t ||T~_t|| / 2 + ||T*T+TT*||_(p/2) / 4",
        &[], 1, PRange::AT_LEAST_TWO, T, Inequality, false, General, rem_thm2_t),
];

// ---- helpers --------------------------------------------------------------

/// `x^e` with `0^0 = 1`.
fn pw(x: f64, e: f64) -> f64 {
    PowerFn::power(e).eval(x)
}

fn sqrt_psd(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    herm_apply(h, PowerFn::power(0.5))
}

/// `f^2(|T|) + g^2(|T|)`
fn square_sum(calc: &PolarCalculus, pair: FunctionPair) -> ComplexMatrix {
    calc.of_modulus(|x| pair.square_sum(x))
}

/// `psum` lifted to intervals (monotone in both arguments).
fn psum(p: PExponent, a: Interval, b: Interval) -> Interval {
    Interval::new(p.psum(a.lo, b.lo), p.psum(a.hi, b.hi))
}

/// `(|| |S|^(1/2) |T*|^(1/2) ||_p, || |T|^(1/2) |S*|^(1/2) ||_p)` for general
/// pairs `f(|S|) g(|T*|)` and `f(|T|) g(|S*|)`.
fn mixed_cross(
    ctx: &Ctx,
    ct: &PolarCalculus,
    cs: &PolarCalculus,
    pair: FunctionPair,
    p: PExponent,
) -> Result<(Interval, Interval)> {
    let (f, g) = (pair.f(), pair.g());
    let a = &cs.of_modulus(|x| f.eval(x)) * &ct.of_adjoint_modulus(|x| g.eval(x));
    let b = &ct.of_modulus(|x| f.eval(x)) * &cs.of_adjoint_modulus(|x| g.eval(x));
    Ok((ctx.norm(&a, p)?, ctx.norm(&b, p)?))
}

const HALF: FunctionPair = FunctionPair::Power { a: 0.5 };

// ---- evaluators -----------------------------------------------------------

fn sch_mono(ctx: &mut Ctx, ops: &[ComplexMatrix], r: &Resolved) -> Result<Vec<Link>> {
    let t = &ops[0];
    let ninf = ctx.norm(t, PExponent::INF)?;
    let nq = ctx.norm(t, r.q)?;
    let np = ctx.norm(t, ctx.p)?;
    let n1 = ctx.norm(t, PExponent::ONE)?;
    Ok(vec![link(ninf, nq), link(nq, np), link(np, n1)])
}

fn sch_mult(ctx: &mut Ctx, ops: &[ComplexMatrix], _: &Resolved) -> Result<Vec<Link>> {
    let (t, s) = (&ops[0], &ops[1]);
    let p = ctx.p;
    let (tp, sinf) = (ctx.norm(t, p)?, ctx.norm(s, PExponent::INF)?);
    Ok(vec![
        link(ctx.norm(&(t * s), p)?, tp.mul(sinf)),
        link(ctx.norm(&(s * t), p)?, sinf.mul(tp)),
    ])
}

fn sch_block(ctx: &mut Ctx, ops: &[ComplexMatrix], _: &Resolved) -> Result<Vec<Link>> {
    let (t, s) = (&ops[0], &ops[1]);
    let p = ctx.p;
    let z = ComplexMatrix::zeros(t.dim());
    let diag = ComplexMatrix::from_blocks(t, &z, &z, s)?;
    let off = off_diag_block(t, s)?;
    let rhs = psum(p, ctx.norm(t, p)?, ctx.norm(s, p)?);
    Ok(vec![link(ctx.norm(&diag, p)?, rhs), link(ctx.norm(&off, p)?, rhs)])
}

fn wp_basic(ctx: &mut Ctx, ops: &[ComplexMatrix], _: &Resolved) -> Result<Vec<Link>> {
    let p = ctx.p;
    let w = ctx.radius(&ops[0], p)?;
    let n = ctx.norm(&ops[0], p)?;
    Ok(vec![link(n.scale(0.5), w), link(w, n)])
}

fn wp_sa(ctx: &mut Ctx, ops: &[ComplexMatrix], _: &Resolved) -> Result<Vec<Link>> {
    let p = ctx.p;
    Ok(vec![link(ctx.radius(&ops[0], p)?, ctx.norm(&ops[0], p)?)])
}

fn wp_unit(ctx: &mut Ctx, ops: &[ComplexMatrix], _: &Resolved) -> Result<Vec<Link>> {
    let (t, q) = (&ops[0], &ops[1]);
    let p = ctx.p;
    let conj = &(q * t) * &q.adjoint();
    Ok(vec![link(ctx.radius(&conj, p)?, ctx.radius(t, p)?)])
}

fn w2_exact_entry(ctx: &mut Ctx, ops: &[ComplexMatrix], _: &Resolved) -> Result<Vec<Link>> {
    let w = ctx.radius(&ops[0], PExponent::TWO)?;
    Ok(vec![link(w, ctx.exact(crate::schatten::w2_exact(&ops[0])))])
}

fn w2_sqzero(ctx: &mut Ctx, ops: &[ComplexMatrix], _: &Resolved) -> Result<Vec<Link>> {
    let w = ctx.radius(&ops[0], PExponent::TWO)?;
    let n = ctx.norm(&ops[0], PExponent::TWO)?;
    Ok(vec![link(w, n.scale(std::f64::consts::FRAC_1_SQRT_2))])
}

fn alu_hs(ctx: &mut Ctx, ops: &[ComplexMatrix], r: &Resolved) -> Result<Vec<Link>> {
    let calc = PolarCalculus::new(&ops[0])?;
    let tt = calc.aluthge(FunctionPair::power(r.t)?);
    Ok(vec![link(
        ctx.norm(&tt, PExponent::TWO)?,
        ctx.norm(&ops[0], PExponent::TWO)?,
    )])
}

fn yam(ctx: &mut Ctx, ops: &[ComplexMatrix], _: &Resolved) -> Result<Vec<Link>> {
    let inf = PExponent::INF;
    let calc = PolarCalculus::new(&ops[0])?;
    let w = ctx.radius(&ops[0], inf)?;
    let wt = ctx.radius(&calc.aluthge(HALF), inf)?;
    Ok(vec![link(w, ctx.norm(&ops[0], inf)?.add(wt).scale(0.5))])
}

fn yam_min(ctx: &mut Ctx, ops: &[ComplexMatrix], _: &Resolved) -> Result<Vec<Link>> {
    let inf = PExponent::INF;
    let calc = PolarCalculus::new(&ops[0])?;
    let w = ctx.radius(&ops[0], inf)?;
    let mut radii = Vec::with_capacity(MIN_T_GRID.len());
    for &t in &MIN_T_GRID {
        radii.push(ctx.radius(&calc.aluthge(FunctionPair::power(t)?), inf)?);
    }
    let min = Interval::min_of(radii).expect("grid is non-empty");
    Ok(vec![link(w, ctx.norm(&ops[0], inf)?.add(min).scale(0.5))])
}

fn dp(ctx: &mut Ctx, ops: &[ComplexMatrix], _: &Resolved) -> Result<Vec<Link>> {
    let (t, s) = (&ops[0], &ops[1]);
    let inf = PExponent::INF;
    let lhs = ctx.norm(&(t + s), inf)?;
    let rhs = ctx
        .norm(t, inf)?
        .max(ctx.norm(s, inf)?)
        .add(ctx.norm(&(t * s), inf)?.sqrt());
    Ok(vec![link(lhs, rhs)])
}

fn kit_sum_pos(ctx: &mut Ctx, ops: &[ComplexMatrix], _: &Resolved) -> Result<Vec<Link>> {
    positive_sum(ctx, ops, 1.0)
}

/// `||T+S|| <= c max(||T||, ||S||) + ||T^(1/2) S^(1/2)||`
fn positive_sum(ctx: &mut Ctx, ops: &[ComplexMatrix], c: f64) -> Result<Vec<Link>> {
    let (t, s) = (&ops[0], &ops[1]);
    let inf = PExponent::INF;
    let root = &sqrt_psd(t)? * &sqrt_psd(s)?;
    let lhs = ctx.norm(&(t + s), inf)?;
    let rhs = ctx
        .norm(t, inf)?
        .max(ctx.norm(s, inf)?)
        .scale(c)
        .add(ctx.norm(&root, inf)?);
    Ok(vec![link(lhs, rhs)])
}

fn sum_adj_parts(
    ctx: &mut Ctx,
    ops: &[ComplexMatrix],
) -> Result<(Interval, Interval, Interval, Interval)> {
    let (t, s) = (&ops[0], &ops[1]);
    let inf = PExponent::INF;
    let (ct, cs) = (PolarCalculus::new(t)?, PolarCalculus::new(s)?);
    let (a, b) = mixed_cross(ctx, &ct, &cs, HALF, inf)?;
    let lhs = ctx.norm(&(t + &s.adjoint()), inf)?;
    let big = ctx.norm(s, inf)?.max(ctx.norm(t, inf)?);
    Ok((lhs, big, a, b))
}

fn sum_adj(ctx: &mut Ctx, ops: &[ComplexMatrix], _: &Resolved) -> Result<Vec<Link>> {
    let (lhs, big, a, b) = sum_adj_parts(ctx, ops)?;
    Ok(vec![link(lhs, big.add(a.max(b)))])
}

fn sum_adj_ref(ctx: &mut Ctx, ops: &[ComplexMatrix], _: &Resolved) -> Result<Vec<Link>> {
    let (lhs, big, a, b) = sum_adj_parts(ctx, ops)?;
    Ok(vec![link(lhs, big.add(a.add(b).scale(0.5)))])
}

fn lem_re(ctx: &mut Ctx, ops: &[ComplexMatrix], _: &Resolved) -> Result<Vec<Link>> {
    let (t, s) = (&ops[0], &ops[1]);
    let p = ctx.p;
    let re = (s * t).hermitian_part();
    Ok(vec![link(ctx.norm(&(t * s), p)?, ctx.norm(&re, p)?)])
}

fn bc(ctx: &mut Ctx, ops: &[ComplexMatrix], _: &Resolved) -> Result<Vec<Link>> {
    let p = ctx.p;
    let w = ctx.radius(&ops[0], p)?;
    let n = ctx.norm(&ops[0], p)?;
    let c = if p.value() <= 2.0 {
        p.pow2(-1.0, 0.0)
    } else {
        p.pow2(1.0, 1.0)
    };
    Ok(vec![link(n.scale(c), w), link(w, n)])
}

fn heinz(ctx: &mut Ctx, ops: &[ComplexMatrix], r: &Resolved) -> Result<Vec<Link>> {
    let (a, b, x) = (&ops[0], &ops[1], &ops[2]);
    let p = ctx.p;
    let nu = r.nu;
    let mid = &(&herm_apply(a, PowerFn::power(nu))? * x) * &herm_apply(b, PowerFn::power(1.0 - nu))?;
    let rhs = ctx
        .norm(&(a * x), p)?
        .powf(nu)
        .mul(ctx.norm(&(x * b), p)?.powf(1.0 - nu));
    Ok(vec![link(ctx.norm(&mid, p)?, rhs)])
}

fn lem_sumpos_p(ctx: &mut Ctx, ops: &[ComplexMatrix], _: &Resolved) -> Result<Vec<Link>> {
    let (t, s) = (&ops[0], &ops[1]);
    let p = ctx.p;
    let root = &sqrt_psd(t)? * &sqrt_psd(s)?;
    let rhs = psum(p, ctx.norm(t, p)?, ctx.norm(s, p)?).add(ctx.norm(&root, p)?.scale(p.pow2(1.0, 0.0)));
    Ok(vec![link(ctx.norm(&(t + s), p)?, rhs)])
}

fn thm1(ctx: &mut Ctx, ops: &[ComplexMatrix], r: &Resolved) -> Result<Vec<Link>> {
    let p = ctx.p;
    let calc = PolarCalculus::new(&ops[0])?;
    let w = ctx.radius(&ops[0], p)?;
    let wt = ctx.radius(&calc.aluthge(r.pair), p)?;
    let sq = ctx.norm(&square_sum(&calc, r.pair), p)?;
    let rhs = wt.scale(p.pow2(1.0, 1.0)).add(sq.scale(p.pow2(1.0, 2.0)));
    Ok(vec![link(w, rhs)])
}

fn cor1_t(ctx: &mut Ctx, ops: &[ComplexMatrix], _: &Resolved) -> Result<Vec<Link>> {
    let p = ctx.p;
    let calc = PolarCalculus::new(&ops[0])?;
    let w = ctx.radius(&ops[0], p)?;
    let mut candidates = Vec::with_capacity(MIN_T_GRID.len());
    for &t in &MIN_T_GRID {
        let wt = ctx.radius(&calc.aluthge(FunctionPair::power(1.0 - t)?), p)?;
        let sum = calc.of_modulus(|x| pw(x, 2.0 * (1.0 - t)) + pw(x, 2.0 * t));
        let sq = ctx.norm(&sum, p)?;
        candidates.push(wt.scale(p.pow2(1.0, 1.0)).add(sq.scale(p.pow2(1.0, 2.0))));
    }
    Ok(vec![link(w, Interval::min_of(candidates).expect("grid is non-empty"))])
}

fn rem_aluhalf(ctx: &mut Ctx, ops: &[ComplexMatrix], _: &Resolved) -> Result<Vec<Link>> {
    let p = ctx.p;
    let calc = PolarCalculus::new(&ops[0])?;
    let w = ctx.radius(&ops[0], p)?;
    let wt = ctx.radius(&calc.aluthge(HALF), p)?;
    let rhs = wt.add(ctx.norm(&ops[0], p)?).scale(p.pow2(1.0, 1.0));
    Ok(vec![link(w, rhs)])
}

fn rem_sqzero_eq(ctx: &mut Ctx, ops: &[ComplexMatrix], _: &Resolved) -> Result<Vec<Link>> {
    let p = ctx.p;
    let w = ctx.radius(&ops[0], p)?;
    Ok(vec![link(w, ctx.norm(&ops[0], p)?.scale(p.pow2(1.0, 1.0)))])
}

/// `(||g T~ f||_(p/2), ||f T~* g||_(p/2))` for the pair.
fn thm2_cross(ctx: &Ctx, calc: &PolarCalculus, pair: FunctionPair) -> Result<(Interval, Interval)> {
    let ph = ctx.p.half()?;
    let (f, g) = (pair.f(), pair.g());
    let fm = calc.of_modulus(|x| f.eval(x));
    let gm = calc.of_modulus(|x| g.eval(x));
    let tt = calc.aluthge(pair);
    let a = &(&gm * &tt) * &fm;
    let b = &(&fm * &tt.adjoint()) * &gm;
    Ok((ctx.norm(&a, ph)?, ctx.norm(&b, ph)?))
}

fn mixed_square(t: &ComplexMatrix) -> ComplexMatrix {
    let ta = t.adjoint();
    &(&ta * t) + &(t * &ta)
}

fn thm2(ctx: &mut Ctx, ops: &[ComplexMatrix], r: &Resolved) -> Result<Vec<Link>> {
    let p = ctx.p;
    let ph = p.half()?;
    let calc = PolarCalculus::new(&ops[0])?;
    let w2 = ctx.radius(&ops[0], p)?.square();
    let (a, b) = thm2_cross(ctx, &calc, r.pair)?;
    let m = ctx.norm(&mixed_square(&ops[0]), ph)?;
    Ok(vec![link(w2, a.add(b).add(m).scale(0.25))])
}

fn rem_alufgzero_eq(ctx: &mut Ctx, ops: &[ComplexMatrix], _: &Resolved) -> Result<Vec<Link>> {
    let p = ctx.p;
    let w2 = ctx.radius(&ops[0], p)?.square();
    let m = ctx.norm(&mixed_square(&ops[0]), p.half()?)?;
    Ok(vec![link(w2, m.scale(0.25))])
}

fn cor22(ctx: &mut Ctx, ops: &[ComplexMatrix], r: &Resolved) -> Result<Vec<Link>> {
    let p = ctx.p;
    let ph = p.half()?;
    let t = &ops[0];
    let calc = PolarCalculus::new(t)?;
    let w2 = ctx.radius(t, p)?.square();
    let (a, b) = thm2_cross(ctx, &calc, r.pair)?;
    let tail = ctx
        .norm(t, p)?
        .square()
        .add(ctx.norm(&(t * t), ph)?)
        .scale(p.pow2(2.0, 2.0));
    Ok(vec![link(w2, a.add(b).scale(0.25).add(tail))])
}

/// Cross and square-sum terms shared by the block bound and its corollary.
fn block_terms(
    ctx: &Ctx,
    ops: &[ComplexMatrix],
    pair: FunctionPair,
) -> Result<(Interval, Interval)> {
    let p = ctx.p;
    let (ct, cs) = (PolarCalculus::new(&ops[0])?, PolarCalculus::new(&ops[1])?);
    let (a, b) = mixed_cross(ctx, &ct, &cs, pair, p)?;
    let qs = ctx.norm(&square_sum(&cs, pair), p)?;
    let qt = ctx.norm(&square_sum(&ct, pair), p)?;
    Ok((a.add(b), psum(p, qs, qt)))
}

fn thm3(ctx: &mut Ctx, ops: &[ComplexMatrix], r: &Resolved) -> Result<Vec<Link>> {
    let p = ctx.p;
    let block = off_diag_block(&ops[0], &ops[1])?;
    let w = ctx.radius(&block, p)?;
    let (cross, sq) = block_terms(ctx, ops, r.pair)?;
    let rhs = cross.scale(p.pow2(2.0, 2.0)).add(sq.scale(p.pow2(1.0, 2.0)));
    Ok(vec![link(w, rhs)])
}

fn cor23(ctx: &mut Ctx, ops: &[ComplexMatrix], r: &Resolved) -> Result<Vec<Link>> {
    let p = ctx.p;
    let lhs = ctx.norm(&(&ops[0] + &ops[1].adjoint()), p)?;
    let (cross, sq) = block_terms(ctx, ops, r.pair)?;
    let rhs = cross.scale(p.pow2(1.0, 1.0)).add(sq.scale(0.5));
    Ok(vec![link(lhs, rhs)])
}

/// Coefficient on the `psum` / max term: 1 as derived, as printed otherwise.
fn tail_coef(variant: Option<Variant>, printed: f64) -> f64 {
    match variant {
        Some(Variant::AsPrinted) => printed,
        _ => 1.0,
    }
}

fn rem_t_half_sum(ctx: &mut Ctx, ops: &[ComplexMatrix], r: &Resolved) -> Result<Vec<Link>> {
    let (t, s) = (&ops[0], &ops[1]);
    let p = ctx.p;
    let (ct, cs) = (PolarCalculus::new(t)?, PolarCalculus::new(s)?);
    let (a, b) = mixed_cross(ctx, &ct, &cs, HALF, p)?;
    let lhs = ctx.norm(&(t + &s.adjoint()), p)?;
    let tail = psum(p, ctx.norm(s, p)?, ctx.norm(t, p)?);
    let c = p.pow2(1.0, 1.0);
    let rhs = a.add(b).scale(c).add(tail.scale(tail_coef(r.variant, c)));
    Ok(vec![link(lhs, rhs)])
}

/// `max(||T+S||_p, ||T-S||_p)`
fn plus_minus(ctx: &Ctx, t: &ComplexMatrix, s: &ComplexMatrix, p: PExponent) -> Result<Interval> {
    Ok(ctx.norm(&(t + s), p)?.max(ctx.norm(&(t - s), p)?))
}

/// `(|| |S*|^(1/2) |T*|^(1/2) ||_p, || |T|^(1/2) |S|^(1/2) ||_p)`
fn pm_cross(ctx: &Ctx, ct: &PolarCalculus, cs: &PolarCalculus, p: PExponent) -> Result<(Interval, Interval)> {
    let a = &cs.of_adjoint_modulus(f64::sqrt) * &ct.of_adjoint_modulus(f64::sqrt);
    let b = &ct.of_modulus(f64::sqrt) * &cs.of_modulus(f64::sqrt);
    Ok((ctx.norm(&a, p)?, ctx.norm(&b, p)?))
}

fn eq_maxpm(ctx: &mut Ctx, ops: &[ComplexMatrix], r: &Resolved) -> Result<Vec<Link>> {
    let (t, s) = (&ops[0], &ops[1]);
    let p = ctx.p;
    let (ct, cs) = (PolarCalculus::new(t)?, PolarCalculus::new(s)?);
    let (a, b) = pm_cross(ctx, &ct, &cs, p)?;
    let tail = psum(p, ctx.norm(s, p)?, ctx.norm(t, p)?);
    let c = p.pow2(1.0, 1.0);
    let rhs = a.add(b).scale(c).add(tail.scale(tail_coef(r.variant, c)));
    Ok(vec![link(plus_minus(ctx, t, s, p)?, rhs)])
}

fn eq_maxpm_normal(ctx: &mut Ctx, ops: &[ComplexMatrix], r: &Resolved) -> Result<Vec<Link>> {
    let (t, s) = (&ops[0], &ops[1]);
    let p = ctx.p;
    let (ct, cs) = (PolarCalculus::new(t)?, PolarCalculus::new(s)?);
    let (_, b) = pm_cross(ctx, &ct, &cs, p)?;
    let tail = psum(p, ctx.norm(s, p)?, ctx.norm(t, p)?);
    let rhs = b
        .scale(p.pow2(1.0, 0.0))
        .add(tail.scale(tail_coef(r.variant, p.pow2(1.0, 1.0))));
    Ok(vec![link(plus_minus(ctx, t, s, p)?, rhs)])
}

fn rem_maxpm_inf(ctx: &mut Ctx, ops: &[ComplexMatrix], r: &Resolved) -> Result<Vec<Link>> {
    let (t, s) = (&ops[0], &ops[1]);
    let inf = PExponent::INF;
    let (ct, cs) = (PolarCalculus::new(t)?, PolarCalculus::new(s)?);
    let (a, b) = pm_cross(ctx, &ct, &cs, inf)?;
    let big = ctx.norm(s, inf)?.max(ctx.norm(t, inf)?);
    let rhs = a.add(b).scale(0.5).add(big.scale(tail_coef(r.variant, 0.5)));
    Ok(vec![link(plus_minus(ctx, t, s, inf)?, rhs)])
}

fn rem_posref(ctx: &mut Ctx, ops: &[ComplexMatrix], r: &Resolved) -> Result<Vec<Link>> {
    positive_sum(ctx, ops, tail_coef(r.variant, 0.5))
}

fn rem_thm2_t(ctx: &mut Ctx, ops: &[ComplexMatrix], r: &Resolved) -> Result<Vec<Link>> {
    let p = ctx.p;
    let ph = p.half()?;
    let t_op = &ops[0];
    let t = r.t;
    let calc = PolarCalculus::new(t_op)?;
    let w2 = ctx.radius(t_op, p)?.square();
    let m = ctx.norm(&mixed_square(t_op), ph)?;

    let modulus = calc.of_modulus(|x| x);
    let tt = calc.aluthge(FunctionPair::power(t)?);
    let tta = tt.adjoint();
    let first = ctx
        .norm(&(&modulus * &tt), ph)?
        .powf(1.0 - t)
        .mul(ctx.norm(&(&tt * &modulus), ph)?.powf(t));
    let second = ctx
        .norm(&(&modulus * &tta), ph)?
        .powf(t)
        .mul(ctx.norm(&(&tta * &modulus), ph)?.powf(1.0 - t));
    let heinz_form = first.add(second).add(m).scale(0.25);

    let mut norms = Vec::with_capacity(MIN_T_GRID.len());
    for &s in &MIN_T_GRID {
        norms.push(ctx.norm(&calc.aluthge(FunctionPair::power(s)?), PExponent::INF)?);
    }
    let min = Interval::min_of(norms).expect("grid is non-empty");
    let final_form = ctx.norm(t_op, ph)?.mul(min).scale(0.5).add(m.scale(0.25));
    Ok(vec![link(w2, heinz_form), link(w2, final_form)])
}
