//! Schatten p-norms and the p-numerical radius
//! `w_p(T) = sup_theta ||Re(e^{i theta} T)||_p` with certified bounds.
//!
//! `h(theta) = ||cos(theta) Re T - sin(theta) Im T||_p` is the restriction of
//! the seminorm `u -> ||u1 Re T - u2 Im T||_p` on R^2 to the unit circle, and
//! has period pi. Convexity of that seminorm bounds `h` on every arc between
//! two evaluated angles (see [`chord_bound`]), which is what certifies the
//! upper end of the interval.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{svd, ComplexMatrix, EigenWorkspace, C64};

/// A Schatten exponent in `[1, inf]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct PExponent(f64);

impl PExponent {
    pub const ONE: PExponent = PExponent(1.0);
    pub const TWO: PExponent = PExponent(2.0);
    pub const INF: PExponent = PExponent(f64::INFINITY);

    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidExponent(format!("p must lie in [1, inf], got {p}")));
        }
        Ok(PExponent(p))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    /// `1/p`, zero at infinity.
    pub fn recip(self) -> f64 {
        if self.is_infinite() {
            0.0
        } else {
            1.0 / self.0
        }
    }

    /// `2^(k/p - m)` with the infinite-p convention `2^(k/p) = 1`.
    pub fn pow2(self, k: f64, m: f64) -> f64 {
        (k * self.recip() - m).exp2()
    }

    /// `p/2`, defined for `p >= 2`.
    pub fn half(self) -> Result<Self> {
        PExponent::new(self.0 / 2.0)
            .map_err(|_| Error::InvalidExponent(format!("p/2 needs p >= 2, got p = {self}")))
    }

    /// `(a^p + b^p)^(1/p)`, `max(a, b)` at infinity.
    pub fn psum(self, a: f64, b: f64) -> f64 {
        norm_of_values(&[a.abs(), b.abs()], self)
    }
}

impl fmt::Display for PExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            write!(f, "inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl FromStr for PExponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "+inf" => Ok(PExponent::INF),
            other => other
                .parse::<f64>()
                .map_err(|_| Error::InvalidExponent(format!("cannot parse `{s}`")))
                .and_then(PExponent::new),
        }
    }
}

impl Serialize for PExponent {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        if self.is_infinite() {
            ser.serialize_str("inf")
        } else {
            ser.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for PExponent {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        let parsed = match Raw::deserialize(de)? {
            Raw::Num(v) => PExponent::new(v),
            Raw::Text(s) => s.parse(),
        };
        parsed.map_err(serde::de::Error::custom)
    }
}

/// `l_p` norm of a vector of non-negative values, scaled by its maximum.
pub fn norm_of_values(values: &[f64], p: PExponent) -> f64 {
    let top = values.iter().cloned().fold(0.0, f64::max);
    if top == 0.0 {
        return 0.0;
    }
    match p.value() {
        v if v.is_infinite() => top,
        v if v == 1.0 => values.iter().sum(),
        v if v == 2.0 => top * values.iter().map(|x| (x / top).powi(2)).sum::<f64>().sqrt(),
        v => top * values.iter().map(|x| (x / top).powf(v)).sum::<f64>().powf(1.0 / v),
    }
}

pub fn schatten_norm(t: &ComplexMatrix, p: PExponent) -> Result<f64> {
    if p == PExponent::TWO {
        return Ok(t.frobenius_norm());
    }
    Ok(norm_of_values(&svd(t)?.sigma, p))
}

/// Schatten norm of a Hermitian matrix from its eigenvalues.
pub fn hermitian_schatten_norm(h: &ComplexMatrix, p: PExponent) -> Result<f64> {
    if p == PExponent::TWO {
        return Ok(h.frobenius_norm());
    }
    let mut abs = crate::linalg::hermitian_eigenvalues(h)?;
    abs.iter_mut().for_each(|v| *v = v.abs());
    Ok(norm_of_values(&abs, p))
}

/// `sqrt(||T||_2^2 / 2 + |tr T^2| / 2)`
pub fn w2_exact(t: &ComplexMatrix) -> f64 {
    let n = t.dim();
    let mut tr_sq = C64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            tr_sq += t[(i, k)] * t[(k, i)];
        }
    }
    (0.5 * t.frobenius_norm().powi(2) + 0.5 * tr_sq.norm()).sqrt()
}

/// Certified enclosure of `w_p(T)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusEstimate {
    pub lower: f64,
    pub upper: f64,
    /// Angle in `[0, pi)` attaining `lower`.
    pub argmax_theta: f64,
    pub grid_points: usize,
    pub refined: bool,
    /// Number of `h(theta)` evaluations spent.
    pub evaluations: usize,
}

impl RadiusEstimate {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusOptions {
    pub grid_points: usize,
    pub refine: bool,
    pub golden_iterations: usize,
    /// Extra evaluations allowed for bound tightening, per grid point.
    pub budget_per_point: usize,
    /// Refinement stops once `upper - lower <= rel_target * lower`.
    pub rel_target: f64,
}

impl Default for RadiusOptions {
    fn default() -> Self {
        Self {
            grid_points: 720,
            refine: true,
            golden_iterations: 40,
            budget_per_point: 16,
            rel_target: 1e-13,
        }
    }
}

impl RadiusOptions {
    pub fn with_grid(grid_points: usize, refine: bool) -> Self {
        Self {
            grid_points,
            refine,
            ..Self::default()
        }
    }
}

/// Upper bound for `h` on an arc of angular width `delta` whose endpoint
/// values are `a` and `b`: the maximum over the arc of the linear
/// interpolant of the two endpoint vectors, which dominates the seminorm.
pub fn chord_bound(a: f64, b: f64, delta: f64) -> f64 {
    let c = delta.cos();
    if a * c <= b && b * c <= a {
        let s = (0.5 * delta).sin();
        ((a - b).powi(2) + 4.0 * a * b * s * s).sqrt() / delta.sin()
    } else {
        a.max(b)
    }
}

/// Evaluates `h(theta)` for one operand, reusing buffers.
struct Profile {
    n: usize,
    re: Vec<C64>,
    im: Vec<C64>,
    p: PExponent,
    /// `(||Re T||_F^2, ||Im T||_F^2, <Re T, Im T>_F)` for the p = 2 shortcut.
    gram: Option<(f64, f64, f64)>,
    ws: EigenWorkspace,
    evaluations: usize,
}

impl Profile {
    fn new(t: &ComplexMatrix, p: PExponent) -> Self {
        let (re, im) = crate::linalg::cartesian(t);
        let n = t.dim();
        let gram = (p == PExponent::TWO).then(|| {
            let (mut aa, mut bb, mut ab) = (0.0, 0.0, 0.0);
            for (x, y) in re.as_slice().iter().zip(im.as_slice()) {
                aa += x.norm_sqr();
                bb += y.norm_sqr();
                ab += (x * y.conj()).re;
            }
            (aa, bb, ab)
        });
        Self {
            n,
            re: re.as_slice().to_vec(),
            im: im.as_slice().to_vec(),
            p,
            gram,
            ws: EigenWorkspace::new(n),
            evaluations: 0,
        }
    }

    fn eval(&mut self, theta: f64) -> Result<f64> {
        if let Some((aa, bb, ab)) = self.gram {
            self.evaluations += 1;
            let (s, c) = theta.sin_cos();
            return Ok((c * c * aa + s * s * bb - 2.0 * c * s * ab).max(0.0).sqrt());
        }
        let p = self.p;
        let abs = self.spectrum(theta)?;
        Ok(norm_of_values(abs, p))
    }

    /// Eigenvalue moduli of `Re(e^{i theta} T)`, in solver order.
    fn spectrum(&mut self, theta: f64) -> Result<&[f64]> {
        self.evaluations += 1;
        let (s, c) = theta.sin_cos();
        let n = self.n;
        let buf = self.ws.matrix_mut(n);
        for ((dst, x), y) in buf.iter_mut().zip(&self.re).zip(&self.im) {
            *dst = x * c - y * s;
        }
        self.ws.solve_abs(n)
    }
}

/// Memoizes the grid spectra of recently seen operands so that estimates for
/// several exponents of the same matrix share one eigenvalue solve per angle.
/// Results are bit-identical to uncached evaluation.
#[derive(Debug, Default)]
pub struct RadiusCache {
    entries: std::collections::VecDeque<CachedGrid>,
    capacity: usize,
}

#[derive(Debug)]
struct CachedGrid {
    operand: ComplexMatrix,
    grid_points: usize,
    /// `grid_points * n` eigenvalue moduli, row per angle.
    spectra: Vec<f64>,
}

impl RadiusCache {
    pub fn new(capacity: usize) -> Self {
        Self {
            entries: Default::default(),
            capacity,
        }
    }

    fn lookup(&self, t: &ComplexMatrix, grid_points: usize) -> Option<&CachedGrid> {
        self.entries
            .iter()
            .find(|e| e.grid_points == grid_points && e.operand == *t)
    }

    fn insert(&mut self, entry: CachedGrid) {
        if self.capacity == 0 {
            return;
        }
        if self.entries.len() == self.capacity {
            self.entries.pop_front();
        }
        self.entries.push_back(entry);
    }
}

#[derive(Clone, Copy, Debug)]
struct Arc {
    left: f64,
    right: f64,
    h_left: f64,
    h_right: f64,
    bound: f64,
}

impl Arc {
    fn new(left: f64, right: f64, h_left: f64, h_right: f64) -> Self {
        Self {
            left,
            right,
            h_left,
            h_right,
            bound: chord_bound(h_left, h_right, right - left),
        }
    }
}

impl PartialEq for Arc {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Arc {}

impl PartialOrd for Arc {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Arc {
    // highest bound first; ties broken by position so the order is total
    fn cmp(&self, other: &Self) -> Ordering {
        self.bound
            .total_cmp(&other.bound)
            .then_with(|| other.left.total_cmp(&self.left))
    }
}

pub fn p_num_radius(
    t: &ComplexMatrix,
    p: PExponent,
    grid_points: usize,
    refine: bool,
) -> Result<RadiusEstimate> {
    p_num_radius_with(t, p, &RadiusOptions::with_grid(grid_points, refine))
}

pub fn p_num_radius_with(
    t: &ComplexMatrix,
    p: PExponent,
    opts: &RadiusOptions,
) -> Result<RadiusEstimate> {
    p_num_radius_cached(t, p, opts, &mut RadiusCache::new(0))
}

pub fn p_num_radius_cached(
    t: &ComplexMatrix,
    p: PExponent,
    opts: &RadiusOptions,
    cache: &mut RadiusCache,
) -> Result<RadiusEstimate> {
    let n_grid = opts.grid_points;
    if n_grid < 8 {
        return Err(Error::GridTooCoarse(n_grid));
    }
    let mut prof = Profile::new(t, p);
    let step = PI / n_grid as f64;
    let n = t.dim();

    let mut values = Vec::with_capacity(n_grid);
    if prof.gram.is_some() {
        for k in 0..n_grid {
            values.push(prof.eval(k as f64 * step)?);
        }
    } else if let Some(hit) = cache.lookup(t, n_grid) {
        values.extend(hit.spectra.chunks(n).map(|abs| norm_of_values(abs, p)));
        prof.evaluations += n_grid;
    } else {
        let mut spectra = Vec::with_capacity(n_grid * n);
        for k in 0..n_grid {
            let abs = prof.spectrum(k as f64 * step)?;
            values.push(norm_of_values(abs, p));
            spectra.extend_from_slice(abs);
        }
        cache.insert(CachedGrid {
            operand: t.clone(),
            grid_points: n_grid,
            spectra,
        });
    }
    let (mut arg, mut lower) = (0.0, values[0]);
    for (k, &v) in values.iter().enumerate() {
        if v > lower {
            lower = v;
            arg = k as f64 * step;
        }
    }
    // rounding slack on each evaluation, relative to the largest value seen
    let pad = 64.0 * f64::EPSILON * lower;

    let arcs: Vec<Arc> = (0..n_grid)
        .map(|k| {
            let right = if k + 1 == n_grid { values[0] } else { values[k + 1] };
            Arc::new(k as f64 * step, (k + 1) as f64 * step, values[k], right)
        })
        .collect();
    let grid_upper = arcs.iter().map(|a| a.bound).fold(lower, f64::max) + pad;

    if !opts.refine {
        return Ok(RadiusEstimate {
            lower,
            upper: grid_upper,
            argmax_theta: arg,
            grid_points: n_grid,
            refined: false,
            evaluations: prof.evaluations,
        });
    }

    // golden-section polish of the best grid angle (lower bound only)
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (arg - step, arg + step);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = prof.eval(x1)?;
    let mut f2 = prof.eval(x2)?;
    for _ in 0..opts.golden_iterations {
        if f1 > lower {
            lower = f1;
            arg = x1;
        }
        if f2 > lower {
            lower = f2;
            arg = x2;
        }
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = prof.eval(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = prof.eval(x2)?;
        }
    }
    for (x, f) in [(x1, f1), (x2, f2)] {
        if f > lower {
            lower = f;
            arg = x;
        }
    }

    // at p = 2, h^2 is a trigonometric quadratic with a closed-form maximum
    let closed_form = prof.gram.map_or(f64::INFINITY, |(aa, bb, ab)| {
        let m = 0.5 * (aa + bb) + (0.25 * (aa - bb).powi(2) + ab * ab).sqrt();
        m.sqrt() * (1.0 + 64.0 * f64::EPSILON)
    });

    // branch and bound on the arc with the largest chord bound
    let mut heap: BinaryHeap<Arc> = arcs.into_iter().collect();
    let budget = opts.budget_per_point * n_grid;
    let mut spent = 0;
    while spent < budget {
        let top = *heap.peek().expect("heap is never empty");
        if top.bound.min(closed_form) - lower <= opts.rel_target * lower {
            break;
        }
        heap.pop();
        let mid = 0.5 * (top.left + top.right);
        let hm = prof.eval(mid)?;
        spent += 1;
        if hm > lower {
            lower = hm;
            arg = mid;
        }
        heap.push(Arc::new(top.left, mid, top.h_left, hm));
        heap.push(Arc::new(mid, top.right, hm, top.h_right));
    }
    let refined_upper = heap
        .peek()
        .map_or(lower, |a| a.bound.min(closed_form).max(lower))
        + pad;

    Ok(RadiusEstimate {
        lower,
        upper: refined_upper.min(grid_upper).max(lower),
        argmax_theta: arg.rem_euclid(PI),
        grid_points: n_grid,
        refined: true,
        evaluations: prof.evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::Lcg;

    fn p(v: f64) -> PExponent {
        PExponent::new(v).unwrap()
    }

    fn j2() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap()
    }

    #[test]
    fn exponent_parsing_and_serde() {
        assert_eq!("inf".parse::<PExponent>().unwrap(), PExponent::INF);
        assert_eq!("1.5".parse::<PExponent>().unwrap(), p(1.5));
        assert!("0.5".parse::<PExponent>().is_err());
        assert!(PExponent::new(f64::NAN).is_err());
        assert_eq!(serde_json::to_string(&PExponent::INF).unwrap(), "\"inf\"");
        assert_eq!(serde_json::to_string(&p(3.0)).unwrap(), "3.0");
        assert_eq!(serde_json::from_str::<PExponent>("2").unwrap(), PExponent::TWO);
        assert_eq!(serde_json::from_str::<PExponent>("\"inf\"").unwrap(), PExponent::INF);
        assert!(serde_json::from_str::<PExponent>("0.2").is_err());
    }

    #[test]
    fn infinite_exponent_arithmetic() {
        let inf = PExponent::INF;
        assert_eq!(inf.pow2(1.0, 0.0), 1.0);
        assert_eq!(inf.pow2(1.0, 1.0), 0.5);
        assert_eq!(inf.pow2(2.0, 2.0), 0.25);
        assert_eq!(inf.psum(3.0, 4.0), 4.0);
        assert_eq!(inf.half().unwrap(), inf);
        assert!((p(2.0).psum(3.0, 4.0) - 5.0).abs() < 1e-15);
        assert!(p(1.5).half().is_err());
    }

    #[test]
    fn norm_examples() {
        let d = ComplexMatrix::from_real_diag(&[3.0, 4.0]);
        assert!((schatten_norm(&d, p(1.0)).unwrap() - 7.0).abs() < 1e-14);
        assert!((schatten_norm(&d, p(2.0)).unwrap() - 5.0).abs() < 1e-14);
        assert!((schatten_norm(&d, PExponent::INF).unwrap() - 4.0).abs() < 1e-14);
        let t = j2().scale_real(2.0);
        for q in [1.0, 1.5, 2.0, 3.0, f64::INFINITY] {
            assert!((schatten_norm(&t, p(q)).unwrap() - 2.0).abs() < 1e-14);
        }
        assert_eq!(schatten_norm(&ComplexMatrix::zeros(3), p(3.0)).unwrap(), 0.0);
    }

    #[test]
    fn hermitian_route_matches_svd_route() {
        let mut rng = Lcg::new(21);
        for n in 1..=7 {
            let h = rng.matrix(n).hermitian_part();
            for q in [1.0, 1.5, 3.0, f64::INFINITY] {
                let a = schatten_norm(&h, p(q)).unwrap();
                let b = hermitian_schatten_norm(&h, p(q)).unwrap();
                assert!((a - b).abs() <= 1e-12 * (1.0 + a));
            }
        }
    }

    #[test]
    fn w2_examples() {
        assert!((w2_exact(&j2()) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((w2_exact(&ComplexMatrix::from_real_diag(&[3.0, -4.0])) - 5.0).abs() < 1e-14);
        let d = ComplexMatrix::from_diag(&[C64::new(0.0, 1.0), C64::new(1.0, 0.0)]);
        assert!((w2_exact(&d) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn chord_bound_is_sound_on_circle_norms() {
        // the Euclidean norm on R^2 is flat on the circle; the bound must cover 1
        for &delta in &[0.01, 0.3, 1.0, 2.0] {
            let b = chord_bound(1.0, 1.0, delta);
            assert!(b >= 1.0 && b <= 1.0 / (0.5 * delta).cos() + 1e-15);
        }
        assert_eq!(chord_bound(1.0, 0.1, 0.5), 1.0);
    }

    #[test]
    fn self_adjoint_radius() {
        let h = ComplexMatrix::from_real_diag(&[1.0, -2.0]);
        let r = p_num_radius(&h, p(1.0), 720, false).unwrap();
        assert!(r.contains(3.0));
        assert!(r.width() <= PI / 720.0 * 3.0);
    }

    #[test]
    fn jordan_radius_is_tight_after_refinement() {
        for q in [1.0, 2.0, 3.0, f64::INFINITY] {
            let q = p(q);
            let r = p_num_radius(&j2(), q, 720, true).unwrap();
            let exact = q.pow2(1.0, 1.0);
            assert!(r.lower <= exact + 1e-15 && exact <= r.upper, "{q}: {r:?}");
            assert!(r.width() <= 1e-6, "{q}: width {}", r.width());
        }
    }

    #[test]
    fn ginibre_p2_matches_closed_form() {
        let mut rng = Lcg::new(99);
        for n in 2..=6 {
            let t = rng.matrix(n);
            let exact = w2_exact(&t);
            let r = p_num_radius(&t, PExponent::TWO, 720, true).unwrap();
            assert!(r.lower <= exact * (1.0 + 1e-14) && exact <= r.upper * (1.0 + 1e-14));
            assert!((r.lower - exact).abs() <= 1e-6 * (1.0 + exact));
        }
    }

    #[test]
    fn eigen_profile_agrees_with_closed_form_profile() {
        // same operand, p = 2 through both evaluation paths
        let t = Lcg::new(5).matrix(4);
        let mut fast = Profile::new(&t, PExponent::TWO);
        let mut slow = Profile::new(&t, PExponent::TWO);
        slow.gram = None;
        for k in 0..37 {
            let th = k as f64 * 0.17;
            let (a, b) = (fast.eval(th).unwrap(), slow.eval(th).unwrap());
            assert!((a - b).abs() < 1e-13, "{a} vs {b}");
        }
    }

    #[test]
    fn cache_is_transparent() {
        let mut rng = Lcg::new(17);
        let mut cache = RadiusCache::new(4);
        let opts = RadiusOptions::default();
        let mats: Vec<ComplexMatrix> = (0..3).map(|_| rng.matrix(3)).collect();
        for _ in 0..2 {
            for t in &mats {
                for q in [1.0, 1.5, 3.0, f64::INFINITY] {
                    let a = p_num_radius_cached(t, p(q), &opts, &mut cache).unwrap();
                    let b = p_num_radius_with(t, p(q), &opts).unwrap();
                    assert_eq!(a, b);
                }
            }
        }
        assert_eq!(cache.entries.len(), 3);
    }

    #[test]
    fn rejects_coarse_grid() {
        assert!(matches!(
            p_num_radius(&j2(), PExponent::TWO, 7, true),
            Err(Error::GridTooCoarse(7))
        ));
    }
}
