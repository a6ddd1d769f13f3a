use serde::{Deserialize, Serialize};

/// Closed interval `[lo, hi]` with outward-monotone arithmetic.
///
/// Products, powers and square roots assume non-negative operands, which is
/// all the inequality catalogue needs (norms, radii, constants).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "inverted interval [{lo}, {hi}]");
        Self { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Self { lo: x, hi: x }
    }

    /// `[x - eps, x + eps]`
    pub fn around(x: f64, eps: f64) -> Self {
        Self::new(x - eps, x + eps)
    }

    /// `[max(0, x - eps), x + eps]`, for quantities known to be non-negative.
    pub fn nonneg_around(x: f64, eps: f64) -> Self {
        Self::new((x - eps).max(0.0), x + eps)
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn add(self, o: Interval) -> Self {
        Self::new(self.lo + o.lo, self.hi + o.hi)
    }

    pub fn scale(self, c: f64) -> Self {
        debug_assert!(c >= 0.0);
        Self::new(c * self.lo, c * self.hi)
    }

    pub fn mul(self, o: Interval) -> Self {
        debug_assert!(self.lo >= 0.0 && o.lo >= 0.0);
        Self::new(self.lo * o.lo, self.hi * o.hi)
    }

    pub fn max(self, o: Interval) -> Self {
        Self::new(self.lo.max(o.lo), self.hi.max(o.hi))
    }

    pub fn min(self, o: Interval) -> Self {
        Self::new(self.lo.min(o.lo), self.hi.min(o.hi))
    }

    /// `x^e` for `e >= 0` on a non-negative interval, with `0^0 = 1`.
    pub fn powf(self, e: f64) -> Self {
        debug_assert!(e >= 0.0 && self.lo >= 0.0);
        if e == 0.0 {
            return Self::point(1.0);
        }
        Self::new(self.lo.powf(e), self.hi.powf(e))
    }

    pub fn square(self) -> Self {
        self.mul(self)
    }

    pub fn sqrt(self) -> Self {
        Self::new(self.lo.max(0.0).sqrt(), self.hi.max(0.0).sqrt())
    }

    /// Minimum of a non-empty family, endpoint-wise.
    pub fn min_of(items: impl IntoIterator<Item = Interval>) -> Option<Self> {
        items.into_iter().reduce(Interval::min)
    }

    pub fn sum_of(items: impl IntoIterator<Item = Interval>) -> Self {
        items.into_iter().fold(Self::point(0.0), Interval::add)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_encloses_pointwise_results() {
        let a = Interval::new(1.0, 2.0);
        let b = Interval::new(0.5, 3.0);
        assert_eq!(a.add(b), Interval::new(1.5, 5.0));
        assert_eq!(a.mul(b), Interval::new(0.5, 6.0));
        assert_eq!(a.max(b), Interval::new(1.0, 3.0));
        assert_eq!(a.min(b), Interval::new(0.5, 2.0));
        assert_eq!(a.scale(2.0), Interval::new(2.0, 4.0));
        assert_eq!(Interval::new(4.0, 9.0).sqrt(), Interval::new(2.0, 3.0));
        assert_eq!(Interval::point(0.0).powf(0.0), Interval::point(1.0));
        assert_eq!(Interval::nonneg_around(1e-12, 1e-10).lo, 0.0);
        assert_eq!(Interval::min_of([a, b]).unwrap(), a.min(b));
        assert!(Interval::min_of(std::iter::empty()).is_none());
        assert_eq!(Interval::sum_of([a, b]), a.add(b));
    }
}
