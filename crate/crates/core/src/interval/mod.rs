//! Outward-rounded interval arithmetic on binary64.

mod complex;
mod elementary;
pub mod round;
mod vector;

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
pub use complex::ComplexInterval;
pub use vector::IntervalVector;

use round::*;

/// Closed interval `[lo, hi]` with `lo <= hi`.
///
/// Infinite endpoints mark an unbounded interval (produced only by division by
/// an interval containing zero through the operator form); downstream code
/// rejects those via [`Interval::is_bounded`].
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };
    pub const ENTIRE: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    /// Panics if `lo > hi` or either endpoint is NaN.
    #[inline]
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "invalid interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn try_new(lo: f64, hi: f64) -> Result<Self> {
        if lo <= hi {
            Ok(Interval { lo, hi })
        } else {
            Err(Error::domain(format!("invalid interval [{lo}, {hi}]")))
        }
    }

    #[inline]
    pub const fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    /// `[c - r, c + r]` rounded outward.
    pub fn centered(c: f64, r: f64) -> Self {
        let r = r.abs();
        Interval::new(sub_down(c, r), add_up(c, r))
    }

    /// Enclosure of an unsigned integer that may exceed 2^53.
    pub fn from_u128(n: u128) -> Self {
        let x = n as f64;
        if x as u128 == n {
            return Interval::point(x);
        }
        Interval::new(x.next_down(), x.next_up())
    }

    /// Enclosure of `p / q` for integers.
    pub fn ratio(p: i64, q: i64) -> Self {
        Interval::point(p as f64) / Interval::point(q as f64)
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn bounded(self) -> Result<Self> {
        if self.is_bounded() {
            Ok(self)
        } else {
            Err(Error::domain("unbounded interval"))
        }
    }

    #[inline]
    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// Round-to-nearest midpoint (not an enclosure).
    #[inline]
    pub fn mid(&self) -> f64 {
        if self.lo == self.hi {
            return self.lo;
        }
        if self.lo == f64::NEG_INFINITY || self.hi == f64::INFINITY {
            return if self.lo.is_finite() {
                f64::MAX
            } else if self.hi.is_finite() {
                f64::MIN
            } else {
                0.0
            };
        }
        let m = 0.5 * self.lo + 0.5 * self.hi;
        m.clamp(self.lo, self.hi)
    }

    /// Upper bound of `hi - lo`.
    #[inline]
    pub fn width(&self) -> f64 {
        sub_up(self.hi, self.lo)
    }

    /// Upper bound of the radius about [`Interval::mid`].
    #[inline]
    pub fn rad(&self) -> f64 {
        let m = self.mid();
        sub_up(self.hi, m).max(sub_up(m, self.lo))
    }

    /// max |x| over the interval.
    #[inline]
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    /// min |x| over the interval.
    #[inline]
    pub fn mig(&self) -> f64 {
        if self.contains(0.0) {
            0.0
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    #[inline]
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    #[inline]
    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    /// `self ⊆ other`.
    #[inline]
    pub fn subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// `self` lies in the interior of `other`.
    #[inline]
    pub fn interior_of(&self, other: &Interval) -> bool {
        other.lo < self.lo && self.hi < other.hi
    }

    #[inline]
    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn intersection(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    #[inline]
    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    /// Widen by `r >= 0` on each side.
    #[inline]
    pub fn inflate(&self, r: f64) -> Interval {
        Interval {
            lo: sub_down(self.lo, r),
            hi: add_up(self.hi, r),
        }
    }

    /// Strictly below: `self.hi < other.lo`.
    #[inline]
    pub fn certainly_lt(&self, other: &Interval) -> bool {
        self.hi < other.lo
    }

    #[inline]
    pub fn abs(&self) -> Interval {
        if self.lo >= 0.0 {
            *self
        } else if self.hi <= 0.0 {
            -*self
        } else {
            Interval {
                lo: 0.0,
                hi: self.mag(),
            }
        }
    }

    #[inline]
    pub fn sqr(&self) -> Interval {
        let a = self.abs();
        Interval {
            lo: mul_down(a.lo, a.lo),
            hi: mul_up(a.hi, a.hi),
        }
    }

    pub fn max(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.max(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    pub fn min(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.min(other.hi),
        }
    }

    /// Division that reports a divisor containing zero.
    pub fn checked_div(self, rhs: Interval) -> Result<Interval> {
        if rhs.contains_zero() {
            return Err(Error::domain(format!(
                "division by interval [{}, {}] containing zero",
                rhs.lo, rhs.hi
            )));
        }
        Ok(self / rhs)
    }

    pub fn recip(self) -> Result<Interval> {
        Interval::ONE.checked_div(self)
    }

    /// Integer power; even powers of sign-straddling intervals start at 0.
    pub fn powi(&self, n: u32) -> Interval {
        if n == 0 {
            return Interval::ONE;
        }
        let pow_down = |x: f64| (1..n).fold(x, |acc, _| mul_down(acc, x));
        let pow_up = |x: f64| (1..n).fold(x, |acc, _| mul_up(acc, x));
        if n.is_multiple_of(2) {
            let a = self.abs();
            Interval {
                lo: pow_down(a.lo),
                hi: pow_up(a.hi),
            }
        } else {
            // odd: monotone; a negative endpoint is handled by symmetry
            let lo = if self.lo >= 0.0 {
                pow_down(self.lo)
            } else {
                -pow_up(-self.lo)
            };
            let hi = if self.hi >= 0.0 {
                pow_up(self.hi)
            } else {
                -pow_down(-self.hi)
            };
            Interval { lo, hi }
        }
    }

    /// Scale by an exact float.
    #[inline]
    pub fn scale(self, c: f64) -> Interval {
        self * Interval::point(c)
    }

    /// Decimal strings of both endpoints (shortest form that parses back to
    /// the identical binary64).
    pub fn endpoints_string(&self) -> [String; 2] {
        // signed zeros print as plain zero
        let f = |x: f64| format!("{:e}", if x == 0.0 { 0.0 } else { x });
        [f(self.lo), f(self.hi)]
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.endpoints_string().serialize(s)
    }
}

impl Default for Interval {
    fn default() -> Self {
        Interval::ZERO
    }
}

impl From<f64> for Interval {
    fn from(x: f64) -> Self {
        Interval::point(x)
    }
}

impl Add for Interval {
    type Output = Interval;
    #[inline]
    fn add(self, rhs: Interval) -> Interval {
        Interval {
            lo: add_down(self.lo, rhs.lo),
            hi: add_up(self.hi, rhs.hi),
        }
    }
}

impl Sub for Interval {
    type Output = Interval;
    #[inline]
    fn sub(self, rhs: Interval) -> Interval {
        Interval {
            lo: sub_down(self.lo, rhs.hi),
            hi: sub_up(self.hi, rhs.lo),
        }
    }
}

impl Neg for Interval {
    type Output = Interval;
    #[inline]
    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl Mul for Interval {
    type Output = Interval;
    #[inline]
    fn mul(self, rhs: Interval) -> Interval {
        let (a, b) = (self, rhs);
        // sign-class fast paths cover the common non-straddling cases
        if a.lo >= 0.0 && b.lo >= 0.0 {
            return Interval {
                lo: mul_down(a.lo, b.lo),
                hi: mul_up(a.hi, b.hi),
            };
        }
        if a.hi <= 0.0 && b.hi <= 0.0 {
            return Interval {
                lo: mul_down(a.hi, b.hi),
                hi: mul_up(a.lo, b.lo),
            };
        }
        let lo = mul_down(a.lo, b.lo)
            .min(mul_down(a.lo, b.hi))
            .min(mul_down(a.hi, b.lo))
            .min(mul_down(a.hi, b.hi));
        let hi = mul_up(a.lo, b.lo)
            .max(mul_up(a.lo, b.hi))
            .max(mul_up(a.hi, b.lo))
            .max(mul_up(a.hi, b.hi));
        Interval { lo, hi }
    }
}

impl Div for Interval {
    type Output = Interval;
    /// Yields [`Interval::ENTIRE`] when the divisor contains zero; use
    /// [`Interval::checked_div`] to get an error instead.
    #[inline]
    fn div(self, rhs: Interval) -> Interval {
        if rhs.contains_zero() {
            return Interval::ENTIRE;
        }
        let (a, b) = (self, rhs);
        let lo = div_down(a.lo, b.lo)
            .min(div_down(a.lo, b.hi))
            .min(div_down(a.hi, b.lo))
            .min(div_down(a.hi, b.hi));
        let hi = div_up(a.lo, b.lo)
            .max(div_up(a.lo, b.hi))
            .max(div_up(a.hi, b.lo))
            .max(div_up(a.hi, b.hi));
        Interval { lo, hi }
    }
}

impl AddAssign for Interval {
    #[inline]
    fn add_assign(&mut self, rhs: Interval) {
        *self = *self + rhs;
    }
}

impl SubAssign for Interval {
    #[inline]
    fn sub_assign(&mut self, rhs: Interval) {
        *self = *self - rhs;
    }
}

impl MulAssign for Interval {
    #[inline]
    fn mul_assign(&mut self, rhs: Interval) {
        *self = *self * rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(a: f64, b: f64) -> Interval {
        Interval::new(a, b)
    }

    #[test]
    fn exact_endpoint_sum() {
        assert_eq!(iv(1.0, 2.0) + iv(3.0, 4.0), iv(4.0, 6.0));
    }

    #[test]
    fn symmetric_product() {
        assert_eq!(iv(-1.0, 1.0) * iv(-1.0, 1.0), iv(-1.0, 1.0));
    }

    #[test]
    fn third_is_tight() {
        let t = Interval::ONE / Interval::point(3.0);
        assert!(t.hi() <= t.lo().next_up().next_up());
        assert!(t.lo() < 1.0 / 3.0 + 1e-16 && t.hi() > 1.0 / 3.0 - 1e-16);
    }

    #[test]
    fn division_by_zero_interval() {
        assert!(Interval::ONE.checked_div(iv(-1.0, 1.0)).is_err());
        assert!(!(Interval::ONE / iv(-1.0, 1.0)).is_bounded());
    }

    #[test]
    fn powers() {
        assert_eq!(iv(-2.0, 1.0).powi(2), iv(0.0, 4.0));
        assert_eq!(iv(-2.0, 1.0).powi(3), iv(-8.0, 1.0));
        assert_eq!(iv(2.0, 3.0).powi(0), Interval::ONE);
    }

    #[test]
    fn sub_is_outward() {
        let d = iv(1.0, 2.0) - iv(0.5, 0.75);
        assert_eq!(d, iv(0.25, 1.5));
    }

    #[test]
    fn u128_conversion() {
        assert_eq!(Interval::from_u128(15), Interval::point(15.0));
        let big = Interval::from_u128((1u128 << 60) + 1);
        assert!(big.lo() < 2f64.powi(60) + 2.0 && big.hi() > 2f64.powi(60));
    }
}
