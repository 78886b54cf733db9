use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use super::round::{add_up, mul_up, sqrt_up};
use super::Interval;
use crate::error::{Error, Result};

/// Axis-aligned rectangle `re + i im` in the complex plane.
#[derive(Clone, Copy, PartialEq, Debug, Default, Serialize)]
pub struct ComplexInterval {
    pub re: Interval,
    pub im: Interval,
}

impl ComplexInterval {
    pub const ZERO: ComplexInterval = ComplexInterval {
        re: Interval::ZERO,
        im: Interval::ZERO,
    };
    pub const ONE: ComplexInterval = ComplexInterval {
        re: Interval::ONE,
        im: Interval::ZERO,
    };
    pub const I: ComplexInterval = ComplexInterval {
        re: Interval::ZERO,
        im: Interval::ONE,
    };

    pub fn new(re: Interval, im: Interval) -> Self {
        ComplexInterval { re, im }
    }

    pub fn point(re: f64, im: f64) -> Self {
        ComplexInterval::new(Interval::point(re), Interval::point(im))
    }

    pub fn real(re: Interval) -> Self {
        ComplexInterval::new(re, Interval::ZERO)
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn contains(&self, re: f64, im: f64) -> bool {
        self.re.contains(re) && self.im.contains(im)
    }

    pub fn intersects(&self, other: &ComplexInterval) -> bool {
        self.re.intersects(&other.re) && self.im.intersects(&other.im)
    }

    pub fn subset_of(&self, other: &ComplexInterval) -> bool {
        self.re.subset_of(&other.re) && self.im.subset_of(&other.im)
    }

    pub fn conj(&self) -> ComplexInterval {
        ComplexInterval::new(self.re, -self.im)
    }

    /// `|z|^2` over the rectangle.
    pub fn norm_sqr(&self) -> Interval {
        self.re.sqr() + self.im.sqr()
    }

    /// Rigorous upper bound for `|z|` over the rectangle.
    pub fn abs_upper(&self) -> f64 {
        let (a, b) = (self.re.mag(), self.im.mag());
        sqrt_up(add_up(mul_up(a, a), mul_up(b, b)))
    }

    /// Enclosure of `|z|` over the rectangle.
    pub fn abs(&self) -> Interval {
        let lo = self.norm_sqr().lo().max(0.0).sqrt().next_down().max(0.0);
        Interval::new(lo.min(self.abs_upper()), self.abs_upper())
    }

    pub fn scale(&self, c: Interval) -> ComplexInterval {
        ComplexInterval::new(self.re * c, self.im * c)
    }

    /// Multiply by `i`.
    pub fn mul_i(&self) -> ComplexInterval {
        ComplexInterval::new(-self.im, self.re)
    }

    pub fn div(&self, rhs: &ComplexInterval) -> Result<ComplexInterval> {
        let d = rhs.norm_sqr();
        if !(d.lo() > 0.0) {
            return Err(Error::domain(
                "complex division by a rectangle containing 0",
            ));
        }
        let n = *self * rhs.conj();
        Ok(ComplexInterval::new(n.re / d, n.im / d))
    }

    pub fn exp(&self) -> Result<ComplexInterval> {
        let m = self.re.exp();
        Ok(ComplexInterval::new(m * self.im.cos()?, m * self.im.sin()?))
    }

    /// Widen both axes by `r` (encloses the disc of radius `r` around every point).
    pub fn inflate(&self, r: f64) -> ComplexInterval {
        ComplexInterval::new(self.re.inflate(r), self.im.inflate(r))
    }

    pub fn hull(&self, other: &ComplexInterval) -> ComplexInterval {
        ComplexInterval::new(self.re.hull(&other.re), self.im.hull(&other.im))
    }
}

impl fmt::Display for ComplexInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {} i", self.re, self.im)
    }
}

impl Add for ComplexInterval {
    type Output = ComplexInterval;
    fn add(self, rhs: Self) -> Self {
        ComplexInterval::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for ComplexInterval {
    type Output = ComplexInterval;
    fn sub(self, rhs: Self) -> Self {
        ComplexInterval::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Neg for ComplexInterval {
    type Output = ComplexInterval;
    fn neg(self) -> Self {
        ComplexInterval::new(-self.re, -self.im)
    }
}

impl Mul for ComplexInterval {
    type Output = ComplexInterval;
    fn mul(self, rhs: Self) -> Self {
        ComplexInterval::new(
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn i_squared() {
        let z = ComplexInterval::I * ComplexInterval::I;
        assert!(z.contains(-1.0, 0.0));
    }

    #[test]
    fn exp_zero() {
        assert!(ComplexInterval::ZERO.exp().unwrap().contains(1.0, 0.0));
    }

    #[test]
    fn three_four_five() {
        let z = ComplexInterval::point(3.0, 4.0);
        let a = z.abs_upper();
        assert!((5.0..=5.0 + 4.0 * f64::EPSILON * 5.0).contains(&a));
    }

    #[test]
    fn division() {
        let z = ComplexInterval::point(1.0, 1.0);
        let q = z.div(&z).unwrap();
        assert!(q.contains(1.0, 0.0));
        assert!(z.div(&ComplexInterval::ZERO).is_err());
    }
}
