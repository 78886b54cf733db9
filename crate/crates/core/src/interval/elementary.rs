//! Elementary functions: the platform libm wrapped with outward nudging.
//!
//! The libm routines used here are faithfully rounded (error below one ulp);
//! every endpoint is widened by [`NUDGE`] ulps, which leaves a safety factor of
//! two. The randomized containment suite checks this against an
//! extended-precision oracle.

use super::round::{nudge_down, nudge_up};
use super::Interval;
use crate::error::{Error, Result};

const NUDGE: u32 = 2;

const PI_LO: f64 = std::f64::consts::PI;

#[inline]
fn down(x: f64) -> f64 {
    nudge_down(x, NUDGE)
}

#[inline]
fn up(x: f64) -> f64 {
    nudge_up(x, NUDGE)
}

/// True when `(x - shift) / period` contains an integer, with `shift` and
/// `period` given as enclosures. False positives are allowed (they only widen
/// results); false negatives are not.
fn hits_lattice(x: Interval, shift: Interval, period: Interval) -> bool {
    let t = (x - shift) / period;
    t.hi().floor() >= t.lo().ceil()
}

impl Interval {
    /// Enclosure of pi: the binary64 values just below and just above.
    pub fn pi() -> Interval {
        Interval::new(PI_LO, PI_LO.next_up())
    }

    pub fn exp(self) -> Interval {
        if self == Interval::ZERO {
            return Interval::ONE;
        }
        Interval::new(down(self.lo().exp()).max(0.0), up(self.hi().exp()))
    }

    /// Natural logarithm; requires `lo > 0`.
    pub fn ln(self) -> Result<Interval> {
        if !(self.lo() > 0.0) {
            return Err(Error::domain(format!(
                "log of non-positive interval {self}"
            )));
        }
        if self == Interval::ONE {
            return Ok(Interval::ZERO);
        }
        Ok(Interval::new(down(self.lo().ln()), up(self.hi().ln())))
    }

    /// Square root; requires `lo > 0` (or the exact point 0).
    pub fn sqrt(self) -> Result<Interval> {
        if self == Interval::ZERO {
            return Ok(Interval::ZERO);
        }
        if !(self.lo() > 0.0) {
            return Err(Error::domain(format!(
                "sqrt of non-positive interval {self}"
            )));
        }
        Ok(Interval::new(
            super::round::sqrt_down(self.lo()),
            super::round::sqrt_up(self.hi()),
        ))
    }

    pub fn sin(self) -> Result<Interval> {
        let x = self.bounded()?;
        if x == Interval::ZERO {
            return Ok(Interval::ZERO);
        }
        let pi = Interval::pi();
        let two_pi = pi.scale(2.0);
        if x.width() >= two_pi.lo() {
            return Ok(Interval::new(-1.0, 1.0));
        }
        let (a, b) = (x.lo().sin(), x.hi().sin());
        let mut lo = down(a.min(b));
        let mut hi = up(a.max(b));
        let half_pi = pi.scale(0.5);
        if hits_lattice(x, half_pi, two_pi) {
            hi = 1.0;
        }
        if hits_lattice(x, -half_pi, two_pi) {
            lo = -1.0;
        }
        Ok(Interval::new(lo.max(-1.0), hi.min(1.0)))
    }

    pub fn cos(self) -> Result<Interval> {
        let x = self.bounded()?;
        if x == Interval::ZERO {
            return Ok(Interval::ONE);
        }
        let pi = Interval::pi();
        let two_pi = pi.scale(2.0);
        if x.width() >= two_pi.lo() {
            return Ok(Interval::new(-1.0, 1.0));
        }
        let (a, b) = (x.lo().cos(), x.hi().cos());
        let mut lo = down(a.min(b));
        let mut hi = up(a.max(b));
        if hits_lattice(x, Interval::ZERO, two_pi) {
            hi = 1.0;
        }
        if hits_lattice(x, pi, two_pi) {
            lo = -1.0;
        }
        Ok(Interval::new(lo.max(-1.0), hi.min(1.0)))
    }

    /// Range of the argument of the points of the box `x + i y`, in `[-pi, pi]`.
    ///
    /// The box must not contain the origin. Boxes straddling the negative real
    /// axis get the full range.
    pub fn atan2(y: Interval, x: Interval) -> Result<Interval> {
        let (y, x) = (y.bounded()?, x.bounded()?);
        if y.contains_zero() && x.contains_zero() {
            return Err(Error::domain("atan2 of a box containing the origin"));
        }
        let pi = Interval::pi();
        if x.hi() < 0.0 && y.lo() < 0.0 && y.hi() >= 0.0 {
            return Ok(Interval::new(-pi.hi(), pi.hi()));
        }
        let corners = [
            y.lo().atan2(x.lo()),
            y.lo().atan2(x.hi()),
            y.hi().atan2(x.lo()),
            y.hi().atan2(x.hi()),
        ];
        let lo = corners.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = corners.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let (lo, hi) = if x.is_point() && y.is_point() && x.lo() > 0.0 && y.lo() == 0.0 {
            (0.0, 0.0)
        } else {
            (down(lo).max(-pi.hi()), up(hi).min(pi.hi()))
        };
        Ok(Interval::new(lo, hi))
    }
}
