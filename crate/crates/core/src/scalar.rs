//! Arithmetic abstraction shared by the vector-field code.
//!
//! The field is written once against [`Scalar`] and evaluated with `f64`
//! (oracle), [`Interval`] (enclosures) and the tape recorder that feeds the
//! Taylor-coefficient engine.

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::interval::Interval;

pub trait Scalar:
    Clone
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// An exactly representable constant.
    fn cst(&self, c: f64) -> Self;
}

impl Scalar for f64 {
    #[inline]
    fn cst(&self, c: f64) -> f64 {
        c
    }
}

impl Scalar for Interval {
    #[inline]
    fn cst(&self, c: f64) -> Interval {
        Interval::point(c)
    }
}
