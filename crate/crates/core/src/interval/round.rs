//! Directed-rounding primitives on binary64.
//!
//! Each `*_down` / `*_up` returns a float that is a lower / upper bound of the
//! exact real result. Error-free transformations (TwoSum, FMA residuals) decide
//! whether round-to-nearest already landed on the correct side, so exact
//! results stay exact and inexact ones move by a single ulp.

/// Below this magnitude FMA residuals may be inexact; fall back to nudging.
const TINY: f64 = 1e-290;

#[inline]
fn nan_down(x: f64) -> f64 {
    if x.is_nan() {
        f64::NEG_INFINITY
    } else {
        x
    }
}

#[inline]
fn nan_up(x: f64) -> f64 {
    if x.is_nan() {
        f64::INFINITY
    } else {
        x
    }
}

#[inline]
fn two_sum_err(a: f64, b: f64, s: f64) -> f64 {
    let bb = s - a;
    (a - (s - bb)) + (b - bb)
}

#[inline]
pub fn add_down(a: f64, b: f64) -> f64 {
    let s = a + b;
    if s.is_finite() {
        if two_sum_err(a, b, s) < 0.0 {
            s.next_down()
        } else {
            s
        }
    } else if a.is_finite() && b.is_finite() && s > 0.0 {
        f64::MAX
    } else {
        nan_down(s)
    }
}

#[inline]
pub fn add_up(a: f64, b: f64) -> f64 {
    let s = a + b;
    if s.is_finite() {
        if two_sum_err(a, b, s) > 0.0 {
            s.next_up()
        } else {
            s
        }
    } else if a.is_finite() && b.is_finite() && s < 0.0 {
        f64::MIN
    } else {
        nan_up(s)
    }
}

#[inline]
pub fn sub_down(a: f64, b: f64) -> f64 {
    add_down(a, -b)
}

#[inline]
pub fn sub_up(a: f64, b: f64) -> f64 {
    add_up(a, -b)
}

#[inline]
pub fn mul_down(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        return if a.is_finite() && b.is_finite() {
            0.0
        } else {
            f64::NEG_INFINITY
        };
    }
    let p = a * b;
    if !p.is_finite() {
        return if a.is_finite() && b.is_finite() && p > 0.0 {
            f64::MAX
        } else {
            nan_down(p)
        };
    }
    if p.abs() < TINY {
        return p.next_down();
    }
    if a.mul_add(b, -p) < 0.0 {
        p.next_down()
    } else {
        p
    }
}

#[inline]
pub fn mul_up(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        return if a.is_finite() && b.is_finite() {
            0.0
        } else {
            f64::INFINITY
        };
    }
    let p = a * b;
    if !p.is_finite() {
        return if a.is_finite() && b.is_finite() && p < 0.0 {
            f64::MIN
        } else {
            nan_up(p)
        };
    }
    if p.abs() < TINY {
        return p.next_up();
    }
    if a.mul_add(b, -p) > 0.0 {
        p.next_up()
    } else {
        p
    }
}

/// Sign of (exact a/b) - q, from the residual a - q*b.
#[inline]
fn div_residual_sign(a: f64, b: f64, q: f64) -> f64 {
    let r = (-q).mul_add(b, a);
    if b > 0.0 {
        r
    } else {
        -r
    }
}

#[inline]
pub fn div_down(a: f64, b: f64) -> f64 {
    let q = a / b;
    if b.is_infinite() && a.is_finite() {
        // a/inf is treated as the limit 0; bound it from below by -min subnormal.
        return -f64::from_bits(1);
    }
    if !q.is_finite() {
        return if q.is_infinite() && a.is_finite() && b != 0.0 && q > 0.0 {
            f64::MAX
        } else {
            nan_down(q)
        };
    }
    if q == 0.0 || q.abs() < TINY || a.abs() < TINY || b.abs() > 1e290 {
        return if a == 0.0 { 0.0 } else { q.next_down() };
    }
    if div_residual_sign(a, b, q) < 0.0 {
        q.next_down()
    } else {
        q
    }
}

#[inline]
pub fn div_up(a: f64, b: f64) -> f64 {
    -div_down(-a, b)
}

#[inline]
pub fn sqrt_down(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let s = x.sqrt();
    if !s.is_finite() {
        return nan_down(s);
    }
    if x < TINY {
        return s.next_down().max(0.0);
    }
    if (-s).mul_add(s, x) < 0.0 {
        s.next_down()
    } else {
        s
    }
}

#[inline]
pub fn sqrt_up(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let s = x.sqrt();
    if !s.is_finite() {
        return nan_up(s);
    }
    if x < TINY {
        return s.next_up();
    }
    if (-s).mul_add(s, x) > 0.0 {
        s.next_up()
    } else {
        s
    }
}

/// Move `x` down by `n` ulps.
#[inline]
pub fn nudge_down(mut x: f64, n: u32) -> f64 {
    for _ in 0..n {
        x = x.next_down();
    }
    x
}

/// Move `x` up by `n` ulps.
#[inline]
pub fn nudge_up(mut x: f64, n: u32) -> f64 {
    for _ in 0..n {
        x = x.next_up();
    }
    x
}
