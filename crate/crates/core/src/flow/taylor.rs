//! Taylor coefficients of ODE solutions by automatic differentiation on a tape.
//!
//! For `x' = f(x)`, the normalized coefficients `a_k = x^(k)(0)/k!` satisfy
//! `a_{k+1} = f_k / (k+1)` where `f_k` is the k-th coefficient of `f(x(t))`,
//! obtained node by node through the standard recurrences.

use std::ops::{Add, Div, Mul, Neg, Sub};

use super::tape::{Node, Tape};
use crate::interval::Interval;

pub trait Coeff:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn constant(c: f64) -> Self;
    fn div_int(self, n: usize) -> Self;
    #[inline]
    fn sqr(self) -> Self {
        self * self
    }
}

impl Coeff for f64 {
    #[inline]
    fn constant(c: f64) -> f64 {
        c
    }
    #[inline]
    fn div_int(self, n: usize) -> f64 {
        self / n as f64
    }
}

impl Coeff for Interval {
    #[inline]
    fn constant(c: f64) -> Interval {
        Interval::point(c)
    }
    #[inline]
    fn div_int(self, n: usize) -> Interval {
        self / Interval::point(n as f64)
    }
    #[inline]
    fn sqr(self) -> Interval {
        Interval::sqr(&self)
    }
}

/// Interval value with its gradient with respect to the six initial values.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dual {
    pub v: Interval,
    pub d: [Interval; 6],
}

impl Dual {
    pub fn seed(v: Interval, i: usize) -> Dual {
        let mut d = [Interval::ZERO; 6];
        d[i] = Interval::ONE;
        Dual { v, d }
    }
}

impl Add for Dual {
    type Output = Dual;
    #[inline]
    fn add(self, r: Dual) -> Dual {
        Dual {
            v: self.v + r.v,
            d: std::array::from_fn(|i| self.d[i] + r.d[i]),
        }
    }
}

impl Sub for Dual {
    type Output = Dual;
    #[inline]
    fn sub(self, r: Dual) -> Dual {
        Dual {
            v: self.v - r.v,
            d: std::array::from_fn(|i| self.d[i] - r.d[i]),
        }
    }
}

impl Neg for Dual {
    type Output = Dual;
    #[inline]
    fn neg(self) -> Dual {
        Dual {
            v: -self.v,
            d: self.d.map(|x| -x),
        }
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Mul for Dual {
    type Output = Dual;
    #[inline]
    fn mul(self, r: Dual) -> Dual {
        Dual {
            v: self.v * r.v,
            d: std::array::from_fn(|i| self.v * r.d[i] + self.d[i] * r.v),
        }
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Div for Dual {
    type Output = Dual;
    #[inline]
    fn div(self, r: Dual) -> Dual {
        let q = self.v / r.v;
        Dual {
            v: q,
            d: std::array::from_fn(|i| (self.d[i] - q * r.d[i]) / r.v),
        }
    }
}

impl Coeff for Dual {
    #[inline]
    fn constant(c: f64) -> Dual {
        Dual {
            v: Interval::point(c),
            d: [Interval::ZERO; 6],
        }
    }
    #[inline]
    fn div_int(self, n: usize) -> Dual {
        let k = Interval::point(n as f64);
        Dual {
            v: self.v / k,
            d: self.d.map(|x| x / k),
        }
    }
    #[inline]
    fn sqr(self) -> Dual {
        let two_v = self.v * Interval::point(2.0);
        Dual {
            v: self.v.sqr(),
            d: self.d.map(|x| two_v * x),
        }
    }
}

/// Reusable workspace for Taylor-coefficient evaluation.
pub struct TaylorEngine<'a, C: Coeff> {
    tape: &'a Tape,
    vals: Vec<Vec<C>>,
}

impl<'a, C: Coeff> TaylorEngine<'a, C> {
    pub fn new(tape: &'a Tape) -> Self {
        TaylorEngine {
            tape,
            vals: vec![Vec::new(); tape.nodes.len()],
        }
    }

    /// Coefficients `a_0..=a_order` of the solution through `x0`.
    pub fn coefficients(&mut self, x0: &[C; 6], order: usize) -> Vec<[C; 6]> {
        let zero = C::constant(0.0);
        let mut xs: Vec<[C; 6]> = Vec::with_capacity(order + 1);
        xs.push(*x0);
        for v in &mut self.vals {
            v.clear();
        }
        for k in 0..order {
            for (id, node) in self.tape.nodes.iter().enumerate() {
                let val = match *node {
                    Node::Const(bits) => {
                        if k == 0 {
                            C::constant(f64::from_bits(bits))
                        } else {
                            zero
                        }
                    }
                    Node::Var(i) => xs[k][i],
                    Node::Add(a, b) => self.vals[a][k] + self.vals[b][k],
                    Node::Sub(a, b) => self.vals[a][k] - self.vals[b][k],
                    Node::Neg(a) => -self.vals[a][k],
                    Node::Mul(a, b) => {
                        let (va, vb) = (&self.vals[a], &self.vals[b]);
                        let mut s = va[0] * vb[k];
                        for j in 1..=k {
                            s = s + va[j] * vb[k - j];
                        }
                        s
                    }
                    Node::Sqr(a) => {
                        let va = &self.vals[a];
                        let half = k.div_ceil(2);
                        let mut s: Option<C> = None;
                        for j in 0..half {
                            let t = va[j] * va[k - j];
                            s = Some(match s {
                                Some(acc) => acc + t,
                                None => t,
                            });
                        }
                        let doubled = s.map(|x| x + x);
                        let middle = (k % 2 == 0).then(|| va[k / 2].sqr());
                        match (doubled, middle) {
                            (Some(d), Some(m)) => d + m,
                            (Some(d), None) => d,
                            (None, Some(m)) => m,
                            (None, None) => zero,
                        }
                    }
                    Node::Div(a, b) => {
                        let vb = &self.vals[b];
                        let vc = &self.vals[id];
                        let mut s = self.vals[a][k];
                        for j in 1..=k {
                            s = s - vb[j] * vc[k - j];
                        }
                        s / vb[0]
                    }
                };
                self.vals[id].push(val);
            }
            let out = self.tape.outputs;
            let next: [C; 6] = std::array::from_fn(|i| self.vals[out[i]][k].div_int(k + 1));
            xs.push(next);
        }
        xs
    }
}

/// `sum_j c_j t^j` by Horner's scheme.
pub fn horner<C: Coeff>(coeffs: &[[C; 6]], t: C) -> [C; 6] {
    let p = coeffs.len() - 1;
    let mut acc = coeffs[p];
    for j in (0..p).rev() {
        acc = std::array::from_fn(|i| acc[i] * t + coeffs[j][i]);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{example1, example2};

    #[test]
    fn first_coefficient_is_the_field() {
        let p = example2();
        let tape = Tape::record(&p.field);
        let mut eng = TaylorEngine::<f64>::new(&tape);
        let x = [1e-4, 2e-4, -3e-4, 5e-5, -7.5, -16.25];
        let c = eng.coefficients(&x, 3);
        let f = p.field.eval(&x);
        for i in 0..6 {
            assert!((c[1][i] - f[i]).abs() <= 1e-15 * (1.0 + f[i].abs()));
        }
    }

    #[test]
    fn series_matches_finite_differences() {
        // second coefficient equals (1/2) Df f
        let p = example1();
        let tape = Tape::record(&p.field);
        let mut eng = TaylorEngine::<f64>::new(&tape);
        let x = [3e-3, -1e-3, 2e-3, 4e-3, 5.0, -9.0];
        let c = eng.coefficients(&x, 2);
        let f = p.field.eval(&x);
        let h = 1e-6;
        let xp: [f64; 6] = std::array::from_fn(|i| x[i] + h * f[i]);
        let xm: [f64; 6] = std::array::from_fn(|i| x[i] - h * f[i]);
        let (fp, fm) = (p.field.eval(&xp), p.field.eval(&xm));
        for i in 0..6 {
            let d = (fp[i] - fm[i]) / (4.0 * h);
            assert!(
                (c[2][i] - d).abs() < 1e-7 * (1.0 + d.abs()),
                "{i}: {} vs {}",
                c[2][i],
                d
            );
        }
    }

    #[test]
    fn interval_coefficients_contain_float_ones() {
        let p = example2();
        let tape = Tape::record(&p.field);
        let x = [1e-4, 2e-4, -3e-4, 5e-5, -7.5, -16.25];
        let cf = TaylorEngine::<f64>::new(&tape).coefficients(&x, 12);
        let xi = x.map(Interval::point);
        let ci = TaylorEngine::<Interval>::new(&tape).coefficients(&xi, 12);
        for k in 0..=12 {
            for i in 0..6 {
                let tol = 1e-12 * cf[k][i].abs() + 1e-300;
                assert!(ci[k][i].inflate(tol).contains(cf[k][i]), "k={k} i={i}");
                assert!(
                    ci[k][i].width() <= 1e-7 * cf[k][i].abs().max(1e-30),
                    "k={k} i={i} {} {}",
                    ci[k][i],
                    cf[k][i]
                );
            }
        }
    }

    #[test]
    fn dual_gradient_matches_difference_quotient() {
        let p = example1();
        let tape = Tape::record(&p.field);
        let x = [1e-3, 2e-3, -3e-3, 5e-4, -7.5, -16.25];
        let xd: [Dual; 6] = std::array::from_fn(|i| Dual::seed(Interval::point(x[i]), i));
        let cd = TaylorEngine::<Dual>::new(&tape).coefficients(&xd, 6);
        let h = 0.7;
        let phi = |x0: [f64; 6]| horner(&TaylorEngine::<f64>::new(&tape).coefficients(&x0, 6), h);
        let jd = horner(&cd, Dual::constant(h));
        let e = 1e-6;
        for j in 0..6 {
            let mut xp = x;
            xp[j] += e;
            let mut xm = x;
            xm[j] -= e;
            let (a, b) = (phi(xp), phi(xm));
            for i in 0..6 {
                let fd = (a[i] - b[i]) / (2.0 * e);
                assert!(
                    (jd[i].d[j].mid() - fd).abs() < 1e-6 * (1.0 + fd.abs()),
                    "{i},{j}"
                );
            }
        }
    }
}
