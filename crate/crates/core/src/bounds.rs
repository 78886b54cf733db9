//! Validated rho-dependent constants of the fixed-point argument.

use serde::Serialize;

use crate::error::{Error, Gate, Result};
use crate::interval::Interval;
use crate::problem::ProblemSpec;

pub(crate) fn gate_error(gate: Gate, rho: Interval, detail: impl Into<String>) -> Error {
    Error::Threshold {
        gate,
        rho_lo: rho.lo(),
        rho_hi: rho.hi(),
        detail: detail.into(),
    }
}

fn double_factorial(n: i64) -> u128 {
    let mut acc: u128 = 1;
    let mut k = n;
    while k > 1 {
        acc *= k as u128;
        k -= 2;
    }
    acc
}

/// `B_m = \int_0^\infty (t^2 + 1)^{-m/2} dt`:
/// `pi/2 (m-3)!!/(m-2)!!` for even `m`, `(m-3)!!/(m-2)!!` for odd `m`.
pub fn b_constant(m: u32) -> Result<Interval> {
    if m < 3 {
        return Err(Error::domain(format!("B_m needs m >= 3, got {m}")));
    }
    if m > 60 {
        return Err(Error::domain("B_m only supported for m <= 60"));
    }
    let m = m as i64;
    let q =
        Interval::from_u128(double_factorial(m - 3)) / Interval::from_u128(double_factorial(m - 2));
    Ok(if m % 2 == 0 {
        q * Interval::pi() / Interval::point(2.0)
    } else {
        q
    })
}

/// `C_nu = (nu+2)^((nu+2)/2) / (alpha (nu+1)^((nu+1)/2))`.
pub fn c_constant(nu: u32, alpha: Interval) -> Result<Interval> {
    if nu < 4 {
        return Err(Error::domain(format!("C_nu needs nu >= 4, got {nu}")));
    }
    if nu > 100 {
        return Err(Error::domain("C_nu only supported for nu <= 100"));
    }
    if !(alpha.lo() > 0.0) {
        return Err(Error::domain("alpha must be positive"));
    }
    let a = Interval::point((nu + 2) as f64).powi(nu + 2);
    let b = Interval::point((nu + 1) as f64).powi(nu + 1);
    Ok((a / b).sqrt()? / alpha)
}

fn check_first_iterate(p: &ProblemSpec, rho: Interval) -> Result<()> {
    let floor = p.ledger.c_h0_bar.max(2.0);
    if rho.lo() > floor && rho.is_bounded() {
        Ok(())
    } else {
        Err(gate_error(
            Gate::FirstIterate,
            rho,
            format!("need rho > {floor}"),
        ))
    }
}

/// `C0(rho) = (C_F0 + |a3| C_H0bar) / (1 - C_H0bar/rho)`.
pub fn c0_bound(p: &ProblemSpec, rho: Interval) -> Result<Interval> {
    check_first_iterate(p, rho)?;
    let l = &p.ledger;
    let chb = Interval::point(l.c_h0_bar);
    let num = Interval::point(l.c_f0) + l.a3_abs() * chb;
    Ok(num / (Interval::ONE - chb / rho))
}

/// `M0(rho) = 22|a3|/(3 alpha) + 2 B5 C0(rho)`.
pub fn m0_bound(p: &ProblemSpec, rho: Interval) -> Result<Interval> {
    let c0 = c0_bound(p, rho)?;
    let l = &p.ledger;
    let lead =
        Interval::point(22.0) * l.a3_abs() / (Interval::point(3.0) * Interval::point(l.alpha));
    Ok(lead + Interval::point(2.0) * b_constant(5)? * c0)
}

/// Derivative bounds `M11_1..M11_4` and `M12_2..M12_4`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DerivativeBounds {
    pub m11: [Interval; 4],
    pub m12: [Interval; 3],
}

impl DerivativeBounds {
    /// `M11_j`, j = 1..4.
    pub fn m11(&self, j: usize) -> Interval {
        self.m11[j - 1]
    }

    /// `M12_j`, j = 2..4 (`M12_1` is identically zero).
    pub fn m12(&self, j: usize) -> Interval {
        if j == 1 {
            Interval::ZERO
        } else {
            self.m12[j - 2]
        }
    }
}

pub fn m_matrix(p: &ProblemSpec, rho: Interval) -> Result<DerivativeBounds> {
    let l = &p.ledger;
    let m0 = m0_bound(p, rho)?;
    let one = Interval::ONE;
    let pt = Interval::point;
    let (alpha, b) = (pt(l.alpha), pt(l.b));
    let ch = pt(l.c_h);
    let d = one - b * m0.sqr() / rho.powi(4) - ch / rho;
    let e = one - m0 / rho.sqr();
    if !(d.lo() > 0.0 && e.lo() > 0.0) {
        return Err(gate_error(
            Gate::DerivativeDenominator,
            rho,
            format!("1 - b M0^2/rho^4 - C_H/rho = {d}, 1 - M0/rho^2 = {e}"),
        ));
    }
    let d2 = d.sqr();
    let h0 = pt(l.h0.abs());
    let (ch0, cf, cfphi, cfvarphi) = (pt(l.c_h0), pt(l.c_f), pt(l.c_f_phi), pt(l.c_f_varphi));
    let (chphi, chvarphi, chbar) = (pt(l.c_h_phi), pt(l.c_h_varphi), l.c_h_bar());
    let b_m0_rho = b * m0 / rho;

    let m11_1 = alpha * h0 / d;
    let m11_2 = (h0 + alpha * ch0 + cfphi) / d;
    let m11_3 = (m0 * alpha * chphi + cf * chphi + (alpha * chbar * m0 + ch0) * d) / d2;
    let m11_4 = m0 / d2
        * (b * (cf + alpha * m0) + chphi + (alpha * b * m0 + chbar + b_m0_rho) * d + b_m0_rho);
    let m12_2 = cfvarphi / d;
    let m12_3 = (m0 * alpha * chvarphi + cf * chvarphi) / d2;
    let m12_4 = m0 / d2 * (b * (cf + alpha * m0) + chvarphi + b_m0_rho);

    let mut out = DerivativeBounds {
        m11: [m11_1, m11_2, m11_3, m11_4],
        m12: [m12_2, m12_3, m12_4],
    };
    if let Some(sb) = &p.sharpened {
        let (q11, q12) = (sb.quartic)(m0, rho)?;
        out.m11[3] = q11;
        out.m12[2] = q12;
        if sb.zero_lower_orders {
            out.m11[..3].fill(Interval::ZERO);
            out.m12[..2].fill(Interval::ZERO);
        }
    }
    Ok(out)
}

/// `(L1, L2, min(L1, L2))`.
pub fn lipschitz(p: &ProblemSpec, rho: Interval) -> Result<(Interval, Interval, Interval)> {
    let m = m_matrix(p, rho)?;
    let alpha = Interval::point(p.ledger.alpha);
    let c = |nu| c_constant(nu, alpha);
    let s2 = m.m11(2) + m.m12(2);
    let s3 = m.m11(3) + m.m12(3);
    let s4 = m.m11(4) + m.m12(4);
    let head = c(4)? * m.m11(1) / rho;
    let l1 = head
        + b_constant(6)? * s2 / rho
        + b_constant(7)? * s3 / rho.sqr()
        + b_constant(8)? * s4 / rho.powi(3);
    let l2 = head + c(5)? * s2 / rho.sqr() + c(6)? * s3 / rho.powi(3) + c(7)? * s4 / rho.powi(4);
    Ok((l1, l2, l1.min(&l2)))
}

/// `(A1, A2, max(A1, A2))`.
pub fn contraction_a(p: &ProblemSpec, rho: Interval) -> Result<(Interval, Interval, Interval)> {
    let m = m_matrix(p, rho)?;
    let alpha = Interval::point(p.ledger.alpha);
    let pt = Interval::point;
    let a1 = m.m11(2) / rho
        + (m.m11(3) + m.m12(2)) / (pt(2.0) * rho.sqr())
        + (m.m11(4) + m.m12(3)) / (pt(3.0) * rho.powi(3))
        + m.m12(4) / (pt(4.0) * rho.powi(4));
    let two_a = pt(2.0) * alpha;
    // Second component. The cross term (K21, bounded by the M12 constants)
    // acts on the larger difference component; the transposed pairing is
    // also evaluated and the larger of the two kept, so A2 is an upper bound
    // under either assignment of the weights.
    let a2_of = |p: &dyn Fn(usize) -> Interval, q: &dyn Fn(usize) -> Interval| {
        p(2) / (two_a * rho.sqr())
            + (q(2) + p(3)) / (two_a * rho.powi(3))
            + (q(3) + p(4)) / (two_a * rho.powi(4))
            + q(4) / (two_a * rho.powi(5))
    };
    let m11 = |j| m.m11(j);
    let m12 = |j| m.m12(j);
    let a2 = a2_of(&m12, &m11).max(&a2_of(&m11, &m12));
    Ok((a1, a2, a1.max(&a2)))
}

/// `M bar = A1 / (1 - A)`; needs `A < 1`.
pub fn relative_error(a1: Interval, a: Interval) -> Result<Interval> {
    if !(a.hi() < 1.0) {
        return Err(Error::Threshold {
            gate: Gate::RelativeError,
            rho_lo: f64::NAN,
            rho_hi: f64::NAN,
            detail: format!("A = {a} not below 1"),
        });
    }
    Ok(a1 / (Interval::ONE - a))
}

/// All rho-dependent constants at one (interval) rho.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConstantTable {
    pub rho: Interval,
    pub c0: Interval,
    pub m0: Interval,
    pub m11: [Interval; 4],
    pub m12: [Interval; 3],
    pub l1: Interval,
    pub l2: Interval,
    pub l: Interval,
    pub a1: Interval,
    pub a2: Interval,
    pub a: Interval,
    pub mbar: Interval,
}

impl ConstantTable {
    /// Compute every entry; gates other than the structural ones (first
    /// iterate, denominators, A < 1) are not checked here.
    pub fn compute(p: &ProblemSpec, rho: Interval) -> Result<ConstantTable> {
        let c0 = c0_bound(p, rho)?;
        let m0 = m0_bound(p, rho)?;
        let m = m_matrix(p, rho)?;
        let (l1, l2, l) = lipschitz(p, rho)?;
        let (a1, a2, a) = contraction_a(p, rho)?;
        let mbar = relative_error(a1, a).map_err(|e| match e {
            Error::Threshold { gate, detail, .. } => gate_error(gate, rho, detail),
            other => other,
        })?;
        Ok(ConstantTable {
            rho,
            c0,
            m0,
            m11: m.m11,
            m12: m.m12,
            l1,
            l2,
            l,
            a1,
            a2,
            a,
            mbar,
        })
    }

    /// `(key, description, value)` for every entry.
    pub fn labeled(&self) -> Vec<(&'static str, &'static str, Interval)> {
        vec![
            ("rho", "evaluation radius", self.rho),
            ("C0", "first-iterate forcing constant", self.c0),
            (
                "M0",
                "first-iterate radius bound M0 = 22|a3|/(3 alpha) + 2 B5 C0",
                self.m0,
            ),
            ("M11_1", "derivative bound, phi-block, order 1", self.m11[0]),
            ("M11_2", "derivative bound, phi-block, order 2", self.m11[1]),
            ("M11_3", "derivative bound, phi-block, order 3", self.m11[2]),
            ("M11_4", "derivative bound, phi-block, order 4", self.m11[3]),
            (
                "M12_2",
                "derivative bound, varphi-block, order 2",
                self.m12[0],
            ),
            (
                "M12_3",
                "derivative bound, varphi-block, order 3",
                self.m12[1],
            ),
            (
                "M12_4",
                "derivative bound, varphi-block, order 4",
                self.m12[2],
            ),
            (
                "L1",
                "Lipschitz constant via the B_m operator bounds",
                self.l1,
            ),
            (
                "L2",
                "Lipschitz constant via the C_nu operator bounds",
                self.l2,
            ),
            ("L", "Lipschitz constant min(L1, L2)", self.l),
            ("A1", "contraction constant A1", self.a1),
            ("A2", "contraction constant A2", self.a2),
            ("A", "contraction constant max(A1, A2)", self.a),
            ("Mbar", "relative error bound A1/(1 - A)", self.mbar),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{example1, example2, LedgerInputs};

    fn zero_problem() -> ProblemSpec {
        ProblemSpec {
            ledger: LedgerInputs::zero(),
            sharpened: None,
            ..example1()
        }
    }

    #[test]
    fn b_small_values() {
        assert!(b_constant(3).unwrap().contains(1.0));
        assert!(b_constant(5).unwrap().contains(2.0 / 3.0));
        assert!(b_constant(8)
            .unwrap()
            .contains(5.0 * std::f64::consts::PI / 32.0));
        assert!(b_constant(2).is_err());
    }

    #[test]
    fn c_values() {
        let c7 = c_constant(7, Interval::ONE).unwrap();
        assert!(c7.contains(19683.0 / 4096.0));
        let r = c7 / b_constant(8).unwrap();
        assert!((r.mid() - 9.7895).abs() < 1e-3);
        let half = c_constant(4, Interval::point(2.0)).unwrap();
        let full = c_constant(4, Interval::ONE).unwrap();
        assert!((half * Interval::point(2.0)).intersects(&full));
        assert!(c_constant(3, Interval::ONE).is_err());
    }

    #[test]
    fn m0_is_22_over_3() {
        for p in [example1(), example2()] {
            let m0 = m0_bound(&p, Interval::point(16.0)).unwrap();
            assert!((m0 * Interval::point(3.0)).contains(22.0));
            assert!(m0.width() < 1e-14);
        }
    }

    #[test]
    fn c0_synthetic() {
        let mut p = zero_problem();
        p.ledger.c_f0 = 1.0;
        assert_eq!(c0_bound(&p, Interval::point(7.0)).unwrap(), Interval::ONE);
        assert!(c0_bound(&p, Interval::point(2.0)).is_err());
    }

    #[test]
    fn example1_quartic_matches_closed_form() {
        let p = example1();
        let rho = Interval::point(16.0);
        let m = m_matrix(&p, rho).unwrap();
        let (m0, r) = (22.0 / 3.0, 16.0f64);
        let e = 1.0 - m0 * m0 / r.powi(4);
        let want = m0 / (e * e) * (1.0 + m0 * (1.0 + 1.0 / r) * (2.0 - m0 * m0 / r.powi(4)));
        assert!((m.m11(4).mid() - want).abs() < 1e-10);
        for j in 1..=3 {
            assert_eq!(m.m11(j), Interval::ZERO);
        }
        assert_eq!(m.m12(2), Interval::ZERO);
    }

    #[test]
    fn zero_ledger_gives_zero() {
        let p = zero_problem();
        let (_, _, l) = lipschitz(&p, Interval::point(3.0)).unwrap();
        assert_eq!(l, Interval::ZERO);
        let (_, _, a) = contraction_a(&p, Interval::point(3.0)).unwrap();
        assert_eq!(a, Interval::ZERO);
        assert_eq!(
            relative_error(Interval::ZERO, Interval::ZERO).unwrap(),
            Interval::ZERO
        );
    }

    #[test]
    fn step7_values() {
        let rho = Interval::new(15.99999965, 16.00000035);
        let (a1, a2, _) = contraction_a(&example1(), rho).unwrap();
        assert!(
            a1.intersects(&Interval::new(0.010155523, 0.010155525)),
            "{a1}"
        );
        assert!(a1.width() <= 1e-6);
        assert!(
            a2.intersects(&Interval::new(0.0009597786, 0.0009597788)),
            "{a2}"
        );
        let (a1, _, _) = contraction_a(&example2(), rho).unwrap();
        assert!(
            a1.intersects(&Interval::new(0.0114071016, 0.0114071033)),
            "{a1}"
        );
    }

    #[test]
    fn lipschitz_gate_values() {
        for p in [example1(), example2()] {
            let (_, _, l) = lipschitz(&p, Interval::point(9.79)).unwrap();
            assert!(l.hi() <= 0.5, "{l}");
            let (_, _, l) = lipschitz(&p, Interval::point(5.0)).unwrap();
            assert!(l.lo() > 0.5, "{l}");
        }
    }

    #[test]
    fn relative_error_rejects_large_a() {
        assert!(relative_error(Interval::point(0.5), Interval::ONE).is_err());
        let mb = relative_error(Interval::point(0.5), Interval::point(0.5)).unwrap();
        assert!(mb.contains(1.0));
    }
}
