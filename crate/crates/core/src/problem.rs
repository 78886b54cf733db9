//! Inner-equation problem instances: vector field, constant ledger and
//! author-supplied sharpened bounds.

use serde::Serialize;

use crate::certificate::RefinementData;
use crate::error::{Error, Result};
use crate::flow::StateBox;
use crate::interval::{Interval, IntervalVector};
use crate::scalar::Scalar;
use crate::shooting::ShootingConfig;

/// Ledger constants asserted by the problem author.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LedgerInputs {
    pub alpha: f64,
    pub b: f64,
    /// a3 as (re, im).
    pub a3: (f64, f64),
    pub h0: f64,
    pub c_f0: f64,
    pub c_h0: f64,
    pub c_h0_bar: f64,
    pub c_f: f64,
    pub c_f_phi: f64,
    pub c_f_varphi: f64,
    pub c_h: f64,
    pub c_h_phi: f64,
    pub c_h_varphi: f64,
}

impl LedgerInputs {
    /// alpha = 1, b = 1 and every other entry zero.
    pub fn zero() -> Self {
        LedgerInputs {
            alpha: 1.0,
            b: 1.0,
            a3: (0.0, 0.0),
            h0: 0.0,
            c_f0: 0.0,
            c_h0: 0.0,
            c_h0_bar: 0.0,
            c_f: 0.0,
            c_f_phi: 0.0,
            c_f_varphi: 0.0,
            c_h: 0.0,
            c_h_phi: 0.0,
            c_h_varphi: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let cs = [
            self.c_f0,
            self.c_h0,
            self.c_h0_bar,
            self.c_f,
            self.c_f_phi,
            self.c_f_varphi,
            self.c_h,
            self.c_h_phi,
            self.c_h_varphi,
        ];
        if !(self.alpha > 0.0) || !self.alpha.is_finite() {
            return Err(Error::InvalidInput("alpha must be positive".into()));
        }
        if cs.iter().any(|c| !(*c >= 0.0) || !c.is_finite()) {
            return Err(Error::InvalidInput(
                "ledger constants must be non-negative".into(),
            ));
        }
        Ok(())
    }

    pub fn c_h_bar(&self) -> Interval {
        Interval::point(self.c_h_phi) + Interval::point(self.c_h_varphi)
    }

    pub fn c_f_bar(&self) -> Interval {
        Interval::point(self.c_f_phi) + Interval::point(self.c_f_varphi)
    }

    /// Enclosure of |a3|.
    pub fn a3_abs(&self) -> Interval {
        let (re, im) = self.a3;
        if im == 0.0 {
            return Interval::point(re.abs());
        }
        if re == 0.0 {
            return Interval::point(im.abs());
        }
        (Interval::point(re).sqr() + Interval::point(im).sqr())
            .sqrt()
            .expect("positive")
    }
}

/// Which built-in right-hand side to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldKind {
    /// Forcing `-s^-3` only.
    CubicForcing,
    /// Forcing `-s^-3 + (i/s)(phi^2 - varphi^2)` in both equations.
    CubicForcingQuadratic,
}

/// Real six-dimensional form of the inner equation in
/// `(x1, y1, x2, y2, s1, s2)`, `phi = x1 + i y1`, `varphi = x2 + i y2`,
/// `s = s1 + i s2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VectorField {
    pub kind: FieldKind,
    pub alpha: f64,
    pub b: f64,
}

impl VectorField {
    /// Evaluate the field. The caller guarantees `s1^2 + s2^2 > 0`.
    pub fn eval<T: Scalar>(&self, x: &[T; 6]) -> [T; 6] {
        let [x1, y1, x2, y2, s1, s2] = x.clone();
        let one = s1.cst(1.0);
        let c = |v: f64| one.cst(v);
        let r2 = s1.clone() * s1.clone() + s2.clone() * s2.clone();
        let inv = c(1.0) / r2;
        let a = s2.clone() * inv.clone();
        let d = s1.clone() * inv.clone();
        let inv3 = inv.clone() * inv.clone() * inv.clone();
        let s1sq = s1.clone() * s1.clone();
        let s2sq = s2.clone() * s2.clone();
        let force_x = s1.clone() * (s1sq.clone() - c(3.0) * s2sq.clone()) * inv3.clone();
        let force_y = s2.clone() * (s2sq.clone() - c(3.0) * s1sq.clone()) * inv3;
        let al = c(self.alpha);
        let rot1 = al.clone() + a.clone();
        let rot2 = al - a;

        let mut dx1 = rot1.clone() * y1.clone() + d.clone() * x1.clone() - force_x.clone();
        let mut dy1 = -(rot1 * x1.clone()) + d.clone() * y1.clone() - force_y.clone();
        let mut dx2 = -(rot2.clone() * y2.clone()) + d.clone() * x2.clone() - force_x;
        let mut dy2 = rot2 * x2.clone() + d * y2.clone() - force_y;

        if self.kind == FieldKind::CubicForcingQuadratic {
            let p = x1.clone() * x1.clone() - y1.clone() * y1.clone() - x2.clone() * x2.clone()
                + y2.clone() * y2.clone();
            let q = x2.clone() * y2.clone() - x1.clone() * y1.clone();
            let ex = inv.clone() * (s2.clone() * p.clone() + c(2.0) * s1.clone() * q.clone());
            let ey = inv * (s1.clone() * p - c(2.0) * s2.clone() * q);
            dx1 = dx1 + ex.clone();
            dx2 = dx2 + ex;
            dy1 = dy1 + ey.clone();
            dy2 = dy2 + ey;
        }

        let b = c(self.b);
        let pr = x1.clone() * x2.clone() - y1.clone() * y2.clone();
        let qr = x1 * y2 + x2 * y1;
        let two_s1s2 = c(2.0) * s1 * s2;
        let diff = s1sq - s2sq;
        let ds1 = c(1.0) - b.clone() * (two_s1s2.clone() * qr.clone() - diff.clone() * pr.clone());
        let ds2 = b * (two_s1s2 * pr + diff * qr);
        [dx1, dy1, dx2, dy2, ds1, ds2]
    }
}

/// Replacement for the generic quartic derivative bounds:
/// `(m0, rho) -> (M11_4, M12_4)`.
pub type QuarticBound = fn(Interval, Interval) -> Result<(Interval, Interval)>;

/// Author-supplied sharper derivative bounds.
#[derive(Clone, Copy)]
pub struct SharpenedBounds {
    pub quartic: QuarticBound,
    /// When set, the orders 1..3 of the derivative bounds are exactly zero.
    pub zero_lower_orders: bool,
    pub justification: &'static str,
}

impl std::fmt::Debug for SharpenedBounds {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SharpenedBounds")
            .field("zero_lower_orders", &self.zero_lower_orders)
            .field("justification", &self.justification)
            .finish()
    }
}

#[derive(Clone, Debug)]
pub struct ProblemSpec {
    pub name: String,
    pub ledger: LedgerInputs,
    pub field: VectorField,
    pub sharpened: Option<SharpenedBounds>,
    pub refinement: Option<RefinementData>,
    pub shooting: ShootingConfig,
}

impl ProblemSpec {
    pub fn by_name(name: &str) -> Result<ProblemSpec> {
        match name {
            "example1" => Ok(example1()),
            "example2" => Ok(example2()),
            other => Err(Error::InvalidInput(format!("unknown problem `{other}`"))),
        }
    }
}

/// `F1 = -s^-3`, `F2 = H = 0`.
pub fn example1() -> ProblemSpec {
    ProblemSpec {
        name: "example1".into(),
        ledger: LedgerInputs {
            a3: (1.0, 0.0),
            // |F1| = |z|^3 with z = -1/s, so C_F = 1 is the sharp constant.
            c_f: 1.0,
            ..LedgerInputs::zero()
        },
        field: VectorField {
            kind: FieldKind::CubicForcing,
            alpha: 1.0,
            b: 1.0,
        },
        sharpened: None,
        refinement: Some(RefinementData::example1()),
        shooting: ShootingConfig::default(),
    }
}

/// Second example: `F1 = F2 = -s^-3 + (i/s)(phi^2 - varphi^2)`, `H = 0`.
pub fn example2() -> ProblemSpec {
    ProblemSpec {
        name: "example2".into(),
        ledger: LedgerInputs {
            a3: (1.0, 0.0),
            c_f: 2.0,
            c_f_phi: 1.0,
            c_f_varphi: 1.0,
            ..LedgerInputs::zero()
        },
        field: VectorField {
            kind: FieldKind::CubicForcingQuadratic,
            alpha: 1.0,
            b: 1.0,
        },
        sharpened: Some(SharpenedBounds {
            quartic: example2_quartic,
            zero_lower_orders: true,
            justification: "derivatives of the fixed-point operator computed directly \
                for this nonlinearity: only quartic-order terms survive",
        }),
        refinement: None,
        shooting: ShootingConfig::default(),
    }
}

/// `M11_4 = M0/E^2 (3 + M0 (1 + 1/rho)(2 - M0^2/rho^4))`,
/// `M12_4 = M0/E^2 (3 + M0 (1 + 1/rho))`, `E = 1 - M0^2/rho^4`.
fn example2_quartic(m0: Interval, rho: Interval) -> Result<(Interval, Interval)> {
    let one = Interval::ONE;
    let q = m0.sqr() / rho.powi(4);
    let e = one - q;
    if !(e.lo() > 0.0) {
        return Err(Error::domain("1 - M0^2/rho^4 not positive"));
    }
    let pre = m0 / e.sqr();
    let grow = one + one / rho;
    let three = Interval::point(3.0);
    let m11 = pre * (three + m0 * grow * (Interval::point(2.0) - q));
    let m12 = pre * (three + m0 * grow);
    Ok((m11, m12))
}

/// Rigorous enclosure of the field on a box.
pub fn eval_field(p: &ProblemSpec, bx: &StateBox) -> Result<IntervalVector> {
    let x = bx.to_array();
    let r2 = x[4].sqr() + x[5].sqr();
    if !(r2.lo() > 0.0) {
        return Err(Error::domain("box reaches s = 0"));
    }
    let out = p.field.eval(&x);
    let v = IntervalVector::new(out.to_vec());
    if !v.is_bounded() {
        return Err(Error::domain("unbounded field enclosure"));
    }
    Ok(v)
}
