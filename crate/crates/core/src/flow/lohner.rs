//! One validated Taylor step with Lohner's QR coordinate frame.
//!
//! The set is `xh + C r0 + B r`: `xh` a point, `C` the accumulated (point)
//! derivative acting on the fixed initial offsets `r0`, `B` an orthonormal
//! frame carrying the accumulated errors `r`.

use super::linalg::*;
use super::tape::Tape;
use super::taylor::{horner, Coeff, Dual, TaylorEngine};
use crate::interval::Interval;

#[derive(Clone, Debug)]
pub struct LohnerSet {
    pub xh: [f64; N],
    pub c: Mat,
    pub r0: IVec,
    pub b: Mat,
    pub r: IVec,
}

impl LohnerSet {
    pub fn from_box(x: &IVec) -> LohnerSet {
        let xh = x.map(|c| c.mid());
        let r0 = std::array::from_fn(|i| x[i] - Interval::point(xh[i]));
        LohnerSet {
            xh,
            c: identity(),
            r0,
            b: identity(),
            r: [Interval::ZERO; N],
        }
    }

    pub fn hull(&self) -> IVec {
        let x = self.xh.map(Interval::point);
        vec_add(
            &vec_add(&x, &mat_ivec(&self.c, &self.r0)),
            &mat_ivec(&self.b, &self.r),
        )
    }
}

/// Why a step attempt was rejected; the caller shrinks the step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reject {
    /// The a priori enclosure could not be validated.
    Enclosure,
    /// The a priori enclosure reaches the singularity `s = 0`.
    Singular,
    /// Linear algebra of the frame update failed.
    Frame,
    /// The a priori enclosure touches the section `s1 = 0`.
    Section,
}

pub struct StepOutput {
    pub set: LohnerSet,
    /// A priori enclosure of all trajectories over the step.
    pub rough: IVec,
}

pub struct Stepper<'a> {
    tape: &'a Tape,
    order: usize,
    point: TaylorEngine<'a, Interval>,
    dual: TaylorEngine<'a, Dual>,
    float: TaylorEngine<'a, f64>,
}

fn time_range(h: f64) -> Interval {
    if h >= 0.0 {
        Interval::new(0.0, h)
    } else {
        Interval::new(h, 0.0)
    }
}

impl<'a> Stepper<'a> {
    pub fn new(tape: &'a Tape, order: usize) -> Self {
        Stepper {
            tape,
            order,
            point: TaylorEngine::new(tape),
            dual: TaylorEngine::new(tape),
            float: TaylorEngine::new(tape),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Floating-point coefficients at the centre, for step-size control.
    pub fn center_coefficients(&mut self, set: &LohnerSet) -> Vec<[f64; N]> {
        self.float.coefficients(&set.xh, self.order)
    }

    /// Step size so that the last two terms are below `tol` in every component.
    pub fn suggest_step(&mut self, set: &LohnerSet, tol: f64, h_max: f64) -> f64 {
        let c = self.center_coefficients(set);
        let p = self.order;
        let mut h = h_max;
        for j in [p - 1, p] {
            for i in 0..N {
                let a = c[j][i].abs();
                if a > 0.0 && a.is_finite() {
                    h = h.min((tol / a).powf(1.0 / j as f64));
                }
            }
        }
        0.9 * h
    }

    /// Validated step of signed length `h`. `side` is the sign `s1` must
    /// keep over the whole step (`0` disables the check).
    pub fn step(&mut self, set: &LohnerSet, h: f64, side: f64) -> Result<StepOutput, Reject> {
        let p = self.order;
        let x = set.hull();
        let hi = Interval::point(h);
        let range = time_range(h);

        let xd: [Dual; N] = std::array::from_fn(|i| Dual::seed(x[i], i));
        let dc = self.dual.coefficients(&xd, p);
        let vals: Vec<IVec> = dc.iter().map(|c| c.map(|d| d.v)).collect();
        let guess = horner(&vals, range);

        let hp = range.powi(p as u32 + 1);
        let mut y: IVec = std::array::from_fn(|i| {
            let g = guess[i];
            g.inflate(0.05 * g.width() + 1e-12 * g.mag() + 1e-300)
        });
        let mut rem = None;
        for _ in 0..6 {
            if !((y[4].sqr() + y[5].sqr()).lo() > 0.0) {
                return Err(Reject::Singular);
            }
            let yc = self.point.coefficients(&y, p + 1);
            let top = yc[p + 1];
            if !top.iter().all(Interval::is_bounded) {
                return Err(Reject::Singular);
            }
            let z: IVec = std::array::from_fn(|i| guess[i] + top[i] * hp);
            if (0..N).all(|i| z[i].subset_of(&y[i])) {
                rem = Some(top);
                break;
            }
            y = std::array::from_fn(|i| {
                let u = y[i].hull(&z[i]);
                u.inflate(0.1 * u.width() + 1e-300)
            });
        }
        let top = rem.ok_or(Reject::Enclosure)?;
        if side != 0.0 {
            let s1 = y[4];
            let ok = if side < 0.0 {
                s1.hi() < 0.0
            } else {
                s1.lo() > 0.0
            };
            if !ok {
                return Err(Reject::Section);
            }
        }
        let hpow = hi.powi(p as u32 + 1);
        let remainder: IVec = top.map(|t| t * hpow);

        let xh = set.xh.map(Interval::point);
        let pc = self.point.coefficients(&xh, p);
        let phi = vec_add(&horner(&pc, hi), &remainder);

        let jd = horner(&dc, Dual::constant(h));
        let jac: IMat = std::array::from_fn(|i| jd[i].d);

        // new centre and the residual it leaves
        let xh_new = phi.map(|c| c.mid());
        let resid = vec_sub(&phi, &xh_new.map(Interval::point));

        let jc = imat_mul(&jac, &to_imat(&set.c));
        let c_new = mid(&jc);
        let dc_mat: IMat = std::array::from_fn(|i| {
            std::array::from_fn(|j| jc[i][j] - Interval::point(c_new[i][j]))
        });

        let jb = imat_mul(&jac, &to_imat(&set.b));
        let a = mid(&jb);
        // Lohner pivoting: largest error directions first
        let mut order: [usize; N] = std::array::from_fn(|j| j);
        let weight = |j: usize| {
            let n: f64 = (0..N).map(|i| a[i][j] * a[i][j]).sum::<f64>().sqrt();
            n * set.r[j].width()
        };
        order.sort_by(|&u, &v| weight(v).total_cmp(&weight(u)));
        let b_new = orthonormalize(&a, &order).ok_or(Reject::Frame)?;
        let b_inv = orthogonal_inverse(&b_new).ok_or(Reject::Frame)?;

        let t1 = imat_vec(&imat_mul(&b_inv, &jb), &set.r);
        let t2 = imat_vec(&b_inv, &vec_add(&imat_vec(&dc_mat, &set.r0), &resid));
        let r_new = vec_add(&t1, &t2);

        let out = LohnerSet {
            xh: xh_new,
            c: c_new,
            r0: set.r0,
            b: b_new,
            r: r_new,
        };
        if !out.hull().iter().all(Interval::is_bounded) {
            return Err(Reject::Singular);
        }
        Ok(StepOutput { set: out, rough: y })
    }

    pub fn tape(&self) -> &Tape {
        self.tape
    }
}

/// Floating-point Taylor polynomial of `s1` about the centre, evaluated at `t`.
pub fn poly_eval(c: &[[f64; N]], comp: usize, t: f64) -> (f64, f64) {
    let mut v = 0.0;
    let mut d = 0.0;
    for k in (0..c.len()).rev() {
        d = d * t + v;
        v = v * t + c[k][comp];
    }
    (v, d)
}
