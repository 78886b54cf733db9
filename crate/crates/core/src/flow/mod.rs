//! Validated integration of the real six-dimensional system and the Poincare
//! maps onto the section `{s1 = 0}`.

pub mod linalg;
pub mod lohner;
pub mod tape;
pub mod taylor;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::round::div_up;
use crate::interval::{Interval, IntervalVector};
use crate::problem::ProblemSpec;
use linalg::{IVec, N};
use lohner::{poly_eval, LohnerSet, Reject, Stepper};
use tape::Tape;

/// Interval state `(x1, y1, x2, y2, s1, s2)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StateBox {
    pub x1: Interval,
    pub y1: Interval,
    pub x2: Interval,
    pub y2: Interval,
    pub s1: Interval,
    pub s2: Interval,
}

impl StateBox {
    pub fn from_array(a: [Interval; 6]) -> StateBox {
        let [x1, y1, x2, y2, s1, s2] = a;
        StateBox {
            x1,
            y1,
            x2,
            y2,
            s1,
            s2,
        }
    }

    pub fn to_array(&self) -> [Interval; 6] {
        [self.x1, self.y1, self.x2, self.y2, self.s1, self.s2]
    }

    pub fn to_vector(&self) -> IntervalVector {
        IntervalVector::new(self.to_array().to_vec())
    }

    pub fn mid(&self) -> [f64; 6] {
        self.to_array().map(|c| c.mid())
    }

    pub fn max_width(&self) -> f64 {
        self.to_array()
            .iter()
            .map(Interval::width)
            .fold(0.0, f64::max)
    }

    pub fn hull(&self, other: &StateBox) -> StateBox {
        let (a, b) = (self.to_array(), other.to_array());
        StateBox::from_array(std::array::from_fn(|i| a[i].hull(&b[i])))
    }

    pub fn subset_of(&self, other: &StateBox) -> bool {
        let (a, b) = (self.to_array(), other.to_array());
        (0..6).all(|i| a[i].subset_of(&b[i]))
    }

    pub fn intersects(&self, other: &StateBox) -> bool {
        let (a, b) = (self.to_array(), other.to_array());
        (0..6).all(|i| a[i].intersects(&b[i]))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    fn sign(self) -> f64 {
        match self {
            Direction::Forward => 1.0,
            Direction::Backward => -1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IntegratorConfig {
    pub order: usize,
    /// Local per-step error target (absolute).
    pub tol: f64,
    /// Largest admissible component width of the enclosure.
    pub width_cap: f64,
    /// Uniform subdivision of the vertical shooting segment.
    pub subdivide: usize,
    /// Largest step size. Interval Taylor sums of the rotating components
    /// overestimate roughly like `e^h`, so long steps inflate the Jacobian.
    pub h_max: f64,
    /// Record a per-step log.
    pub trace: bool,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            order: 20,
            tol: 1e-17,
            width_cap: 1e-3,
            subdivide: 1,
            h_max: 1.0,
            trace: false,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        if self.order < 4 || self.order > 60 {
            return Err(Error::InvalidInput("order must lie in 4..=60".into()));
        }
        if !(self.tol > 0.0) || !(self.width_cap > 0.0) || !(self.h_max > 0.0) {
            return Err(Error::InvalidInput(
                "tol, width cap and h_max must be positive".into(),
            ));
        }
        if self.subdivide == 0 {
            return Err(Error::InvalidInput("subdivide must be at least 1".into()));
        }
        Ok(())
    }
}

/// One accepted step of the trace.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StepRecord {
    pub tau: f64,
    pub h: f64,
    pub s1: f64,
    pub width: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SectionHit {
    /// State on the section; `s1` is exactly `[0, 0]`.
    pub state: StateBox,
    pub time_enclosure: Interval,
    /// Enclosure of `s1'` over the crossing step (bounded away from zero).
    pub transversality: Interval,
    pub steps: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<StepRecord>,
}

/// Distance (in s1) at which the final landing step aims.
const LANDING_GAP: f64 = 1e-6;

fn max_width(x: &IVec) -> f64 {
    x.iter().map(Interval::width).fold(0.0, f64::max)
}

/// First crossing of `{s1 = 0}` in the given time direction, for every point
/// of `start`.
pub fn integrate(
    p: &ProblemSpec,
    start: &StateBox,
    direction: Direction,
    cfg: &IntegratorConfig,
) -> Result<SectionHit> {
    cfg.validate()?;
    let sigma = direction.sign();
    let x0 = start.to_array();
    if !x0.iter().all(Interval::is_bounded) {
        return Err(Error::InvalidInput("unbounded start box".into()));
    }
    // s1 must start strictly on the far side: negative forward, positive backward.
    let side = -sigma;
    let on_side = |s1: Interval| {
        if side < 0.0 {
            s1.hi() < 0.0
        } else {
            s1.lo() > 0.0
        }
    };
    if !on_side(x0[4]) {
        return Err(Error::InvalidInput(format!(
            "start box s1 = {} is not strictly on the {} side of the section",
            x0[4],
            if side < 0.0 { "negative" } else { "positive" }
        )));
    }
    if !((x0[4].sqr() + x0[5].sqr()).lo() > 0.0) {
        return Err(Error::domain("start box reaches s = 0"));
    }

    let tape = Tape::record(&p.field);
    let mut stepper = Stepper::new(&tape, cfg.order);
    let mut set = LohnerSet::from_box(&x0);
    let budget = 10.0 * x0[4].mag() + 100.0;
    let mut tau = Interval::ZERO;
    let mut steps = 0usize;
    let mut trace = Vec::new();

    loop {
        // distance to the section along the direction of motion
        let dist = set.xh[4].abs();
        if tau.mag() > budget {
            return Err(Error::NoCrossing { budget });
        }
        let h_prop = stepper.suggest_step(&set, cfg.tol, cfg.h_max);
        let coeffs = stepper.center_coefficients(&set);
        let speed = coeffs[1][4].abs().max(1e-300);
        let landing = dist <= 1.2 * h_prop * speed;
        let h_try = if landing {
            landing_time(
                &coeffs,
                side * LANDING_GAP,
                sigma * (dist - LANDING_GAP) / speed,
            )
        } else {
            sigma * h_prop
        };

        let mut h = h_try;
        let mut accepted = None;
        for _ in 0..40 {
            match stepper.step(&set, h, side) {
                Ok(out) => {
                    accepted = Some(out);
                    break;
                }
                Err(Reject::Frame) => {
                    return Err(Error::domain("frame update failed (singular Jacobian)"));
                }
                Err(Reject::Singular) if h.abs() < 1e-8 => {
                    return Err(Error::domain("enclosure reaches s = 0"));
                }
                Err(_) => h *= 0.5,
            }
        }
        let out = accepted.ok_or_else(|| Error::domain("step size underflow"))?;
        let hull = out.set.hull();
        let w = max_width(&hull);
        if !(w <= cfg.width_cap) {
            return Err(Error::WrappingFailure {
                tau: tau.mid(),
                width: w,
                cap: cfg.width_cap,
            });
        }
        tau += Interval::point(h);
        steps += 1;
        set = out.set;
        if cfg.trace {
            trace.push(StepRecord {
                tau: tau.mid(),
                h,
                s1: set.xh[4],
                width: w,
            });
        }
        let s1 = hull[4];
        if !on_side(s1) {
            return Err(Error::domain(
                "enclosure straddles the section after a step",
            ));
        }
        if landing && h == h_try && s1.mag() <= 10.0 * LANDING_GAP {
            let (state, tc, speed) = cross(&tape, &hull, sigma)?;
            return Ok(SectionHit {
                state,
                time_enclosure: tau + tc,
                transversality: speed,
                steps,
                trace,
            });
        }
    }
}

/// Signed time `t` (same sign as `guess`) with `s1(t) = target` according to
/// the floating-point Taylor polynomial of `s1`; Newton from `guess`.
fn landing_time(coeffs: &[[f64; N]], target: f64, guess: f64) -> f64 {
    let mut t = guess;
    for _ in 0..20 {
        let (v, d) = poly_eval(coeffs, 4, t);
        if d == 0.0 {
            break;
        }
        let dt = (v - target) / d;
        t -= dt;
        if dt.abs() <= 1e-16 * t.abs() {
            break;
        }
    }
    if t.is_finite() && t * guess > 0.0 {
        t
    } else {
        guess
    }
}

/// Validated crossing from a box close to the section.
///
/// With `Omega` an enclosure of all trajectories for `|t| <= T` and
/// `s1' in [m, M]` on `Omega` (`m > 0`), each point crosses exactly once, at
/// `t_c = sigma * d / s1'(xi)`, `d = |s1|`, and lands in `X + t_c f(Omega)`.
fn cross(tape: &Tape, x: &IVec, sigma: f64) -> Result<(StateBox, Interval, Interval)> {
    let field = |b: &IVec| -> Result<IVec> {
        if !((b[4].sqr() + b[5].sqr()).lo() > 0.0) {
            return Err(Error::domain("crossing enclosure reaches s = 0"));
        }
        let v = tape.eval(b);
        if v.iter().all(Interval::is_bounded) {
            Ok(v)
        } else {
            Err(Error::domain("unbounded field on crossing enclosure"))
        }
    };
    let d = x[4].abs();
    let f0 = field(x)?;
    let speed0 = f0[4];
    if !(speed0.lo() > 0.0) {
        return Err(Error::domain("section not transversal at the landing box"));
    }
    let t_max = div_up(d.hi(), speed0.lo()) * 2.0;
    let trange = if sigma > 0.0 {
        Interval::new(0.0, t_max)
    } else {
        Interval::new(-t_max, 0.0)
    };
    let mut omega: IVec = std::array::from_fn(|i| {
        let u = x[i] + trange * f0[i];
        u.inflate(0.1 * u.width() + 1e-15 * u.mag() + 1e-300)
    });
    let mut valid = false;
    for _ in 0..10 {
        let f = field(&omega)?;
        let next: IVec = std::array::from_fn(|i| x[i] + trange * f[i]);
        if (0..N).all(|i| next[i].subset_of(&omega[i])) {
            valid = true;
            break;
        }
        omega = std::array::from_fn(|i| {
            let u = omega[i].hull(&next[i]);
            u.inflate(0.1 * u.width() + 1e-300)
        });
    }
    if !valid {
        return Err(Error::domain("crossing enclosure could not be validated"));
    }
    let f = field(&omega)?;
    let speed = f[4];
    if !(speed.lo() > 0.0) {
        return Err(Error::domain(
            "transversality not verified on the crossing enclosure",
        ));
    }
    let t_abs = d / speed;
    if !(t_abs.hi() <= t_max) {
        return Err(Error::domain("crossing time exceeds the validated window"));
    }
    let tc = if sigma > 0.0 { t_abs } else { -t_abs };
    let mut hit: [Interval; 6] = std::array::from_fn(|i| x[i] + tc * f[i]);
    hit[4] = Interval::ZERO;
    Ok((StateBox::from_array(hit), tc, speed))
}

/// Forward map from `s1 < 0` to the section.
pub fn poincare_minus(
    p: &ProblemSpec,
    pminus: &StateBox,
    cfg: &IntegratorConfig,
) -> Result<SectionHit> {
    integrate(p, pminus, Direction::Forward, cfg)
}

/// Backward map from `s1 > 0` to the section.
pub fn poincare_plus(
    p: &ProblemSpec,
    pplus: &StateBox,
    cfg: &IntegratorConfig,
) -> Result<SectionHit> {
    integrate(p, pplus, Direction::Backward, cfg)
}
