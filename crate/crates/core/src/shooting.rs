//! Shooting sets, Bolzano ordering and the validated enclosure of the
//! difference of the two distinguished solutions at `s = -i rho*`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::flow::{poincare_minus, poincare_plus, IntegratorConfig, SectionHit, StateBox};
use crate::interval::round::{div_up, mul_up};
use crate::interval::{ComplexInterval, Interval};
use crate::problem::ProblemSpec;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ShootingConfig {
    /// Start of the minus transport, `(Re s, Im s)`.
    pub s_minus: (f64, f64),
    /// `Re s` of the plus segment.
    pub s_plus_re: f64,
    /// The plus segment is centred at `Im s = -rho_bar`.
    pub rho_bar: f64,
    /// Half-length of the plus segment.
    pub half_width: f64,
}

impl Default for ShootingConfig {
    fn default() -> Self {
        ShootingConfig {
            s_minus: (-1000.0, -16.00008679),
            s_plus_re: 1000.0,
            rho_bar: 16.00008679,
            half_width: 1e-6,
        }
    }
}

impl ShootingConfig {
    /// Same `Re s` magnitude on both sides, minus start at `-rho_bar`.
    pub fn symmetric(re_s: f64, rho_bar: f64, half_width: f64) -> Self {
        ShootingConfig {
            s_minus: (-re_s, -rho_bar),
            s_plus_re: re_s,
            rho_bar,
            half_width,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.s_minus.0 < 0.0
            && 0.0 < self.s_plus_re
            && self.half_width > 0.0
            && self.rho_bar > 0.0
            && [
                self.s_minus.0,
                self.s_minus.1,
                self.s_plus_re,
                self.rho_bar,
                self.half_width,
            ]
            .iter()
            .all(|x| x.is_finite());
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "invalid shooting configuration {self:?}"
            )))
        }
    }

    pub fn s_upper(&self) -> f64 {
        -self.rho_bar + self.half_width
    }

    pub fn s_lower(&self) -> f64 {
        -self.rho_bar - self.half_width
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ShootingSets {
    pub pminus: StateBox,
    pub pplus: StateBox,
    pub pplus_l: StateBox,
    pub pplus_u: StateBox,
}

/// Upper bound of `m0 / |re|^3`.
fn xy_radius(m0: Interval, re: f64) -> f64 {
    let a = re.abs();
    div_up(
        m0.hi(),
        mul_up(mul_up(a, a), a).next_down().max(f64::MIN_POSITIVE),
    )
    .max(0.0)
}

fn with_xy(r: f64, s1: Interval, s2: Interval) -> StateBox {
    let c = if r == 0.0 {
        Interval::ZERO
    } else {
        Interval::new(-r, r)
    };
    StateBox::from_array([c, c, c, c, s1, s2])
}

/// The four initial sets: `(x, y)` hypercubes of half-width `m0 |Re s|^-3`.
pub fn build_shooting_sets(cfg: &ShootingConfig, m0: Interval) -> Result<ShootingSets> {
    cfg.validate()?;
    if !m0.is_bounded() || m0.lo() < 0.0 {
        return Err(Error::InvalidInput(format!("invalid M0 enclosure {m0}")));
    }
    let rm = xy_radius(m0, cfg.s_minus.0);
    let rp = xy_radius(m0, cfg.s_plus_re);
    let s1p = Interval::point(cfg.s_plus_re);
    let (sl, su) = (cfg.s_lower(), cfg.s_upper());
    Ok(ShootingSets {
        pminus: with_xy(
            rm,
            Interval::point(cfg.s_minus.0),
            Interval::point(cfg.s_minus.1),
        ),
        pplus: with_xy(rp, s1p, Interval::new(sl, su)),
        pplus_l: with_xy(rp, s1p, Interval::point(sl)),
        pplus_u: with_xy(rp, s1p, Interval::point(su)),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeltaEnclosure {
    pub rho_star_enc: Interval,
    pub delta_phi: ComplexInterval,
    pub delta_varphi: ComplexInterval,
    pub nonzero_certified: bool,
    pub hit_minus: SectionHit,
    pub hit_plus: SectionHit,
    pub s2_plus_lower: Interval,
    pub s2_plus_upper: Interval,
    pub sets: ShootingSets,
}

/// Thread count from `STOKES_THREADS` (default: available parallelism).
pub fn thread_count() -> usize {
    std::env::var("STOKES_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Run independent jobs, concurrently when `threads > 1`. Output order
/// matches input order.
fn run_jobs<T: Send>(threads: usize, jobs: Vec<Box<dyn FnOnce() -> T + Send + '_>>) -> Vec<T> {
    if threads <= 1 {
        return jobs.into_iter().map(|j| j()).collect();
    }
    let n = jobs.len();
    let mut slots: Vec<Option<T>> = (0..n).map(|_| None).collect();
    let mut pending: Vec<(usize, Box<dyn FnOnce() -> T + Send + '_>)> =
        jobs.into_iter().enumerate().collect();
    while !pending.is_empty() {
        let batch: Vec<_> = pending.drain(..threads.min(pending.len())).collect();
        std::thread::scope(|sc| {
            let handles: Vec<_> = batch
                .into_iter()
                .map(|(i, job)| (i, sc.spawn(job)))
                .collect();
            for (i, h) in handles {
                slots[i] = Some(h.join().expect("transport thread panicked"));
            }
        });
    }
    slots.into_iter().map(|s| s.expect("job result")).collect()
}

/// Split the plus segment into `n` consecutive pieces covering it.
fn split_segment(b: &StateBox, n: usize) -> Vec<StateBox> {
    let (lo, hi) = (b.s2.lo(), b.s2.hi());
    let mut edges: Vec<f64> = (0..=n)
        .map(|k| lo + (hi - lo) * (k as f64 / n as f64))
        .collect();
    edges[0] = lo;
    edges[n] = hi;
    (0..n)
        .map(|k| StateBox {
            s2: Interval::new(edges[k], edges[k + 1].max(edges[k])),
            ..*b
        })
        .collect()
}

fn hull_hits(hits: Vec<SectionHit>) -> SectionHit {
    let mut it = hits.into_iter();
    let mut acc = it.next().expect("at least one hit");
    for h in it {
        acc.state = acc.state.hull(&h.state);
        acc.time_enclosure = acc.time_enclosure.hull(&h.time_enclosure);
        acc.transversality = acc.transversality.hull(&h.transversality);
        acc.steps += h.steps;
        acc.trace.extend(h.trace);
    }
    acc
}

pub fn enclose_delta(
    p: &ProblemSpec,
    cfg: &ShootingConfig,
    icfg: &IntegratorConfig,
    m0: Interval,
    threads: usize,
) -> Result<DeltaEnclosure> {
    icfg.validate()?;
    let sets = build_shooting_sets(cfg, m0)?;
    let pieces = split_segment(&sets.pplus, icfg.subdivide);
    let mut jobs: Vec<Box<dyn FnOnce() -> Result<SectionHit> + Send + '_>> = vec![
        Box::new(move || poincare_minus(p, &sets.pminus, icfg)),
        Box::new(move || poincare_plus(p, &sets.pplus_l, icfg)),
        Box::new(move || poincare_plus(p, &sets.pplus_u, icfg)),
    ];
    for piece in pieces {
        jobs.push(Box::new(move || poincare_plus(p, &piece, icfg)));
    }
    let mut results = run_jobs(threads, jobs).into_iter();
    let hit_minus = results.next().expect("minus")?;
    let hit_l = results.next().expect("lower")?;
    let hit_u = results.next().expect("upper")?;
    let plus: Vec<SectionHit> = results.collect::<Result<_>>()?;
    let hit_plus = hull_hits(plus);

    let (sl, sm, su) = (hit_l.state.s2, hit_minus.state.s2, hit_u.state.s2);
    if !sl.certainly_lt(&sm) {
        return Err(Error::BolzanoFailure(format!(
            "s2 of P+(lower) = {sl} not strictly below s2 of P-(minus) = {sm}"
        )));
    }
    if !sm.certainly_lt(&su) {
        return Err(Error::BolzanoFailure(format!(
            "s2 of P-(minus) = {sm} not strictly below s2 of P+(upper) = {su}"
        )));
    }
    if !(su.hi() < 0.0) {
        return Err(Error::BolzanoFailure(format!(
            "s2 of P+(upper) = {su} not negative"
        )));
    }
    let (a, b) = (hit_plus.state, hit_minus.state);
    let delta_phi = ComplexInterval::new(a.x1 - b.x1, a.y1 - b.y1);
    let delta_varphi = ComplexInterval::new(a.x2 - b.x2, a.y2 - b.y2);
    Ok(DeltaEnclosure {
        rho_star_enc: -sm,
        nonzero_certified: !delta_phi.contains_zero() || !delta_varphi.contains_zero(),
        delta_phi,
        delta_varphi,
        hit_minus,
        hit_plus,
        s2_plus_lower: sl,
        s2_plus_upper: su,
        sets,
    })
}
