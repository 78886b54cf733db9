//! Non-rigorous floating-point pipeline: same vector field and Taylor tape,
//! point arithmetic, adaptive steps. Used for exploration and cross-checks;
//! nothing here is a proof.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::flow::lohner::poly_eval;
use crate::flow::tape::Tape;
use crate::flow::taylor::{horner, TaylorEngine};
use crate::flow::Direction;
use crate::problem::ProblemSpec;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OracleConfig {
    pub order: usize,
    pub tol: f64,
    pub h_max: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            order: 24,
            tol: 1e-19,
            h_max: 4.0,
        }
    }
}

pub struct Oracle<'p> {
    problem: &'p ProblemSpec,
    tape: Tape,
    cfg: OracleConfig,
}

fn step_size(c: &[[f64; 6]], tol: f64, h_max: f64) -> f64 {
    let p = c.len() - 1;
    let mut h = h_max;
    for j in [p - 1, p] {
        for a in c[j].iter().map(|a| a.abs()) {
            if a > 0.0 && a.is_finite() {
                h = h.min((tol / a).powf(1.0 / j as f64));
            }
        }
    }
    0.9 * h
}

impl<'p> Oracle<'p> {
    pub fn new(problem: &'p ProblemSpec, cfg: OracleConfig) -> Self {
        Oracle {
            problem,
            tape: Tape::record(&problem.field),
            cfg,
        }
    }

    /// Asymptotic start `(phi, varphi)` of the distinguished solutions at
    /// `s`: the formal series of `phi' = -(i alpha - 1/s) phi - a3 s^-3`,
    /// `varphi' = (i alpha + 1/s) varphi - a3 s^-3`, truncated after
    /// `s^-8`. Leading terms `phi ~ i a3/(alpha s^3)`, `varphi ~ -i a3/(alpha s^3)`.
    pub fn asymptotic_start(&self, s: Complex64) -> [f64; 6] {
        let l = &self.problem.ledger;
        let a3 = Complex64::new(l.a3.0, l.a3.1);
        let i = Complex64::i();
        let series = |w: Complex64| -> Complex64 {
            // c_3 = a3/w, c_{k+1} = -(k+1) c_k / w with w = -i alpha (phi) or i alpha (varphi)
            let mut c = a3 / w;
            let mut acc = c * s.powi(-3);
            for k in 3..8 {
                c = -((k + 1) as f64) * c / w;
                acc += c * s.powi(-(k + 1));
            }
            acc
        };
        let phi = series(-i * l.alpha);
        let varphi = series(i * l.alpha);
        [phi.re, phi.im, varphi.re, varphi.im, s.re, s.im]
    }

    /// Integrate to the section `{s1 = 0}`. Returns the hit and the elapsed
    /// (signed) time.
    pub fn to_section(&self, start: [f64; 6], direction: Direction) -> Result<([f64; 6], f64)> {
        let sigma = match direction {
            Direction::Forward => 1.0,
            Direction::Backward => -1.0,
        };
        if !(start[4] * sigma < 0.0) {
            return Err(Error::InvalidInput(
                "oracle start on the wrong side of the section".into(),
            ));
        }
        let mut eng = TaylorEngine::<f64>::new(&self.tape);
        let mut x = start;
        let mut tau = 0.0f64;
        let budget = 10.0 * start[4].abs() + 100.0;
        while tau.abs() <= budget {
            let c = eng.coefficients(&x, self.cfg.order);
            let h = step_size(&c, self.cfg.tol, self.cfg.h_max);
            let (_, ds) = poly_eval(&c, 4, 0.0);
            if x[4].abs() <= 1.2 * h * ds.abs() {
                // land exactly: Newton on the s1 polynomial
                let mut t = -x[4] / ds;
                for _ in 0..30 {
                    let (v, d) = poly_eval(&c, 4, t);
                    let dt = v / d;
                    t -= dt;
                    if dt.abs() <= 1e-17 * t.abs() {
                        break;
                    }
                }
                let mut y = horner(&c, t);
                y[4] = 0.0;
                return Ok((y, tau + t));
            }
            x = horner(&c, sigma * h);
            tau += sigma * h;
            if !x.iter().all(|v| v.is_finite()) {
                return Err(Error::domain("oracle trajectory blew up"));
            }
        }
        Err(Error::NoCrossing { budget })
    }

    /// Flow for a fixed signed time.
    pub fn flow_for(&self, start: [f64; 6], t: f64) -> [f64; 6] {
        let mut eng = TaylorEngine::<f64>::new(&self.tape);
        let mut x = start;
        let mut done = 0.0;
        let sigma = t.signum();
        while done < t.abs() {
            let c = eng.coefficients(&x, self.cfg.order);
            let h = step_size(&c, self.cfg.tol, self.cfg.h_max).min(t.abs() - done);
            x = horner(&c, sigma * h);
            done += h;
        }
        x
    }

    /// Difference of the two distinguished solutions on the section at the
    /// height reached from `(-re_s, -rho)`; the plus start is found by secant.
    pub fn delta(&self, re_s: f64, rho: f64) -> Result<OracleDelta> {
        let (hm, _) = self.to_section(
            self.asymptotic_start(Complex64::new(-re_s, -rho)),
            Direction::Forward,
        )?;
        let target = hm[5];
        let shoot = |s2: f64| -> Result<[f64; 6]> {
            Ok(self
                .to_section(
                    self.asymptotic_start(Complex64::new(re_s, s2)),
                    Direction::Backward,
                )?
                .0)
        };
        let (mut a, mut b) = (-rho, -rho + 1e-6);
        let mut fa = shoot(a)?[5] - target;
        let mut hp = shoot(b)?;
        let mut fb = hp[5] - target;
        for _ in 0..40 {
            if fb == 0.0 || (b - a).abs() < 1e-15 * b.abs() || fb == fa {
                break;
            }
            let c = b - fb * (b - a) / (fb - fa);
            a = b;
            fa = fb;
            b = c;
            hp = shoot(b)?;
            fb = hp[5] - target;
        }
        let dphi = Complex64::new(hp[0] - hm[0], hp[1] - hm[1]);
        let dvarphi = Complex64::new(hp[2] - hm[2], hp[3] - hm[3]);
        let rho_star = -target;
        Ok(OracleDelta {
            rho_star,
            s2_plus: b,
            delta_phi: (dphi.re, dphi.im),
            delta_varphi: (dvarphi.re, dvarphi.im),
            kappa0: {
                let k = kappa0_f64(self.problem, rho_star, dphi);
                (k.re, k.im)
            },
        })
    }

    /// Estimate of the Stokes constant: the `rho -> infinity` limit of
    /// `kappa0(rho)`, by a least-squares fit in `1, rho^-3, rho^-4` over the
    /// radii `rhos`.
    pub fn theta_estimate(&self, re_s: f64, rhos: &[f64]) -> Result<OracleTheta> {
        if rhos.len() < 3 {
            return Err(Error::InvalidInput("need at least three radii".into()));
        }
        let mut samples = Vec::with_capacity(rhos.len());
        for &r in rhos {
            let d = self.delta(re_s, r)?;
            samples.push((d.rho_star, Complex64::new(d.kappa0.0, d.kappa0.1)));
        }
        // normal equations, real basis, complex data
        let basis = |r: f64| [1.0, r.powi(-3), r.powi(-4)];
        let mut ata = [[0.0f64; 3]; 3];
        let mut atb = [Complex64::new(0.0, 0.0); 3];
        for &(r, k) in &samples {
            let b = basis(r);
            for i in 0..3 {
                for j in 0..3 {
                    ata[i][j] += b[i] * b[j];
                }
                atb[i] += b[i] * k;
            }
        }
        let x = solve3(ata, atb).ok_or_else(|| Error::domain("singular fit"))?;
        Ok(OracleTheta {
            theta: (x[0].re, x[0].im),
            samples: samples.iter().map(|(r, k)| (*r, k.re, k.im)).collect(),
        })
    }
}

fn solve3(mut a: [[f64; 3]; 3], mut b: [Complex64; 3]) -> Option<[Complex64; 3]> {
    for c in 0..3 {
        let piv = (c..3).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))?;
        if a[piv][c] == 0.0 {
            return None;
        }
        a.swap(c, piv);
        b.swap(c, piv);
        for r in c + 1..3 {
            let f = a[r][c] / a[c][c];
            for k in c..3 {
                a[r][k] -= f * a[c][k];
            }
            b[r] -= f * b[c];
        }
    }
    let mut x = [Complex64::new(0.0, 0.0); 3];
    for r in (0..3).rev() {
        let mut acc = b[r];
        for k in r + 1..3 {
            acc -= a[r][k] * x[k];
        }
        x[r] = acc / a[r][r];
    }
    Some(x)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleTheta {
    pub theta: (f64, f64),
    /// `(rho, Re kappa0, Im kappa0)`.
    pub samples: Vec<(f64, f64, f64)>,
}

/// `i e^{alpha(rho - i h0 log rho - h0 pi/2)} dphi / rho` in floating point.
pub fn kappa0_f64(p: &ProblemSpec, rho: f64, dphi: Complex64) -> Complex64 {
    let l = &p.ledger;
    let e = Complex64::new(
        l.alpha * (rho - l.h0 * std::f64::consts::FRAC_PI_2),
        -l.alpha * l.h0 * rho.ln(),
    )
    .exp();
    Complex64::i() * e * dphi / rho
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OracleDelta {
    pub rho_star: f64,
    pub s2_plus: f64,
    pub delta_phi: (f64, f64),
    pub delta_varphi: (f64, f64),
    pub kappa0: (f64, f64),
}
