//! End-to-end runs: thresholds, shooting, Stokes-constant enclosures.

use serde::Serialize;

use crate::bounds::ConstantTable;
use crate::certificate::{kappa0, theta_basic, theta_refined, Conclusion, StokesCertificate};
use crate::error::{Error, Gate, Result};
use crate::flow::IntegratorConfig;
use crate::interval::Interval;
use crate::oracle::{Oracle, OracleConfig, OracleDelta, OracleTheta};
use crate::problem::ProblemSpec;
use crate::shooting::{enclose_delta, thread_count, ShootingConfig};
use crate::thresholds::{find_thresholds, verify_at, RhoThresholds};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Thresholds only.
    Thresholds,
    /// Rigorous difference enclosure and the basic Theta enclosure.
    Verify,
    /// `Verify` plus the refined enclosure.
    Refine,
    /// Floating-point estimates, no rigor.
    Oracle,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub problem: String,
    pub mode: Mode,
    pub scan_start: f64,
    pub scan_factor: f64,
    pub max_iters: usize,
    /// `None`: the problem's default shooting configuration.
    pub shooting: Option<ShootingConfig>,
    pub integrator: IntegratorConfig,
    /// `None`: [`thread_count`].
    #[serde(skip)]
    pub threads: Option<usize>,
}

impl RunConfig {
    pub fn new(problem: &str, mode: Mode) -> Self {
        RunConfig {
            problem: problem.to_string(),
            mode,
            scan_start: 2.5,
            scan_factor: 1.25,
            max_iters: 60,
            shooting: None,
            integrator: IntegratorConfig::default(),
            threads: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdReport {
    pub problem: String,
    pub thresholds: RhoThresholds,
    /// Table at `rho0`, every gate re-verified.
    pub table_at_rho0: ConstantTable,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleReport {
    pub rigor: &'static str,
    pub problem: String,
    pub delta: OracleDelta,
    pub theta_estimate: OracleTheta,
    /// Series estimate `kappa0 * factor` when refinement data exist.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_series: Option<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RunOutput {
    Thresholds(Box<ThresholdReport>),
    Certificate(Box<StokesCertificate>),
    Oracle(Box<OracleReport>),
}

/// Process exit code of a run result.
pub fn exit_code(r: &Result<RunOutput>) -> i32 {
    match r {
        Ok(RunOutput::Certificate(c)) if c.conclusion == Conclusion::Inconclusive => 2,
        Ok(_) => 0,
        Err(Error::Threshold { .. } | Error::SearchExhausted { .. } | Error::BolzanoFailure(_)) => {
            3
        }
        Err(Error::WrappingFailure { .. } | Error::NoCrossing { .. } | Error::Domain(_)) => 4,
        Err(Error::InvalidInput(_) | Error::NotApplicable(_)) => 1,
    }
}

pub fn run(cfg: &RunConfig) -> Result<RunOutput> {
    let p = ProblemSpec::by_name(&cfg.problem)?;
    run_problem(&p, cfg)
}

pub fn run_problem(p: &ProblemSpec, cfg: &RunConfig) -> Result<RunOutput> {
    p.ledger.validate()?;
    cfg.integrator.validate()?;
    let shooting = cfg.shooting.unwrap_or(p.shooting);
    shooting.validate()?;
    if cfg.mode == Mode::Refine && p.refinement.is_none() {
        return Err(Error::NotApplicable(format!(
            "no refinement data for `{}`",
            p.name
        )));
    }
    if cfg.mode == Mode::Oracle {
        return oracle_report(p, &shooting).map(|r| RunOutput::Oracle(Box::new(r)));
    }

    let thresholds = find_thresholds(p, cfg.scan_start, cfg.scan_factor, cfg.max_iters)?;
    let table0 = verify_at(p, Interval::point(thresholds.rho0))?;
    if cfg.mode == Mode::Thresholds {
        return Ok(RunOutput::Thresholds(Box::new(ThresholdReport {
            problem: p.name.clone(),
            thresholds,
            table_at_rho0: table0,
        })));
    }

    // the (x, y) balls use |psi| <= M0 |s|^-3, valid for |s| >= rho0
    let near = shooting.s_minus.0.abs().min(shooting.s_plus_re.abs());
    if !(near >= thresholds.rho0) {
        return Err(Error::Threshold {
            gate: Gate::ShootingRadius,
            rho_lo: near,
            rho_hi: near,
            detail: format!(
                "shooting starts at |Re s| = {near} below rho0 = {}",
                thresholds.rho0
            ),
        });
    }
    let threads = cfg.threads.unwrap_or_else(thread_count);
    let delta = enclose_delta(p, &shooting, &cfg.integrator, table0.m0, threads)?;
    let rho = delta.rho_star_enc;
    if !(rho.lo() >= thresholds.rho0) {
        return Err(Error::Threshold {
            gate: Gate::ShootingRadius,
            rho_lo: rho.lo(),
            rho_hi: rho.hi(),
            detail: format!("rho* below rho0 = {}", thresholds.rho0),
        });
    }
    let table = verify_at(p, rho)?;
    let k0 = kappa0(p, rho, delta.delta_phi)?;
    let basic = theta_basic(&k0, table.mbar)?;
    let refined = if cfg.mode == Mode::Refine {
        Some(theta_refined(p, &table, &k0)?)
    } else {
        None
    };
    let parameters = serde_json::json!({
        "mode": cfg.mode,
        "scan_start": cfg.scan_start,
        "scan_factor": cfg.scan_factor,
        "max_iters": cfg.max_iters,
        "shooting": shooting,
        "integrator": cfg.integrator,
    });
    Ok(RunOutput::Certificate(Box::new(
        StokesCertificate::assemble(p, parameters, thresholds, &table, delta, k0, basic, refined),
    )))
}

fn oracle_report(p: &ProblemSpec, shooting: &ShootingConfig) -> Result<OracleReport> {
    let o = Oracle::new(p, OracleConfig::default());
    let re_s = shooting.s_plus_re;
    let rho = -shooting.s_minus.1;
    let delta = o.delta(re_s, rho)?;
    let theta_estimate = o.theta_estimate(re_s, &[rho, rho + 4.0, rho + 8.0, rho + 12.0])?;
    let theta_series = p.refinement.as_ref().map(|d| {
        let f = d.series_factor(Interval::point(delta.rho_star));
        let (fr, fi) = (f.re.mid(), f.im.mid());
        let (kr, ki) = delta.kappa0;
        (kr * fr - ki * fi, kr * fi + ki * fr)
    });
    Ok(OracleReport {
        rigor: "NON-RIGOROUS floating-point estimate",
        problem: p.name.clone(),
        delta,
        theta_estimate,
        theta_series,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Err(Error::InvalidInput("x".into()))), 1);
        assert_eq!(exit_code(&Err(Error::BolzanoFailure("x".into()))), 3);
        assert_eq!(exit_code(&Err(Error::NoCrossing { budget: 1.0 })), 4);
        assert_eq!(
            exit_code(&Err(Error::SearchExhausted {
                condition: Gate::Lipschitz,
                last_rho: 3.0
            })),
            3
        );
    }

    #[test]
    fn unknown_problem_rejected() {
        let r = run(&RunConfig::new("nope", Mode::Verify));
        assert!(matches!(r, Err(Error::InvalidInput(_))));
    }

    #[test]
    fn refine_needs_data() {
        let r = run(&RunConfig::new("example2", Mode::Refine));
        assert!(matches!(r, Err(Error::NotApplicable(_))));
        assert_eq!(exit_code(&r), 1);
    }

    #[test]
    fn thresholds_mode() {
        let r = run(&RunConfig::new("example1", Mode::Thresholds)).unwrap();
        let RunOutput::Thresholds(t) = r else {
            panic!()
        };
        assert!(t.thresholds.rho_star <= 9.79);
    }

    #[test]
    fn near_shooting_start_rejected() {
        let mut c = RunConfig::new("example1", Mode::Verify);
        c.shooting = Some(ShootingConfig::symmetric(3.0, 16.0, 1e-6));
        let r = run(&c);
        assert!(
            matches!(
                r,
                Err(Error::Threshold {
                    gate: Gate::ShootingRadius,
                    ..
                })
            ),
            "{r:?}"
        );
    }
}
