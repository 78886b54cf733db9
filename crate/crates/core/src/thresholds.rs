//! Search for validated radius thresholds.

use serde::Serialize;

use crate::bounds::{c0_bound, contraction_a, gate_error, lipschitz, m_matrix, ConstantTable};
use crate::error::{Error, Gate, Result};
use crate::interval::Interval;
use crate::problem::ProblemSpec;

const BISECTION_TOL: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RhoThresholds {
    pub rho1: f64,
    pub rho2: f64,
    pub rho_star: f64,
    pub rho0: f64,
}

fn first_iterate_ok(p: &ProblemSpec, rho: f64) -> bool {
    c0_bound(p, Interval::point(rho)).is_ok()
}

fn denominators_ok(p: &ProblemSpec, rho: f64) -> bool {
    first_iterate_ok(p, rho) && m_matrix(p, Interval::point(rho)).is_ok()
}

fn lipschitz_ok(p: &ProblemSpec, rho: f64) -> bool {
    denominators_ok(p, rho)
        && matches!(lipschitz(p, Interval::point(rho)), Ok((_, _, l)) if l.hi() <= 0.5)
}

fn contraction_ok(p: &ProblemSpec, rho: f64) -> bool {
    lipschitz_ok(p, rho)
        && matches!(contraction_a(p, Interval::point(rho)), Ok((_, _, a)) if a.hi() < 0.5)
}

/// First grid point `>= from` (geometric grid from `from`) where `cond` holds,
/// refined by bisection against the last failing grid point.
fn scan(
    from: f64,
    factor: f64,
    max_iters: usize,
    gate: Gate,
    cond: impl Fn(f64) -> bool,
) -> Result<f64> {
    let mut prev: Option<f64> = None;
    let mut rho = from;
    for _ in 0..max_iters {
        if cond(rho) {
            let Some(mut fail) = prev else {
                return Ok(rho);
            };
            let mut pass = rho;
            while pass - fail > BISECTION_TOL {
                let mid = 0.5 * (fail + pass);
                if cond(mid) {
                    pass = mid;
                } else {
                    fail = mid;
                }
            }
            debug_assert!(cond(pass));
            return Ok(pass);
        }
        prev = Some(rho);
        rho *= factor;
    }
    Err(Error::SearchExhausted {
        condition: gate,
        last_rho: prev.unwrap_or(from),
    })
}

pub fn find_thresholds(
    p: &ProblemSpec,
    scan_start: f64,
    scan_factor: f64,
    max_iters: usize,
) -> Result<RhoThresholds> {
    p.ledger.validate()?;
    let floor = p.ledger.c_h0_bar.max(2.0);
    if !(scan_start > floor) || !scan_start.is_finite() {
        return Err(Error::InvalidInput(format!(
            "scan start {scan_start} must exceed {floor}"
        )));
    }
    if !(scan_factor > 1.0) || !scan_factor.is_finite() {
        return Err(Error::InvalidInput("scan factor must exceed 1".into()));
    }
    let rho1 = scan(
        scan_start,
        scan_factor,
        max_iters,
        Gate::FirstIterate,
        |r| first_iterate_ok(p, r),
    )?;
    let rho2 = scan(
        rho1,
        scan_factor,
        max_iters,
        Gate::DerivativeDenominator,
        |r| denominators_ok(p, r),
    )?;
    let rho_star = scan(rho2, scan_factor, max_iters, Gate::Lipschitz, |r| {
        lipschitz_ok(p, r)
    })?;
    let rho0 = scan(rho_star, scan_factor, max_iters, Gate::Contraction, |r| {
        contraction_ok(p, r)
    })?;
    Ok(RhoThresholds {
        rho1,
        rho2,
        rho_star,
        rho0,
    })
}

/// Full table at `rho` with every gate re-checked.
pub fn verify_at(p: &ProblemSpec, rho: Interval) -> Result<ConstantTable> {
    p.ledger.validate()?;
    let t = ConstantTable::compute(p, rho)?;
    if !(t.l.hi() <= 0.5) {
        return Err(gate_error(Gate::Lipschitz, rho, format!("L = {}", t.l)));
    }
    if !(t.a.hi() < 0.5) {
        return Err(gate_error(Gate::Contraction, rho, format!("A = {}", t.a)));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{example1, example2, LedgerInputs};

    #[test]
    fn examples_reach_rho_star_below_979() {
        for p in [example1(), example2()] {
            let t = find_thresholds(&p, 2.5, 1.25, 60).unwrap();
            assert!(t.rho_star <= 9.79, "{t:?}");
            assert!(
                2.0 < t.rho1 && t.rho1 <= t.rho2 && t.rho2 <= t.rho_star && t.rho_star <= t.rho0
            );
            assert!(verify_at(&p, Interval::point(t.rho0)).is_ok());
        }
    }

    #[test]
    fn zero_ledger_collapses() {
        let p = ProblemSpec {
            ledger: LedgerInputs::zero(),
            ..example1()
        };
        let t = find_thresholds(&p, 3.0, 1.5, 10).unwrap();
        assert_eq!((t.rho1, t.rho2, t.rho_star, t.rho0), (3.0, 3.0, 3.0, 3.0));
        assert!(verify_at(&p, Interval::point(2.5)).is_ok());
    }

    #[test]
    fn gate_fails_at_five() {
        match verify_at(&example1(), Interval::point(5.0)) {
            Err(Error::Threshold { gate, .. }) => assert_eq!(gate, Gate::Lipschitz),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn exhausted_search() {
        let e = find_thresholds(&example1(), 2.5, 1.01, 3).unwrap_err();
        assert!(matches!(e, Error::SearchExhausted { .. }));
    }

    #[test]
    fn reference_radius_table() {
        let t = verify_at(&example1(), Interval::new(15.99999965, 16.00000035)).unwrap();
        assert!(t.a1.intersects(&Interval::new(0.010155523, 0.010155525)));
    }
}
