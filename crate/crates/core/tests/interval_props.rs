//! Randomized containment of the interval kernels against 256-bit reference
//! arithmetic, and monotonicity properties.

use astro_float::{BigFloat, Consts, RoundingMode};
use proptest::prelude::*;
use rand::{rngs::StdRng, Rng, SeedableRng};
use stokes_core::Interval;

const P: usize = 256;
const RM: RoundingMode = RoundingMode::ToEven;

fn big(x: f64) -> BigFloat {
    BigFloat::from_f64(x, P)
}

fn encloses(i: Interval, exact: &BigFloat) -> bool {
    big(i.lo()) <= *exact && *exact <= big(i.hi())
}

fn sample(rng: &mut StdRng) -> f64 {
    let m: f64 = rng.gen_range(-1.0..1.0);
    let e: i32 = rng.gen_range(-30..30);
    m * 2f64.powi(e)
}

fn point_in(rng: &mut StdRng, i: Interval) -> f64 {
    let t: f64 = rng.gen();
    (i.lo() + t * (i.hi() - i.lo())).clamp(i.lo(), i.hi())
}

fn random_interval(rng: &mut StdRng) -> Interval {
    let a = sample(rng);
    if rng.gen_bool(0.3) {
        return Interval::point(a);
    }
    let b = a + sample(rng).abs() * rng.gen_range(0.0..1e-3);
    Interval::new(a.min(b), a.max(b))
}

#[test]
fn arithmetic_containment_100k() {
    let mut rng = StdRng::seed_from_u64(7);
    let mut violations = 0usize;
    let n = 100_000;
    for _ in 0..n {
        let (x, y) = (random_interval(&mut rng), random_interval(&mut rng));
        let (a, b) = (point_in(&mut rng, x), point_in(&mut rng, y));
        let (ba, bb) = (big(a), big(b));
        let checks = [
            (x + y, ba.add(&bb, P, RM)),
            (x - y, ba.sub(&bb, P, RM)),
            (x * y, ba.mul(&bb, P, RM)),
            (x.sqr(), ba.mul(&ba, P, RM)),
        ];
        for (i, e) in checks {
            if !encloses(i, &e) {
                violations += 1;
            }
        }
        if !y.contains_zero() && !encloses(x / y, &ba.div(&bb, P, RM)) {
            violations += 1;
        }
    }
    assert_eq!(violations, 0);
}

#[test]
fn elementary_containment() {
    let mut rng = StdRng::seed_from_u64(11);
    let mut cc = Consts::new().expect("constants");
    let mut violations = 0usize;
    for _ in 0..20_000 {
        let x: f64 = rng.gen_range(-30.0..30.0);
        let w: f64 = rng.gen_range(0.0..1e-6);
        let i = Interval::new(x, x + w);
        let a = point_in(&mut rng, i);
        let ba = big(a);
        if !encloses(i.exp(), &ba.exp(P, RM, &mut cc)) {
            violations += 1;
        }
        let s = i.sin().unwrap();
        if !encloses(s, &ba.sin(P, RM, &mut cc)) {
            violations += 1;
        }
        let c = i.cos().unwrap();
        if !encloses(c, &ba.cos(P, RM, &mut cc)) {
            violations += 1;
        }
        let pos = Interval::new(x.abs() + 1e-3, x.abs() + 1e-3 + w);
        let b = big(point_in(&mut rng, pos));
        if !encloses(pos.ln().unwrap(), &b.ln(P, RM, &mut cc)) {
            violations += 1;
        }
        if !encloses(pos.sqrt().unwrap(), &b.sqrt(P, RM)) {
            violations += 1;
        }
    }
    assert_eq!(violations, 0);
}

#[test]
fn pi_is_enclosed() {
    let mut cc = Consts::new().expect("constants");
    let pi = cc.pi(P, RM);
    assert!(encloses(Interval::pi(), &pi));
    assert!(Interval::pi().width() <= 2.0 * f64::EPSILON * 4.0);
}

proptest! {
    #[test]
    fn inclusion_monotone(a in -1e6f64..1e6, w1 in 0f64..1.0, w2 in 0f64..1.0, b in -1e6f64..1e6, w3 in 0f64..1.0) {
        let small = Interval::new(a, a + w1);
        let big_i = Interval::new(a - w2, a + w1 + w2);
        let y = Interval::new(b, b + w3);
        prop_assert!((small + y).subset_of(&(big_i + y)));
        prop_assert!((small - y).subset_of(&(big_i - y)));
        prop_assert!((small * y).subset_of(&(big_i * y)));
        prop_assert!(small.sqr().subset_of(&big_i.sqr()));
        if !y.contains_zero() {
            prop_assert!((small / y).subset_of(&(big_i / y)));
        }
        prop_assert!(small.exp().subset_of(&big_i.exp()) || a > 700.0);
    }

    #[test]
    fn point_results_contain_float_result(a in -1e3f64..1e3, b in -1e3f64..1e3) {
        let (x, y) = (Interval::point(a), Interval::point(b));
        prop_assert!((x + y).contains(a + b));
        prop_assert!((x * y).contains(a * b));
        prop_assert!((x - y).contains(a - b));
        if b != 0.0 {
            prop_assert!((x / y).contains(a / b));
        }
    }
}
