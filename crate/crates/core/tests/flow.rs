//! Rigorous transport checked against the floating-point oracle on short
//! transports (|Re s| = 40).

use num_complex::Complex64;
use stokes_core::flow::{poincare_minus, poincare_plus, Direction, IntegratorConfig, SectionHit};
use stokes_core::oracle::{Oracle, OracleConfig};
use stokes_core::{example1, example2, Interval, ProblemSpec, StateBox};

fn start_box(o: &Oracle, s: Complex64, r: f64, s2_half: f64) -> StateBox {
    let c = o.asymptotic_start(s);
    let mut b = c.map(|v| Interval::new(v - r, v + r));
    b[4] = Interval::point(s.re);
    b[5] = Interval::new(s.im - s2_half, s.im + s2_half);
    StateBox::from_array(b)
}

fn corners(b: &StateBox) -> Vec<[f64; 6]> {
    let a = b.to_array();
    let mut out = Vec::new();
    for mask in 0..64u32 {
        out.push(std::array::from_fn(|i| {
            if mask >> i & 1 == 1 {
                a[i].hi()
            } else {
                a[i].lo()
            }
        }));
    }
    out.push(a.map(|c| c.mid()));
    out
}

fn contains(hit: &SectionHit, x: &[f64; 6]) -> bool {
    let s = hit.state.to_array();
    (0..6).all(|i| i == 4 || s[i].inflate(1e-15 * s[i].mag()).contains(x[i]))
}

fn check_oracle_inside(p: &ProblemSpec, b: &StateBox, dir: Direction, hit: &SectionHit) {
    let o = Oracle::new(p, OracleConfig::default());
    for x in corners(b) {
        let (y, t) = o.to_section(x, dir).unwrap();
        assert!(
            contains(hit, &y),
            "oracle hit {y:?} outside {:?}",
            hit.state
        );
        assert!(hit.time_enclosure.inflate(1e-12).contains(t));
    }
}

#[test]
fn forward_transport_contains_oracle() {
    for p in [example1(), example2()] {
        let o = Oracle::new(&p, OracleConfig::default());
        let b = start_box(&o, Complex64::new(-40.0, -10.0), 1e-9, 0.0);
        let hit = poincare_minus(&p, &b, &IntegratorConfig::default()).unwrap();
        assert_eq!(hit.state.s1, Interval::ZERO);
        assert!(hit.transversality.lo() > 0.0);
        assert!(hit.state.to_array().iter().all(|c| c.width() < 1e-6));
        check_oracle_inside(&p, &b, Direction::Forward, &hit);
    }
}

#[test]
fn subdivided_segment_covers() {
    let p = example1();
    let o = Oracle::new(&p, OracleConfig::default());
    let whole = start_box(&o, Complex64::new(40.0, -10.0), 1e-9, 1e-6);
    let cfg = IntegratorConfig::default();
    let hit = poincare_plus(&p, &whole, &cfg).unwrap();
    check_oracle_inside(&p, &whole, Direction::Backward, &hit);
    let s2 = whole.s2;
    for (lo, hi) in [(s2.lo(), s2.mid()), (s2.mid(), s2.hi())] {
        let piece = StateBox {
            s2: Interval::new(lo, hi),
            ..whole
        };
        let h = poincare_plus(&p, &piece, &cfg).unwrap();
        check_oracle_inside(&p, &piece, Direction::Backward, &h);
        let (a, b) = (h.state.to_array(), hit.state.to_array());
        assert!((0..6).all(|i| a[i].intersects(&b[i])));
    }
}

#[test]
fn order_robustness() {
    let p = example2();
    let o = Oracle::new(&p, OracleConfig::default());
    let b = start_box(&o, Complex64::new(-40.0, -10.0), 1e-9, 0.0);
    let hits: Vec<SectionHit> = [15, 25]
        .into_iter()
        .map(|order| {
            let cfg = IntegratorConfig {
                order,
                ..IntegratorConfig::default()
            };
            poincare_minus(&p, &b, &cfg).unwrap()
        })
        .collect();
    let (a, c) = (hits[0].state.to_array(), hits[1].state.to_array());
    for i in 0..6 {
        assert!(
            a[i].intersects(&c[i]),
            "component {i}: {} vs {}",
            a[i],
            c[i]
        );
    }
    for h in &hits {
        check_oracle_inside(&p, &b, Direction::Forward, h);
    }
}

#[test]
fn time_reversal_meets_same_point() {
    let p = example1();
    let o = Oracle::new(&p, OracleConfig::default());
    let x0 = o.asymptotic_start(Complex64::new(-40.0, -10.0));
    let (_, t) = o.to_section(x0, Direction::Forward).unwrap();
    // a point past the section on the same trajectory, then back
    let x1 = o.flow_for(x0, t + 5.0);
    assert!(x1[4] > 0.0);
    let pt = |x: [f64; 6]| StateBox::from_array(x.map(Interval::point));
    let cfg = IntegratorConfig::default();
    let fwd = poincare_minus(&p, &pt(x0), &cfg).unwrap();
    let bwd = poincare_plus(&p, &pt(x1), &cfg).unwrap();
    let (a, b) = (fwd.state.to_array(), bwd.state.to_array());
    for i in 0..6 {
        assert!(
            a[i].inflate(1e-13).intersects(&b[i]),
            "component {i}: {} vs {}",
            a[i],
            b[i]
        );
    }
}

#[test]
fn rejects_start_on_wrong_side() {
    let p = example1();
    let b = StateBox::from_array([
        Interval::ZERO,
        Interval::ZERO,
        Interval::ZERO,
        Interval::ZERO,
        Interval::point(5.0),
        Interval::point(-10.0),
    ]);
    assert!(poincare_minus(&p, &b, &IntegratorConfig::default()).is_err());
}
