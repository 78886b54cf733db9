use rand::{rngs::StdRng, Rng, SeedableRng};
use stokes_core::bounds::{b_constant, c_constant, m0_bound};
use stokes_core::problem::eval_field;
use stokes_core::thresholds::{find_thresholds, verify_at};
use stokes_core::{example1, example2, Interval, StateBox};

/// Rigorous enclosure of `int_0^inf (t^2+1)^{-m/2} dt`: lower and upper
/// Riemann sums of the decreasing integrand on `[0, T]` plus the tail
/// `0 <= int_T^inf <= T^{1-m}/(m-1)`.
fn quadrature(m: u32) -> Interval {
    let (t_end, n) = (64.0, 40_000u32);
    let h = Interval::point(t_end / n as f64);
    let f = |t: Interval| {
        (t.sqr() + Interval::ONE)
            .sqrt()
            .unwrap()
            .powi(m)
            .recip()
            .unwrap()
    };
    let (mut lo, mut hi) = (Interval::ZERO, Interval::ZERO);
    for k in 0..n {
        let a = Interval::point(k as f64) * h;
        let b = Interval::point((k + 1) as f64) * h;
        lo += f(b) * h;
        hi += f(a) * h;
    }
    let tail =
        Interval::point(t_end).powi(m - 1).recip().unwrap() / Interval::point((m - 1) as f64);
    Interval::new(lo.lo(), (hi + tail).hi())
}

#[test]
fn b_constant_matches_quadrature() {
    for m in 3..=12 {
        let b = b_constant(m).unwrap();
        let q = quadrature(m);
        assert!(b.subset_of(&q), "m = {m}: {b} not in {q}");
        assert!(q.width() < 1e-2, "{q}");
    }
}

#[test]
fn b_constant_recurrence() {
    for m in 3..=12 {
        let lhs = b_constant(m + 2).unwrap();
        let rhs =
            Interval::point((m - 1) as f64) / Interval::point(m as f64) * b_constant(m).unwrap();
        assert!(lhs.intersects(&rhs), "m = {m}");
        assert!(lhs.width() < 1e-14);
    }
}

#[test]
fn ledger_regression() {
    let b8 = b_constant(8).unwrap();
    assert!(b8.contains(5.0 * std::f64::consts::PI / 32.0));
    let r = c_constant(7, Interval::ONE).unwrap() / b8;
    assert!(r.intersects(&Interval::new(9.7885, 9.7905)), "{r}");
    for p in [example1(), example2()] {
        let m0 = m0_bound(&p, Interval::point(20.0)).unwrap();
        assert!(m0.contains(22.0 / 3.0) && m0.width() < 1e-14);
    }
}

#[test]
fn lipschitz_threshold_brackets() {
    for p in [example1(), example2()] {
        assert!(verify_at(&p, Interval::point(9.79)).is_ok());
        assert!(verify_at(&p, Interval::point(5.0)).is_err());
        let t = find_thresholds(&p, 2.5, 1.25, 60).unwrap();
        assert!(t.rho_star <= 9.79 && t.rho_star > 5.0, "{t:?}");
    }
}

#[test]
fn field_enclosure_contains_float_field() {
    let mut rng = StdRng::seed_from_u64(3);
    for p in [example1(), example2()] {
        for _ in 0..1000 {
            let x: [f64; 6] = [
                rng.gen_range(-1e-3..1e-3),
                rng.gen_range(-1e-3..1e-3),
                rng.gen_range(-1e-3..1e-3),
                rng.gen_range(-1e-3..1e-3),
                rng.gen_range(-50.0..50.0),
                rng.gen_range(-40.0..-5.0),
            ];
            let w: f64 = rng.gen_range(0.0..1e-8);
            let b = StateBox::from_array(x.map(|v| Interval::new(v, v + w)));
            let enc = eval_field(&p, &b).unwrap();
            let f = p.field.eval(&x);
            for i in 0..6 {
                assert!(enc.as_slice()[i].contains(f[i]), "component {i}");
            }
        }
    }
}
