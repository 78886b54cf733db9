use criterion::{black_box, criterion_group, criterion_main, Criterion};
use num_complex::Complex64;
use stokes_core::flow::lohner::{LohnerSet, Stepper};
use stokes_core::flow::tape::Tape;
use stokes_core::flow::taylor::TaylorEngine;
use stokes_core::oracle::{Oracle, OracleConfig};
use stokes_core::{example1, Interval};

fn interval_ops(c: &mut Criterion) {
    let a = Interval::new(1.25, 1.5);
    let b = Interval::new(-0.75, 2.0);
    c.bench_function("interval mul+add+div", |bch| {
        bch.iter(|| black_box(a) * black_box(b) + black_box(a) / black_box(a))
    });
    c.bench_function("interval exp", |bch| bch.iter(|| black_box(a).exp()));
}

fn taylor(c: &mut Criterion) {
    let p = example1();
    let tape = Tape::record(&p.field);
    let o = Oracle::new(&p, OracleConfig::default());
    let x = o.asymptotic_start(Complex64::new(-1000.0, -16.0));
    let xi = x.map(Interval::point);
    let mut eng = TaylorEngine::<Interval>::new(&tape);
    c.bench_function("taylor coefficients order 20", |bch| {
        bch.iter(|| eng.coefficients(black_box(&xi), 20))
    });
    let mut stepper = Stepper::new(&tape, 20);
    let set = LohnerSet::from_box(&x.map(|v| Interval::new(v - 1e-9, v + 1e-9)));
    c.bench_function("lohner step order 20", |bch| {
        bch.iter(|| stepper.step(black_box(&set), 1.0, -1.0).is_ok())
    });
}

criterion_group!(benches, interval_ops, taylor);
criterion_main!(benches);
