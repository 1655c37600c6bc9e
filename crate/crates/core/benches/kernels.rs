//! Parallel against sequential execution of the heavier kernels.

use ccalg::trb::{check_trb, cohomology, twisted_delta, Route};
use ccalg::{fixtures, gen, par};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn modes() -> [(&'static str, bool); 2] {
    [("parallel", false), ("sequential", true)]
}

fn bench_cohomology(c: &mut Criterion) {
    let fx = fixtures::fix_a();
    let mut group = c.benchmark_group("cohomology_fix_a_deg2_trunc2");
    group.sample_size(10);
    for (name, seq) in modes() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            par::set_sequential(seq);
            b.iter(|| cohomology(&fx.frame, &fx.r, 2, 2, Route::TwistedDelta).unwrap());
        });
    }
    par::set_sequential(false);
    group.finish();
}

fn bench_twisted_delta(c: &mut Criterion) {
    let mut rng = gen::rng(17);
    let (frame, r) = gen::trb_instance(&mut rng, 3, 2).unwrap();
    let g = gen::u_cochain(&mut rng, &frame, 2, 2);
    let mut group = c.benchmark_group("twisted_delta_rank3_arity2");
    for (name, seq) in modes() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            par::set_sequential(seq);
            b.iter(|| twisted_delta(&frame, &r, &g).unwrap());
        });
    }
    par::set_sequential(false);
    group.finish();
}

fn bench_check_trb(c: &mut Criterion) {
    let mut rng = gen::rng(29);
    let (frame, r) = gen::trb_instance(&mut rng, 3, 3).unwrap();
    let mut group = c.benchmark_group("check_trb_rank3");
    for (name, seq) in modes() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            par::set_sequential(seq);
            b.iter(|| check_trb(&frame, &r).unwrap());
        });
    }
    par::set_sequential(false);
    group.finish();
}

criterion_group!(benches, bench_cohomology, bench_twisted_delta, bench_check_trb);
criterion_main!(benches);
