use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use multiband_bench::{half_power, pap};
use multiband_core::separation::{build_flow_instance, min_cost_flow};
use multiband_core::{
    build_compact, check_robust, solve_compact, solve_cutting_planes, CompactOptions, CutLimits,
    LpSolver, SimplexSolver,
};
use std::hint::black_box;

fn separation(c: &mut Criterion) {
    let form = pap(1, 6.0);
    let x = half_power(&form);
    c.bench_function("flow/one_row", |b| {
        b.iter(|| {
            let net = build_flow_instance(0, &form.lp, &form.uncertainty, black_box(&x)).unwrap();
            min_cost_flow(&net).unwrap()
        })
    });
    c.bench_function("flow/all_rows", |b| {
        b.iter(|| check_robust(&form.lp, &form.uncertainty, black_box(&x)).unwrap())
    });
}

fn routes(c: &mut Criterion) {
    let mut group = c.benchmark_group("routes");
    group.sample_size(20);
    for density in [6.0, 15.0] {
        let form = pap(1, density);
        group.bench_with_input(BenchmarkId::new("compact", density), &form, |b, f| {
            b.iter(|| {
                let mut s = SimplexSolver::default();
                solve_compact(&f.lp, &f.uncertainty, &mut s, CompactOptions::default()).unwrap()
            })
        });
        group.bench_with_input(BenchmarkId::new("cuts", density), &form, |b, f| {
            b.iter(|| {
                let mut s = SimplexSolver::default();
                solve_cutting_planes(&f.lp, &f.uncertainty, &mut s, CutLimits::default()).unwrap()
            })
        });
    }
    group.finish();
}

fn simplex(c: &mut Criterion) {
    let form = pap(2, 6.0);
    let rlp = build_compact(&form.lp, &form.uncertainty, CompactOptions::default())
        .unwrap()
        .rlp;
    c.bench_function("simplex/compact_lp", |b| {
        b.iter(|| SimplexSolver::default().solve(black_box(&rlp)).unwrap())
    });
    c.bench_function("simplex/nominal_lp", |b| {
        b.iter(|| SimplexSolver::default().solve(black_box(&form.lp)).unwrap())
    });
}

criterion_group!(benches, separation, routes, simplex);
criterion_main!(benches);
