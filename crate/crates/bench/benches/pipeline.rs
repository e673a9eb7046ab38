use criterion::{black_box, criterion_group, criterion_main, Criterion};

use cicy_core::ode::{self, ThetaOperator};
use cicy_core::schubert::{classify_cicy3, RankGuards};
use cicy_core::{bps, catalog, hibi, invariants, period, CicyInstance, DistributiveLattice};

const SIGMA_PF: &str = "121θ^4 - 77x(130θ^4+266θ^3+210θ^2+77θ+11) - x^2(32126θ^4+89990θ^3+103725θ^2+55253θ+11198) - x^3(28723θ^4+74184θ^3+63474θ^2+20625θ+1716) - 7x^4(1135θ^4+2336θ^3+1881θ^2+713θ+110) - 49x^5(θ+1)^4";

fn lattice(c: &mut Criterion) {
    let sigma = catalog::lookup("sigma").unwrap();
    let e7 = catalog::lookup("e7").unwrap();
    c.bench_function("sigma lattice and chains", |b| {
        b.iter(|| DistributiveLattice::new(black_box(&sigma)).unwrap().count_maximal_chains().unwrap())
    });
    c.bench_function("e7 lattice and chains", |b| {
        b.iter(|| DistributiveLattice::new(black_box(&e7)).unwrap().count_maximal_chains().unwrap())
    });
    c.bench_function("sigma lattice points k=6", |b| b.iter(|| hibi::lattice_points(black_box(&sigma), 6).unwrap()));
}

fn invariants(c: &mut Criterion) {
    let inst = CicyInstance::threefold(catalog::lookup("sigma").unwrap(), vec![1; 9]).unwrap();
    c.bench_function("sigma invariants", |b| b.iter(|| invariants::invariant_report(black_box(&inst)).unwrap()));
    let mut g = c.benchmark_group("slow");
    g.sample_size(10);
    g.bench_function("classification", |b| b.iter(|| classify_cicy3(RankGuards::default()).unwrap()));
    g.finish();
}

fn periods(c: &mut Criterion) {
    let sigma = catalog::lookup("sigma").unwrap();
    c.bench_function("sigma flow period 50 terms", |b| {
        b.iter(|| period::period_flow(black_box(&sigma), &[1; 9], 50).unwrap())
    });
    c.bench_function("sigma binomial period 8 terms", |b| {
        b.iter(|| period::period_binomial(black_box(&sigma), &[1; 9], 8).unwrap())
    });
    let s = period::period_flow(&sigma, &[1; 9], 50).unwrap();
    c.bench_function("sigma operator fit", |b| b.iter(|| ode::fit_operator(black_box(&s), 4, 5).unwrap()));
}

fn bps_numbers(c: &mut Criterion) {
    let op = ThetaOperator::parse("x", SIGMA_PF).unwrap();
    c.bench_function("sigma genus-0 numbers to degree 11", |b| {
        b.iter(|| bps::bps_from_operator(black_box(&op), 33, 11).unwrap())
    });
}

criterion_group!(benches, lattice, invariants, periods, bps_numbers);
criterion_main!(benches);
