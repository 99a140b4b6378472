use std::collections::BTreeSet;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use stonekernel::dsl::Program;
use stonekernel::gen::{self, LiftStyle};
use stonekernel::rational::ratio;
use stonekernel::{bker, proker, sample, InverseSystem, ProKernel};

fn finite_composition(c: &mut Criterion) {
    let mut group = c.benchmark_group("finker_then");
    for n in [4usize, 16, 32] {
        let mut rng = gen::rng(n as u64);
        let f = gen::random_kernel(&mut rng, n, n);
        let g = gen::random_kernel(&mut rng, n, n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| black_box(&f).then(black_box(&g)).unwrap())
        });
    }
    group.finish();
}

fn determinism_enumeration(c: &mut Criterion) {
    c.bench_function("enumerate_kernels_3x3_den4", |b| {
        b.iter(|| {
            gen::enumerate_kernels(3, 3, 4)
                .iter()
                .filter(|k| k.satisfies_copy_equation())
                .count()
        })
    });
}

fn pro_equality(c: &mut Criterion) {
    let mut group = c.benchmark_group("proker_equal_at_depth");
    group.sample_size(20);
    for depth in [2usize, 4, 6] {
        group.bench_with_input(BenchmarkId::from_parameter(depth), &depth, |b, &d| {
            b.iter(|| {
                // fresh kernels each time so level memos start empty
                let mut rng = gen::rng(1);
                let x = gen::random_system(&mut rng, d + 4, 3);
                let y = gen::random_system(&mut rng, d + 4, 3);
                let f = gen::random_prokernel(&mut rng, &x, &y, d + 3, LiftStyle::Random).unwrap();
                let lhs = ProKernel::copy(&x).then(&f.tensor(&f)).unwrap();
                let rhs = f.then(&ProKernel::copy(&y)).unwrap();
                proker::equal_at_depth(&lhs, &rhs, d).unwrap()
            })
        });
    }
    group.finish();
}

fn conditionals(c: &mut Criterion) {
    let mut group = c.benchmark_group("conditional_reconstruction");
    group.sample_size(20);
    group.bench_function("y3_depth6", |b| {
        b.iter(|| {
            let mut rng = gen::rng(5);
            let (y, l) = (InverseSystem::constant(3), InverseSystem::binary_prefix());
            let p = gen::random_state(
                &mut rng,
                &InverseSystem::pair(&y, &l),
                6,
                &BTreeSet::from([1]),
            )
            .unwrap();
            let k = proker::conditional(&p, &y, &l).unwrap();
            let m = proker::first_marginal(&p, &y, &l).unwrap();
            proker::equal_at_depth(&proker::recompose(&m, &k).unwrap(), &p, 6).unwrap()
        })
    });
    group.finish();
}

fn duality(c: &mut Criterion) {
    let mut rng = gen::rng(9);
    let k = gen::random_kernel(&mut rng, 5, 5);
    c.bench_function("duality_round_trip_5x5", |b| {
        b.iter(|| bker::to_finkernel(&bker::bker_from_finkernel(black_box(&k))).unwrap())
    });
}

fn sampling(c: &mut Criterion) {
    let program = Program::parse(
        "[objects]\nS = { family = \"binary_prefix\" }\n[kernels]\nc = { cod = \"S\", coin = \"1/2\" }\n",
    )
    .unwrap();
    let state = program.lookup("c").unwrap();
    let biased = ProKernel::coin_stream(ratio(1, 3)).unwrap();
    let mut group = c.benchmark_group("sample_10k");
    group.sample_size(10);
    group.bench_function("fair_depth3", |b| {
        b.iter(|| sample::sample(&state, 3, 7, 10_000).unwrap())
    });
    group.bench_function("biased_depth8", |b| {
        b.iter(|| sample::sample(&biased, 8, 7, 10_000).unwrap())
    });
    group.finish();
}

criterion_group!(
    benches,
    finite_composition,
    determinism_enumeration,
    pro_equality,
    conditionals,
    duality,
    sampling
);
criterion_main!(benches);
