//! Benchmarks for the hot kernels: exact Krawtchouk construction, the
//! fast Walsh transform, transition-matrix builds in both arithmetic
//! modes, the absorbing-chain pipeline, the optimal-rate search, and the
//! MAX-SAT subset expansion.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use flipdist::bitspace::BitString;
use flipdist::maxsat::{maxsat_f, Clause, ClauseSet, SubsetBudget};
use flipdist::mutation::build_f_enumerative;
use flipdist::onemax::varpi;
use flipdist::runtime::{
    onemax_expected_runtime_exact, onemax_expected_runtime_f64, optimal_p, varpi_stable_f64,
};
use flipdist::walsh::{transform, FunctionTable};
use flipdist::{BigRational, KrawtchoukMatrix};
use num_bigint::BigInt;
use std::hint::black_box;

fn bench_krawtchouk(c: &mut Criterion) {
    c.bench_function("krawtchouk_build_64", |b| {
        b.iter(|| KrawtchoukMatrix::build(black_box(64)))
    });
    c.bench_function("krawtchouk_build_128", |b| {
        b.iter(|| KrawtchoukMatrix::build(black_box(128)))
    });
}

fn bench_walsh(c: &mut Criterion) {
    let f = FunctionTable::from_fn(16, |x| (x.to_index() % 37) as f64 - 18.0).unwrap();
    c.bench_function("walsh_transform_2^16_f64", |b| b.iter(|| transform(black_box(&f))));

    let table = FunctionTable::from_fn(10, |x| {
        BigRational::from_integer(BigInt::from((x.to_index() % 11) as i64))
    })
    .unwrap();
    let x = BitString::from_index(0b1010110101, 10);
    c.bench_function("f_matrix_enumerative_n10_m4_exact", |b| {
        b.iter(|| build_f_enumerative(black_box(&table), 4, black_box(&x)).unwrap())
    });
}

fn bench_varpi(c: &mut Criterion) {
    let p = BigRational::new(BigInt::from(3), BigInt::from(10));
    c.bench_function("varpi_exact_n32", |b| {
        b.iter(|| varpi(black_box(32), black_box(&p)).unwrap())
    });
    c.bench_function("varpi_stable_f64_n100", |b| {
        b.iter(|| varpi_stable_f64(black_box(100), black_box(0.0117)).unwrap())
    });
}

fn bench_runtime(c: &mut Criterion) {
    c.bench_function("runtime_f64_n100", |b| {
        b.iter(|| onemax_expected_runtime_f64(black_box(100), 1, black_box(0.0117)).unwrap())
    });
    let p = BigRational::new(BigInt::from(1), BigInt::from(100));
    c.bench_function("runtime_exact_n100_p_1_over_100", |b| {
        b.iter_batched(
            || p.clone(),
            |p| onemax_expected_runtime_exact(black_box(100), 1, &p).unwrap(),
            BatchSize::SmallInput,
        )
    });
    let mut group = c.benchmark_group("search");
    group.sample_size(10);
    group.bench_function("optimal_p_n50", |b| {
        b.iter(|| optimal_p(black_box(50), 1).unwrap())
    });
    group.finish();
}

fn bench_maxsat(c: &mut Criterion) {
    let n = 12usize;
    let clauses: Vec<Clause> = (0..20)
        .map(|i| {
            let a = 1 + (i * 5) % n;
            let b = 1 + (i * 7 + 2) % n;
            let d = 1 + (i * 11 + 4) % n;
            let literals = [
                if i % 2 == 0 { a as i32 } else { -(a as i32) },
                if i % 3 == 0 { b as i32 } else { -(b as i32) },
                d as i32,
            ];
            Clause::from_literals(n, &literals).unwrap()
        })
        .collect();
    let cs = ClauseSet::new(n, clauses).unwrap();
    let x = BitString::from_index(0b101101001011, n);
    let budget = SubsetBudget::default();
    c.bench_function("maxsat_f_n12_c20_m3_f64", |b| {
        b.iter(|| maxsat_f::<f64>(black_box(&cs), black_box(&x), 3, &budget).unwrap())
    });
}

criterion_group!(
    benches,
    bench_krawtchouk,
    bench_walsh,
    bench_varpi,
    bench_runtime,
    bench_maxsat
);
criterion_main!(benches);
