//! Parallel against single-threaded execution of the two heaviest stages.
//! Build with `--no-default-features` to time the purely sequential fallback.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use gaudin_core::config::Config;
use gaudin_core::gln::Partition;
use gaudin_core::io::Instance;
use gaudin_core::par;
use gaudin_core::pipeline::{verify_bijection, weight_function_checks, Seeds};

const FOUR_POINTS: &str = r#"{"N":2,"factors":[{"partition":[1],"b":"0"},{"partition":[1],"b":"1"},
    {"partition":[1],"b":"3"},{"partition":[1],"b":"7"}],"weight":[2,2]}"#;

fn threads() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn bench_points(c: &mut Criterion) {
    let cfg = Config::with_precision(256);
    let lambdas = [Partition::new(&[2, 1], 3).unwrap(), Partition::new(&[2, 2], 2).unwrap()];
    let mut g = c.benchmark_group("weight_function_checks");
    g.sample_size(10);
    g.bench_function("parallel", |b| {
        b.iter(|| par::with_threads(threads(), || weight_function_checks(black_box(&lambdas), 8, 5, &cfg).unwrap()))
    });
    g.bench_function("sequential", |b| {
        b.iter(|| par::with_threads(1, || weight_function_checks(black_box(&lambdas), 8, 5, &cfg).unwrap()))
    });
    g.finish();
}

fn bench_verify(c: &mut Criterion) {
    let cfg = Config::with_precision(256);
    let inst = Instance::parse(FOUR_POINTS).unwrap();
    let seeds = Seeds::from_base(1);
    let mut g = c.benchmark_group("verify_bijection");
    g.sample_size(10);
    g.bench_function("parallel", |b| {
        b.iter(|| par::with_threads(threads(), || verify_bijection(black_box(&inst), &seeds, &cfg).unwrap()))
    });
    g.bench_function("sequential", |b| {
        b.iter(|| par::with_threads(1, || verify_bijection(black_box(&inst), &seeds, &cfg).unwrap()))
    });
    g.finish();
}

criterion_group!(benches, bench_points, bench_verify);
criterion_main!(benches);
