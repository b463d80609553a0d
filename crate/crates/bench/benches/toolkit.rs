//! Criterion benchmarks for the hot paths: sieve construction, exact dyadic
//! logs, the identity sweeps, and the scanners. Sample counts are kept small
//! because several targets are whole-range sweeps rather than microkernels.

use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use psum_core::conjecture::{self, LogFactorial, WindowScanner};
use psum_core::{dyadic, identity, prime, upsilon, FactorSieve, PrimeTable};

fn table(limit: u64) -> PrimeTable {
    PrimeTable::build(limit).expect("sieve builds")
}

fn bench_sieves(c: &mut Criterion) {
    let mut g = c.benchmark_group("sieve");
    g.sample_size(10).measurement_time(Duration::from_secs(8));
    g.bench_function(BenchmarkId::new("prime_table", 1_000_000u64), |b| {
        b.iter(|| table(black_box(1_000_000)))
    });
    g.bench_function(BenchmarkId::new("factor_sieve", 1_000_000u64), |b| {
        b.iter(|| FactorSieve::build(black_box(1_000_000)).expect("sieve builds"))
    });
    g.finish();
}

fn bench_queries(c: &mut Criterion) {
    let t = table(1_000_000);
    let mut g = c.benchmark_group("query");
    g.bench_function("theta", |b| {
        b.iter(|| t.theta(black_box(999_983)).expect("in range"))
    });
    g.bench_function("pi", |b| {
        b.iter(|| t.pi(black_box(999_983)).expect("in range"))
    });
    g.bench_function("dyadic_floor", |b| {
        b.iter(|| dyadic::dyadic_floor(black_box(999_999_999_999), black_box(7)).expect("domain"))
    });
    g.bench_function("dyadic_log", |b| {
        b.iter(|| dyadic::dyadic_log(black_box(999_999_999_999), black_box(7)).expect("domain"))
    });
    g.finish();
}

fn bench_identity_sweeps(c: &mut Criterion) {
    let t = table(1_000_000);
    let sieve = FactorSieve::build(1_000_000).expect("sieve builds");
    let mut g = c.benchmark_group("identity");
    g.sample_size(10).measurement_time(Duration::from_secs(8));
    g.bench_function(BenchmarkId::new("parity_walk", 1_000_000u64), |b| {
        b.iter(|| identity::sum_dyadic_floor_over_odd(black_box(1_000_000)).expect("domain"))
    });
    g.bench_function(BenchmarkId::new("semiprime_count", 10_000u64), |b| {
        b.iter(|| prime::odd_semiprime_count(black_box(10_000), &t).expect("domain"))
    });
    g.bench_function(BenchmarkId::new("frac_sum_over_primes", 10_000u64), |b| {
        b.iter(|| identity::frac_sum_over_primes(black_box(10_000), &t).expect("domain"))
    });
    g.bench_function(BenchmarkId::new("floor_sum_nonprimes", 10_000u64), |b| {
        b.iter(|| identity::floor_sum_over_odd_nonprimes(black_box(10_000), &sieve).expect("domain"))
    });
    g.bench_function(BenchmarkId::new("pi_reconstruction", 10_000u64), |b| {
        b.iter(|| {
            identity::verify_pi_reconstruction(
                black_box(10_000),
                &t,
                &sieve,
                identity::ParityVariant::Statement,
            )
            .expect("domain")
        })
    });
    g.finish();
}

fn bench_upsilon(c: &mut Criterion) {
    let t = table(1_000_000);
    let sieve = FactorSieve::build(100_000).expect("sieve builds");
    let mut g = c.benchmark_group("upsilon");
    g.sample_size(10).measurement_time(Duration::from_secs(8));
    g.bench_function(BenchmarkId::new("summarize", 100_000u64), |b| {
        b.iter(|| upsilon::summarize(black_box(100_000), &t, &sieve).expect("domain"))
    });
    g.finish();
}

fn bench_scanners(c: &mut Criterion) {
    let t = table(1_000_000);
    let mut g = c.benchmark_group("scan");
    g.bench_function(BenchmarkId::new("collision", 10_000u64), |b| {
        b.iter(|| conjecture::find_collision(black_box(10_000), &t).expect("domain"))
    });
    g.bench_function(BenchmarkId::new("goldbach", 100_000u64), |b| {
        b.iter(|| conjecture::goldbach_congruence(black_box(100_000), &t).expect("domain"))
    });
    g.bench_function(BenchmarkId::new("window_scan", 1_000u64), |b| {
        let mut scanner = WindowScanner::new(&t);
        b.iter(|| scanner.scan(black_box(1_000)).expect("domain"))
    });
    g.sample_size(10).measurement_time(Duration::from_secs(8));
    g.bench_function(BenchmarkId::new("log_factorial_extend", 100_000u64), |b| {
        b.iter(|| {
            let mut lf = LogFactorial::new();
            lf.extend_to(black_box(100_000))
        })
    });
    g.finish();
}

criterion_group!(
    benches,
    bench_sieves,
    bench_queries,
    bench_identity_sweeps,
    bench_upsilon,
    bench_scanners
);
criterion_main!(benches);
