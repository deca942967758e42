//! Sequential vs rayon-parallel execution of the data-parallel kernels.
//!
//! Run with `cargo bench -p shortvar`. Building with
//! `--no-default-features` compiles the parallel variant down to the
//! sequential one, which gives a second baseline.

use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use shortvar::experiments::{character_variance, dense_weights, interval_sums};
use shortvar::gf::make_field;
use shortvar::polyring::irreducible_indices;
use shortvar::reps::{legendre_rep, trivial_rep, Representation};
use shortvar::{rmt, Exec};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn sieve(c: &mut Criterion) {
    let mut g = c.benchmark_group("irreducible_sieve_q3_d11");
    for (name, ex) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            // a fresh field per iteration bypasses the per-field cache
            b.iter(|| irreducible_indices(&make_field(3, 1).unwrap(), 11, ex).unwrap().len())
        });
    }
    g.finish();
}

fn legendre_bulk(c: &mut Criterion) {
    let f = make_field(5, 1).unwrap();
    let mut g = c.benchmark_group("legendre_weights_q5_n7");
    for (name, ex) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| legendre_rep(&f).unwrap().degree_weights(7, 7, ex).unwrap().total())
        });
    }
    g.finish();
}

fn variance(c: &mut Criterion) {
    let f = make_field(5, 1).unwrap();
    let rep = trivial_rep(&f);
    let dense = dense_weights(&rep, 8, Exec::Parallel).unwrap();
    let table = rep.degree_weights(7, 5, Exec::Parallel).unwrap().residue_table(5, 5).unwrap();
    let mut g = c.benchmark_group("variance_q5");
    for (name, ex) in MODES {
        g.bench_function(BenchmarkId::new("interval_sums_n8_h2", name), |b| {
            b.iter(|| interval_sums(&dense, 5, 2, ex).iter().map(|&v| v as i128 * v as i128).sum::<i128>())
        });
        g.bench_function(BenchmarkId::new("character_route_n7_h2", name), |b| {
            b.iter(|| character_variance(&table, &f, 7, 2, ex).unwrap())
        });
    }
    g.finish();
}

fn monte_carlo(c: &mut Criterion) {
    let mut g = c.benchmark_group("trace_moment_u5_5000");
    for (name, ex) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| rmt::trace_moment(5, 3, 5000, 7, ex).unwrap().mean)
        });
    }
    g.finish();
}

criterion_group! {
    name = engines;
    config = Criterion::default().sample_size(10).measurement_time(Duration::from_secs(4));
    targets = sieve, legendre_bulk, variance, monte_carlo
}
criterion_main!(engines);
