use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use noma_crs::channel::cdf_min;
use noma_crs::rates::{approx_rates, d_term, exact_rates};
use noma_crs::sim::mc_noma_rates;
use noma_crs::{GammaKernel, McConfig, QuadratureConfig, SeriesControl};
use noma_crs_bench::fig2_config;

fn series(c: &mut Criterion) {
    let ctrl = SeriesControl::default();
    let cfg = fig2_config(0.3, 20.0);
    let pair = cfg.z2_pair();

    let mut group = c.benchmark_group("d_term");
    group.bench_function("exact", |b| {
        b.iter(|| d_term(black_box(cfg.rho()), &pair, &ctrl, &GammaKernel::Exact).unwrap())
    });
    for order in [25usize, 100, 400] {
        let kernel = GammaKernel::GaussChebyshev(QuadratureConfig::new(order).unwrap());
        group.bench_with_input(BenchmarkId::new("gauss_chebyshev", order), &kernel, |b, k| {
            b.iter(|| d_term(black_box(cfg.rho()), &pair, &ctrl, k).unwrap())
        });
    }
    group.finish();

    c.bench_function("cdf_min/z1", |b| {
        let z1 = cfg.z1_pair();
        b.iter(|| cdf_min(black_box(7.5), &z1, &ctrl).unwrap())
    });
    c.bench_function("rates/exact", |b| b.iter(|| exact_rates(black_box(&cfg), &ctrl).unwrap()));
    c.bench_function("rates/approx_100", |b| {
        b.iter(|| approx_rates(black_box(&cfg), &ctrl, QuadratureConfig::default()).unwrap())
    });
}

fn monte_carlo(c: &mut Criterion) {
    let cfg = fig2_config(0.3, 20.0);
    let mut group = c.benchmark_group("mc_noma_rates");
    group.sample_size(10);
    for workers in [1usize, 4] {
        let mc = McConfig::new(100_000, 1, workers).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(workers), &mc, |b, mc| {
            b.iter(|| mc_noma_rates(black_box(&cfg), mc).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, series, monte_carlo);
criterion_main!(benches);
