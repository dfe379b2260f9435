use std::hint::black_box;

use convsq::catalog::{load_catalog, verify_record, VerifyBudget};
use convsq::group::{conj_fourier, convolve, fourier, GroupFunction};
use convsq::solver::{find_critical_functions, poly_roots, Normalization, SearchConfig, NON_WEIL_C_POLY};
use convsq::theta::{theta_critical_function, theta_scaled, ThetaCriticalParams, TruncationPolicy};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_complex::Complex64;

fn sample(d: u64) -> GroupFunction {
    GroupFunction::from_fn(d, |k| Complex64::new((k as f64 * 0.7).sin(), (k as f64 * 1.3).cos())).unwrap()
}

fn transforms(c: &mut Criterion) {
    let mut g = c.benchmark_group("transforms");
    for d in [7u64, 31, 101] {
        let f = sample(d);
        g.bench_with_input(BenchmarkId::new("fourier", d), &f, |b, f| b.iter(|| fourier(black_box(f))));
        g.bench_with_input(BenchmarkId::new("conj_fourier", d), &f, |b, f| b.iter(|| conj_fourier(black_box(f))));
        g.bench_with_input(BenchmarkId::new("convolve", d), &f, |b, f| b.iter(|| convolve(black_box(f), black_box(f))));
    }
    g.finish();
}

fn theta(c: &mut Criterion) {
    let policy = TruncationPolicy::default();
    c.bench_function("theta_scaled generic", |b| {
        b.iter(|| theta_scaled(black_box(Complex64::new(0.3, 0.2)), black_box(Complex64::new(0.1, 0.8)), &policy))
    });
    let p = ThetaCriticalParams::from_integers(17, 13).unwrap();
    c.bench_function("theta witness d=17", |b| {
        b.iter(|| theta_critical_function(&p, black_box(Complex64::new(0.0, 0.0)), &policy))
    });
}

fn search(c: &mut Criterion) {
    let mut g = c.benchmark_group("search");
    g.sample_size(10);
    let mut cfg = SearchConfig::new(5, Complex64::new(-5f64.sqrt(), 0.0));
    cfg.starts = 200;
    cfg.seed = 7;
    g.bench_function("d=5 -sqrt5 200 starts", |b| b.iter(|| find_critical_functions(black_box(&cfg))));
    let mut cfg = SearchConfig::new(11, Complex64::new(4.0 + 5f64.sqrt(), 0.0));
    cfg.normalization = Normalization::UnitNorm;
    cfg.starts = 100;
    g.bench_function("d=11 4+sqrt5 100 starts", |b| b.iter(|| find_critical_functions(black_box(&cfg))));
    g.finish();
}

fn algebra(c: &mut Criterion) {
    c.bench_function("degree-ten roots", |b| b.iter(|| poly_roots(black_box(&NON_WEIL_C_POLY))));
    let constructive: Vec<_> = load_catalog().into_iter().filter(|r| r.construction.is_constructive()).collect();
    c.bench_function("verify constructive catalog", |b| {
        b.iter(|| {
            for r in &constructive {
                black_box(verify_record(r, VerifyBudget::default()).unwrap());
            }
        })
    });
}

criterion_group!(benches, transforms, theta, search, algebra);
criterion_main!(benches);
