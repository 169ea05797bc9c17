use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand_distr::{Distribution, StandardNormal};
use std::hint::black_box;
use subgauss::bandit::{beucb_index, bootstrap_quantile, make_env, run_episode, ArmState, EnvKind, PolicyKind, PolicySpec};
use subgauss::diagnostics::subgauss_plot_data;
use subgauss::estimators::{de_estimate, mom_estimate};
use subgauss::seed::rng_from_seed;
use subgauss::Sample;

fn gaussian(n: usize) -> Vec<f64> {
    let mut rng = rng_from_seed(1);
    (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
}

fn estimators(c: &mut Criterion) {
    let mut group = c.benchmark_group("estimate");
    for n in [100, 1_000, 10_000] {
        let sample = Sample::new(gaussian(n)).unwrap();
        group.bench_with_input(BenchmarkId::new("de", n), &sample, |b, s| b.iter(|| de_estimate(black_box(s), 10)));
        let blocks = (2.0 * (n as f64).ln()).ceil() as usize;
        group.bench_with_input(BenchmarkId::new("mom", n), &sample, |b, s| {
            b.iter(|| mom_estimate(black_box(s), blocks, 10, 7))
        });
    }
    group.finish();
}

fn bootstrap(c: &mut Criterion) {
    let data = gaussian(200);
    c.bench_function("bootstrap_quantile/200x1000", |b| {
        b.iter(|| bootstrap_quantile(black_box(&data), 0.05, 1_000, 3))
    });
    let arm = ArmState::new(data.clone());
    let spec = PolicySpec::new(PolicyKind::Beucb);
    c.bench_function("beucb_index/200", |b| b.iter(|| beucb_index(black_box(&arm), 0.05, &spec, 3)));
}

fn diagnostics(c: &mut Criterion) {
    let sample = Sample::new(gaussian(1_000)).unwrap();
    c.bench_function("sgplot/1000", |b| b.iter(|| subgauss_plot_data(black_box(&sample), 5)));
}

fn episodes(c: &mut Criterion) {
    let env = make_env(EnvKind::EG1, 10, 0.0, 1.0, 9).unwrap();
    let mut group = c.benchmark_group("episode");
    group.sample_size(10);
    for kind in [PolicyKind::Beucb, PolicyKind::CltUcb, PolicyKind::Thompson] {
        let spec = PolicySpec::new(kind);
        group.bench_function(format!("{kind:?}/T=2000"), |b| b.iter(|| run_episode(&env, &spec, 2_000, 11)));
    }
    group.finish();
}

criterion_group!(benches, estimators, bootstrap, diagnostics, episodes);
criterion_main!(benches);
