use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use qgcolor_core::{
    extract_coincidences, generate_fbm, rescaled_range_hurst, simulate_detections, spectral_exponent,
    synchronize_and_correct, Coupling, ObserverConfig, ObserverLabel, PairSourceConfig, PerturbationModel,
    RandomStream,
};

fn fbm(c: &mut Criterion) {
    let mut g = c.benchmark_group("fbm");
    g.sample_size(10);
    for m in [1024usize, 4096] {
        g.bench_with_input(BenchmarkId::new("n16", m), &m, |b, &m| {
            b.iter(|| generate_fbm(1.0, 16, m, RandomStream::new(black_box(7), 0)).unwrap())
        });
    }
    g.finish();
}

fn estimators(c: &mut Criterion) {
    let series = generate_fbm(0.8, 16, 1 << 14, RandomStream::new(1, 0)).unwrap();
    let inc = series.increments();
    c.bench_function("rescaled_range/16384", |b| b.iter(|| rescaled_range_hurst(black_box(&inc)).unwrap()));
    c.bench_function("spectral/16384", |b| b.iter(|| spectral_exponent(black_box(&series.values), 1.0).unwrap()));
}

fn coincidences(c: &mut Criterion) {
    let source = PairSourceConfig { rate: 1.0, phase: 0.0, coherence_window: 0.01, separation: 10.0 };
    let a = ObserverConfig::new(ObserverLabel::A, [0.0; 3], -1.0);
    let b = ObserverConfig::new(ObserverLabel::B, [10.0, 0.0, 0.0], -1.0);
    let (ra, rb) = simulate_detections(
        &source,
        &a,
        &b,
        &PerturbationModel::None,
        &Coupling::default(),
        1e4,
        RandomStream::new(3, 0),
    )
    .unwrap();
    c.bench_function("coincidences/1e4", |bench| {
        bench.iter(|| {
            let events = synchronize_and_correct(&ra, &rb, &a, &b).unwrap();
            extract_coincidences(&events, 0.01).unwrap()
        })
    });
}

criterion_group!(benches, fbm, estimators, coincidences);
criterion_main!(benches);
