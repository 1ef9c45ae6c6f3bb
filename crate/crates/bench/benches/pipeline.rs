use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use excursion_core::synth::{rpw_truncation_order, RpwSynthesizer, Synthesizer};
use excursion_core::topology::{count_components, TopologyAnalysis};
use excursion_core::{ConnectivityPolicy, FieldModel, GridSpec};

fn synthesis(c: &mut Criterion) {
    let mut group = c.benchmark_group("synthesis");
    group.sample_size(10);
    for side in [16.0, 32.0] {
        let grid = GridSpec::for_model(&FieldModel::BargmannFock, side, 0.0).unwrap();
        let synth = Synthesizer::new(&FieldModel::BargmannFock, &grid).unwrap();
        group.bench_with_input(BenchmarkId::new("bargmann-fock", side), &synth, |b, s| {
            b.iter(|| s.sample(black_box(7), 0))
        });
    }
    let power = FieldModel::power_law(1.0, 0.25).unwrap();
    let grid = GridSpec::for_model(&power, 16.0, 0.0).unwrap();
    let synth = Synthesizer::new(&power, &grid).unwrap();
    group.bench_function("powerlaw/16", |b| b.iter(|| synth.sample(black_box(7), 0)));
    let grid = GridSpec::for_model(&FieldModel::RandomPlaneWave, 8.0, 0.0).unwrap();
    let rpw = RpwSynthesizer::new(&grid, rpw_truncation_order(&grid)).unwrap();
    group.bench_function("rpw/8", |b| b.iter(|| rpw.sample(black_box(7), 0)));
    group.finish();
}

fn topology(c: &mut Criterion) {
    let grid = GridSpec::for_model(&FieldModel::BargmannFock, 32.0, 0.0).unwrap();
    let sample = Synthesizer::new(&FieldModel::BargmannFock, &grid).unwrap().sample(3, 0);
    let policy = ConnectivityPolicy::default();
    let mut group = c.benchmark_group("topology");
    group.bench_function("count_components", |b| b.iter(|| count_components(sample.window(), black_box(0.3), policy)));
    group.bench_function("merge_tree_analysis", |b| b.iter(|| TopologyAnalysis::new(sample.window(), policy)));
    let analysis = TopologyAnalysis::new(sample.window(), policy);
    let levels: Vec<f64> = (0..41).map(|i| -2.0 + 0.1 * i as f64).collect();
    group.bench_function("level_sweep_41", |b| {
        b.iter(|| levels.iter().map(|&l| analysis.excursion_contained(l)).sum::<usize>())
    });
    group.finish();
}

criterion_group!(benches, synthesis, topology);
criterion_main!(benches);
