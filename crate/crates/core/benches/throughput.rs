use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use grand::analysis::exponent_rows;
use grand::parallel::Execution;
use grand::simulator::{simulate, Mode, SimConfig};
use grand::NoiseModel;

const POLICIES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn race_trials(c: &mut Criterion) {
    let mut group = c.benchmark_group("race_n75");
    group.sample_size(10);
    let bsc = NoiseModel::bsc(0.01).unwrap();
    for (name, exec) in POLICIES {
        let cfg = SimConfig::new(bsc.clone(), 75, 0.72, 20_000, Mode::Race, 1).with_execution(exec);
        group.bench_with_input(BenchmarkId::from_parameter(name), &cfg, |b, cfg| b.iter(|| simulate(cfg).unwrap()));
    }
    group.finish();
}

fn explicit_trials(c: &mut Criterion) {
    let mut group = c.benchmark_group("explicit_n20");
    group.sample_size(10);
    let m = NoiseModel::markov(0.05, 0.4).unwrap();
    for (name, exec) in POLICIES {
        let cfg = SimConfig::new(m.clone(), 20, 0.6, 5_000, Mode::Explicit, 2).with_execution(exec);
        group.bench_with_input(BenchmarkId::from_parameter(name), &cfg, |b, cfg| b.iter(|| simulate(cfg).unwrap()));
    }
    group.finish();
}

fn exponent_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("exponent_rows");
    let m = NoiseModel::markov(0.002, 0.2).unwrap();
    let rates: Vec<f64> = (0..200).map(|i| i as f64 / 199.0).collect();
    for (name, exec) in POLICIES {
        group.bench_function(name, |b| b.iter(|| exponent_rows(&m, &rates, Some(0.1), exec).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, race_trials, explicit_trials, exponent_sweep);
criterion_main!(benches);
