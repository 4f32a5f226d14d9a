use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qcb_core::oracle::{dominance_sweep, maximize, OracleConfig};
use qcb_core::{random, ChannelClass};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn oracle(c: &mut Criterion) {
    let tau = random::two_qubit_state(&mut ChaCha8Rng::seed_from_u64(2));
    let mut group = c.benchmark_group("maximize");
    group.sample_size(10);
    for class in ChannelClass::ALL {
        let cfg = OracleConfig { n_starts: 64, n_refine: 4, ..OracleConfig::new(class) };
        group.bench_with_input(BenchmarkId::from_parameter(class), &cfg, |b, cfg| {
            b.iter(|| maximize(&tau, cfg).unwrap())
        });
    }
    group.finish();

    let mut group = c.benchmark_group("dominance_sweep");
    group.sample_size(10);
    group.bench_function("C_100x100", |b| b.iter(|| dominance_sweep(ChannelClass::General, 100, 100, 7)));
    group.finish();
}

criterion_group!(benches, oracle);
criterion_main!(benches);
