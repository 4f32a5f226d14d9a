use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use qcb_core::bounds::bound_dominance_check;
use qcb_core::convertibility::{compare_classes, convertibility_report, ConversionInstance, Family};
use qcb_core::detection::{threshold_sweep, uniform_grid};
use qcb_core::measurement::channel_probability;
use qcb_core::qubit::kyfan_norm;
use qcb_core::{random, ChannelClass};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn closed_forms(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let tau = random::two_qubit_state(&mut rng);
    let n = *tau.correlation_matrix().matrix();
    c.bench_function("kyfan_norm", |b| b.iter(|| kyfan_norm(black_box(&n))));
    c.bench_function("bound_dominance_check", |b| b.iter(|| bound_dominance_check(black_box(&tau)).unwrap()));

    let inst = ConversionInstance::from_overlaps(0.4, 0.7).unwrap();
    c.bench_function("convertibility_report", |b| b.iter(|| convertibility_report(black_box(&inst))));
    c.bench_function("compare_classes_grid_1000", |b| {
        b.iter(|| {
            compare_classes(Family::FixedX(std::f64::consts::FRAC_1_SQRT_2), ChannelClass::RandomUnitary, ChannelClass::Depolarizing, 1000)
                .unwrap()
        })
    });
    let grid = uniform_grid(1001);
    c.bench_function("threshold_sweep_1001", |b| b.iter(|| threshold_sweep(black_box(&grid)).unwrap()));
}

fn probabilities(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let ch = random::channel_in_class(&mut rng, ChannelClass::General);
    let effect = qcb_core::detection::success_effect(qcb_core::detection::Scheme::AncillaFree);
    c.bench_function("channel_probability", |b| b.iter(|| channel_probability(black_box(&effect), black_box(&ch))));
    c.bench_function("random_channel_general", |b| b.iter(|| random::channel_in_class(&mut rng, ChannelClass::General)));
}

criterion_group!(benches, closed_forms, probabilities);
criterion_main!(benches);
