use cigan_bench::{labelled, scaled_matrix};
use cigan_core::eval::train_classifier;
use cigan_core::gan::{build_gan, train_gan, GanConfig};
use cigan_core::nn::{init_network, Activation, OutputGradient};
use cigan_core::ClassifierSpec;
use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use std::hint::black_box;

fn forward_backward(c: &mut Criterion) {
    let net = init_network(
        &[6, 100, 200, 300, 400, 500, 12],
        Activation::Selu,
        Activation::Tanh,
        1,
    )
    .unwrap();
    let x = scaled_matrix(32, 6);
    c.bench_function("generator forward+backward, batch 32", |b| {
        b.iter(|| {
            let (out, cache) = net.forward(black_box(x.view())).unwrap();
            net.backward(&cache, OutputGradient::Output(out.view()))
                .unwrap()
        })
    });
}

fn gan_epoch(c: &mut Criterion) {
    let config = GanConfig {
        max_iter: 1,
        ..GanConfig::default()
    };
    let samples = scaled_matrix(230, 12);
    let model = build_gan(&config, 12, "c", 1).unwrap();
    let mut group = c.benchmark_group("gan");
    group.sample_size(10);
    group.bench_function("one epoch, 230 x 12, default architecture", |b| {
        b.iter_batched(
            || model.clone(),
            |m| train_gan(m, samples.view(), &config).unwrap(),
            BatchSize::LargeInput,
        )
    });
    group.finish();
}

fn trees_fit(c: &mut Criterion) {
    let ds = labelled(&[976, 230, 679], 12);
    let spec = ClassifierSpec::gradient_boosted_trees();
    let mut group = c.benchmark_group("classifier");
    group.sample_size(10);
    group.bench_function("gradient-boosted trees fit, 1885 x 12, 3 classes", |b| {
        b.iter(|| train_classifier(ds.features().view(), ds.target(), &spec, 0).unwrap())
    });
    group.finish();
}

criterion_group!(benches, forward_backward, gan_epoch, trees_fit);
criterion_main!(benches);
