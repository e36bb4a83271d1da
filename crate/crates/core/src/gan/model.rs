use ndarray::{concatenate, Array2, ArrayView2, Axis};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{resolve_coding_size, GanConfig, GanError};
use crate::nn::{bce_loss, init_network, Activation, AdamState, DenseNetwork, OutputGradient};
use crate::seed::{self, stream};

/// A generator/discriminator pair bound to one class.
///
/// The generator maps `coding_size` Gaussian inputs through tanh to the
/// scaled feature box; the discriminator maps features to a sigmoid score.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GanModel {
    pub class_label: String,
    pub generator: DenseNetwork,
    pub discriminator: DenseNetwork,
    pub coding_size: usize,
    pub rng_seed: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl GanModel {
    pub fn n_features(&self) -> usize {
        self.generator.output_size()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpochLoss {
    pub epoch: usize,
    pub d_loss: f64,
    pub g_loss: f64,
    pub batches: usize,
}

/// Mean losses per epoch.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TrainLog {
    pub epochs: Vec<EpochLoss>,
}

impl TrainLog {
    pub fn len(&self) -> usize {
        self.epochs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.epochs.is_empty()
    }

    /// `epoch,d_loss,g_loss` rows with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("epoch,d_loss,g_loss\n");
        for e in &self.epochs {
            out.push_str(&format!("{},{},{}\n", e.epoch, e.d_loss, e.g_loss));
        }
        out
    }
}

pub fn build_gan(
    config: &GanConfig,
    n_features: usize,
    class_label: impl Into<String>,
    seed: u64,
) -> Result<GanModel, GanError> {
    config.validate()?;
    let coding_size = resolve_coding_size(config, n_features)?;

    let mut g_sizes = vec![coding_size];
    g_sizes.extend(&config.generator_hidden_layer_sizes);
    g_sizes.push(n_features);
    let generator = init_network(
        &g_sizes,
        config.generator_hidden_layer_activation,
        Activation::Tanh,
        seed::derive(seed, stream::GENERATOR_INIT),
    )?;

    let mut d_sizes = vec![n_features];
    d_sizes.extend(&config.discriminator_hidden_layer_sizes);
    d_sizes.push(1);
    let discriminator = init_network(
        &d_sizes,
        config.discriminator_hidden_layer_activation,
        Activation::Sigmoid,
        seed::derive(seed, stream::DISCRIMINATOR_INIT),
    )?;

    let warnings = config.layer_order_warnings();
    for w in &warnings {
        log::warn!("{w}");
    }
    Ok(GanModel {
        class_label: class_label.into(),
        generator,
        discriminator,
        coding_size,
        rng_seed: seed,
        warnings,
    })
}

fn latent_batch<R: Rng>(rng: &mut R, rows: usize, width: usize) -> Array2<f64> {
    Array2::from_shape_simple_fn((rows, width), || rng.sample(StandardNormal))
}

/// Adversarial training on one class's scaled samples.
///
/// Each minibatch takes one discriminator step (real rows labelled 1, an
/// equal number of generated rows labelled 0) and then one generator step on
/// the non-saturating loss, with the discriminator held fixed.
pub fn train_gan(
    mut model: GanModel,
    samples: ArrayView2<'_, f64>,
    config: &GanConfig,
) -> Result<(GanModel, TrainLog), GanError> {
    config.validate()?;
    let m = samples.nrows();
    if m < 2 {
        return Err(GanError::DegenerateClass {
            label: model.class_label.clone(),
            count: m,
        });
    }
    if samples.ncols() != model.n_features() {
        return Err(crate::nn::NnError::DimensionMismatch {
            expected: model.n_features(),
            found: samples.ncols(),
        }
        .into());
    }

    let mut log = TrainLog::default();
    if config.max_iter == 0 {
        return Ok((model, log));
    }

    let mut rng = seed::rng(seed::derive(model.rng_seed, stream::TRAINING));
    let mut g_opt = AdamState::for_network(&model.generator, config.generator_learning_rate);
    let mut d_opt =
        AdamState::for_network(&model.discriminator, config.discriminator_learning_rate);
    let batch = config.batch_size.min(m);
    let mut order: Vec<usize> = (0..m).collect();

    for epoch in 0..config.max_iter {
        order.shuffle(&mut rng);
        let (mut d_sum, mut g_sum, mut batches) = (0.0, 0.0, 0usize);
        for chunk in order.chunks(batch) {
            let real = samples.select(Axis(0), chunk);
            let b = real.nrows();

            // discriminator step
            let noise = latent_batch(&mut rng, b, model.coding_size);
            let fake = model.generator.predict(noise.view())?;
            let both = concatenate(Axis(0), &[real.view(), fake.view()]).expect("same width");
            let labels: Vec<f64> = (0..2 * b).map(|i| if i < b { 1.0 } else { 0.0 }).collect();
            let (scores, cache) = model.discriminator.forward(both.view())?;
            let d_loss = bce_loss(scores.as_slice().expect("contiguous"), &labels);
            let residual = Array2::from_shape_fn((2 * b, 1), |(i, _)| scores[[i, 0]] - labels[i]);
            let d_grads = model
                .discriminator
                .backward(&cache, OutputGradient::PreActivation(residual.view()))?;
            d_opt.step_network(&mut model.discriminator, &d_grads)?;

            // generator step through the fixed discriminator
            let noise = latent_batch(&mut rng, b, model.coding_size);
            let (fake, g_cache) = model.generator.forward(noise.view())?;
            let (scores, d_cache) = model.discriminator.forward(fake.view())?;
            let g_loss = bce_loss(scores.as_slice().expect("contiguous"), &vec![1.0; b]);
            let residual = scores.mapv(|p| p - 1.0);
            let (_, dx) = model
                .discriminator
                .backward_with_input(&d_cache, OutputGradient::PreActivation(residual.view()))?;
            let g_grads = model
                .generator
                .backward(&g_cache, OutputGradient::Output(dx.view()))?;
            g_opt.step_network(&mut model.generator, &g_grads)?;

            if !(d_loss.is_finite() && g_loss.is_finite()) {
                return Err(diverged(
                    &model,
                    epoch,
                    format!("d_loss={d_loss}, g_loss={g_loss}"),
                ));
            }
            d_sum += d_loss;
            g_sum += g_loss;
            batches += 1;
        }
        if !(model.generator.is_finite() && model.discriminator.is_finite()) {
            return Err(diverged(&model, epoch, "non-finite parameters".into()));
        }
        log.epochs.push(EpochLoss {
            epoch,
            d_loss: d_sum / batches as f64,
            g_loss: g_sum / batches as f64,
            batches,
        });
    }
    Ok((model, log))
}

fn diverged(model: &GanModel, epoch: usize, detail: String) -> GanError {
    GanError::NonFiniteLoss {
        label: model.class_label.clone(),
        epoch,
        detail,
    }
}

/// Draws `n` samples in the scaled feature space.
pub fn generate(model: &GanModel, n: usize, noise_seed: u64) -> Array2<f64> {
    if n == 0 {
        return Array2::zeros((0, model.n_features()));
    }
    let mut rng = seed::rng(noise_seed);
    let noise = latent_batch(&mut rng, n, model.coding_size);
    model
        .generator
        .predict(noise.view())
        .expect("latent width matches generator input by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gan::CodingSize;
    use crate::nn::Gradients;

    fn small_config() -> GanConfig {
        GanConfig {
            generator_hidden_layer_sizes: vec![8, 16],
            discriminator_hidden_layer_sizes: vec![16, 8],
            batch_size: 8,
            max_iter: 3,
            ..GanConfig::default()
        }
    }

    fn samples(m: usize, d: usize) -> Array2<f64> {
        let mut rng = seed::rng(5);
        Array2::from_shape_simple_fn((m, d), || rng.random_range(-0.8..0.8))
    }

    #[test]
    fn default_architecture_for_twelve_features() {
        let model = build_gan(&GanConfig::default(), 12, "2", 42).unwrap();
        assert_eq!(
            model.generator.sizes(),
            vec![6, 100, 200, 300, 400, 500, 12]
        );
        assert_eq!(
            model.discriminator.sizes(),
            vec![12, 500, 400, 300, 200, 100, 1]
        );
        assert_eq!(
            model.generator.layers().last().unwrap().activation,
            Activation::Tanh
        );
        assert_eq!(
            model.discriminator.layers().last().unwrap().activation,
            Activation::Sigmoid
        );
        assert!(model.generator.layers()[..5]
            .iter()
            .all(|l| l.activation == Activation::Selu));
        assert_eq!(model.coding_size, 6);
        assert!(model.warnings.is_empty());
    }

    #[test]
    fn non_ascending_generator_is_accepted_with_warning() {
        let config = GanConfig {
            generator_hidden_layer_sizes: vec![50, 20],
            ..small_config()
        };
        let model = build_gan(&config, 4, "a", 1).unwrap();
        assert_eq!(model.warnings.len(), 1);
        assert!(model.warnings[0].contains("ascending"));
    }

    #[test]
    fn build_is_seeded() {
        let a = build_gan(&small_config(), 3, "a", 11).unwrap();
        let b = build_gan(&small_config(), 3, "a", 11).unwrap();
        let c = build_gan(&small_config(), 3, "a", 12).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.generator, c.generator);
        assert_ne!(a.discriminator, c.discriminator);
    }

    #[test]
    fn zero_epochs_is_identity() {
        let config = GanConfig {
            max_iter: 0,
            ..small_config()
        };
        let model = build_gan(&config, 3, "a", 2).unwrap();
        let (trained, log) = train_gan(model.clone(), samples(10, 3).view(), &config).unwrap();
        assert_eq!(trained, model);
        assert!(log.is_empty());
    }

    #[test]
    fn degenerate_class_is_rejected() {
        let model = build_gan(&small_config(), 3, "lonely", 2).unwrap();
        let err = train_gan(model, samples(1, 3).view(), &small_config()).unwrap_err();
        assert!(matches!(err, GanError::DegenerateClass { count: 1, .. }));
    }

    #[test]
    fn log_has_one_finite_entry_per_epoch() {
        let config = small_config();
        let model = build_gan(&config, 3, "a", 2).unwrap();
        let (_, log) = train_gan(model, samples(20, 3).view(), &config).unwrap();
        assert_eq!(log.len(), 3);
        for e in &log.epochs {
            assert!(e.d_loss.is_finite() && e.g_loss.is_finite());
            assert_eq!(e.batches, 3); // 8 + 8 + 4
        }
        assert!(log.to_csv().starts_with("epoch,d_loss,g_loss\n0,"));
    }

    #[test]
    fn small_class_uses_whole_class_batches() {
        let config = GanConfig {
            batch_size: 32,
            max_iter: 2,
            ..small_config()
        };
        let model = build_gan(&config, 2, "a", 3).unwrap();
        let (_, log) = train_gan(model, samples(5, 2).view(), &config).unwrap();
        assert!(log.epochs.iter().all(|e| e.batches == 1));
    }

    #[test]
    fn first_discriminator_loss_matches_hand_computation() {
        // One epoch, one batch: the logged discriminator loss is the BCE of the
        // initial discriminator on real rows (label 1) and the initial
        // generator's rows (label 0) for the first latent draw.
        let config = GanConfig {
            max_iter: 1,
            batch_size: 4,
            ..small_config()
        };
        let model = build_gan(&config, 2, "a", 9).unwrap();
        let x = samples(4, 2);

        let mut rng = seed::rng(seed::derive(9, stream::TRAINING));
        let mut order: Vec<usize> = (0..4).collect();
        order.shuffle(&mut rng);
        let real = x.select(Axis(0), &order);
        let noise = latent_batch(&mut rng, 4, model.coding_size);
        let fake = model.generator.predict(noise.view()).unwrap();
        let pr = model.discriminator.predict(real.view()).unwrap();
        let pf = model.discriminator.predict(fake.view()).unwrap();
        let expected = (pr.iter().map(|p| -p.ln()).sum::<f64>()
            + pf.iter().map(|p| -(1.0 - p).ln()).sum::<f64>())
            / 8.0;

        let (_, log) = train_gan(model, x.view(), &config).unwrap();
        assert!((log.epochs[0].d_loss - expected).abs() < 1e-12);
    }

    #[test]
    fn steps_only_touch_their_own_network() {
        // Re-run the body of one minibatch by hand and compare snapshots.
        let config = small_config();
        let mut model = build_gan(&config, 3, "a", 4).unwrap();
        let x = samples(8, 3);
        let mut d_opt = AdamState::for_network(&model.discriminator, 1e-2);
        let mut g_opt = AdamState::for_network(&model.generator, 1e-2);
        let mut rng = seed::rng(0);

        let g_before = model.generator.clone();
        let noise = latent_batch(&mut rng, 8, model.coding_size);
        let fake = model.generator.predict(noise.view()).unwrap();
        let both = concatenate(Axis(0), &[x.view(), fake.view()]).unwrap();
        let (scores, cache) = model.discriminator.forward(both.view()).unwrap();
        let residual = Array2::from_shape_fn((16, 1), |(i, _)| {
            scores[[i, 0]] - if i < 8 { 1.0 } else { 0.0 }
        });
        let grads = model
            .discriminator
            .backward(&cache, OutputGradient::PreActivation(residual.view()))
            .unwrap();
        d_opt
            .step_network(&mut model.discriminator, &grads)
            .unwrap();
        assert_eq!(model.generator, g_before);

        let d_before = model.discriminator.clone();
        let (fake, g_cache) = model.generator.forward(noise.view()).unwrap();
        let (scores, d_cache) = model.discriminator.forward(fake.view()).unwrap();
        let residual = scores.mapv(|p| p - 1.0);
        let (_, dx) = model
            .discriminator
            .backward_with_input(&d_cache, OutputGradient::PreActivation(residual.view()))
            .unwrap();
        let g_grads = model
            .generator
            .backward(&g_cache, OutputGradient::Output(dx.view()))
            .unwrap();
        assert_ne!(g_grads, Gradients::zeros_like(&model.generator));
        g_opt.step_network(&mut model.generator, &g_grads).unwrap();
        assert_eq!(model.discriminator, d_before);
        assert_ne!(model.generator, g_before);
    }

    #[test]
    fn training_is_deterministic() {
        let config = small_config();
        let x = samples(30, 3);
        let run = || {
            let model = build_gan(&config, 3, "a", 17).unwrap();
            train_gan(model, x.view(), &config).unwrap()
        };
        let (a, la) = run();
        let (b, lb) = run();
        assert_eq!(a, b);
        assert_eq!(la, lb);
    }

    #[test]
    fn huge_learning_rate_aborts_instead_of_returning_nan() {
        let config = GanConfig {
            generator_learning_rate: 1e300,
            discriminator_learning_rate: 1e300,
            max_iter: 5,
            ..small_config()
        };
        let model = build_gan(&config, 3, "boom", 1).unwrap();
        let err = train_gan(model, samples(16, 3).view(), &config).unwrap_err();
        assert!(
            matches!(err, GanError::NonFiniteLoss { ref label, .. } if label == "boom"),
            "{err}"
        );
    }

    #[test]
    fn generate_contract() {
        let config = GanConfig {
            coding_size: CodingSize::Fixed(4),
            ..small_config()
        };
        let model = build_gan(&config, 3, "a", 1).unwrap();
        let empty = generate(&model, 0, 1);
        assert_eq!(empty.dim(), (0, 3));
        let a = generate(&model, 1000, 5);
        let b = generate(&model, 1000, 5);
        assert_eq!(a, b);
        assert!(a.iter().all(|&v| v > -1.0 && v < 1.0));
        assert_ne!(a, generate(&model, 1000, 6));
    }

    #[test]
    fn model_round_trips_through_json() {
        let model = build_gan(&small_config(), 3, "a", 1).unwrap();
        let json = serde_json::to_string(&model).unwrap();
        let back: GanModel = serde_json::from_str(&json).unwrap();
        assert_eq!(back, model);
    }
}
