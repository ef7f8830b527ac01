//! One-vs-rest linear SVM trained by mini-batch subgradient descent.
//!
//! For class `k` the binary target is `+1` for samples of class `k` and
//! `-1` otherwise; the summed objective over classes is
//! `sum_k (lambda / 2) ||w_k||^2 + mean_i max(0, 1 - y_ik (w_k . x_i + b_k))`.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::linear::{LinearModel, ScaledWeights};
use super::{ModelKind, TrainConfig};
use crate::error::{Error, Result};
use crate::vectorize::SparseVector;

fn target(label: usize, class: usize) -> f64 {
    if label == class {
        1.0
    } else {
        -1.0
    }
}

/// Mean one-vs-rest hinge loss summed over classes (no regulariser).
pub fn hinge_loss(model: &LinearModel, x: &[SparseVector], labels: &[usize]) -> f64 {
    let total: f64 = x
        .iter()
        .zip(labels)
        .map(|(xi, &y)| {
            model
                .scores(xi)
                .iter()
                .enumerate()
                .map(|(k, s)| (1.0 - target(y, k) * s).max(0.0))
                .sum::<f64>()
        })
        .sum();
    total / x.len() as f64
}

/// Smallest functional margin `y_ik * score_ik` over all samples and classes.
pub fn min_margin(model: &LinearModel, x: &[SparseVector], labels: &[usize]) -> f64 {
    x.iter()
        .zip(labels)
        .flat_map(|(xi, &y)| {
            model
                .scores(xi)
                .into_iter()
                .enumerate()
                .map(move |(k, s)| target(y, k) * s)
        })
        .fold(f64::INFINITY, f64::min)
}

pub fn objective(model: &LinearModel, x: &[SparseVector], labels: &[usize], l2_lambda: f64) -> f64 {
    hinge_loss(model, x, labels) + 0.5 * l2_lambda * model.weight_sq_norm()
}

/// Trains without checking class coverage. Returns the model and the full
/// training objective after each epoch.
pub fn train(x: &[SparseVector], labels: &[usize], n_classes: usize, dimension: usize, cfg: &TrainConfig) -> Result<(LinearModel, Vec<f64>)> {
    let n = x.len();
    let lr = cfg.learning_rate;
    let shrink = 1.0 - lr * cfg.l2_lambda;
    let mut weights = ScaledWeights::zeros(n_classes, dimension);
    let mut bias = vec![0.0; n_classes];
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut history = Vec::with_capacity(cfg.epochs);

    for epoch in 1..=cfg.epochs {
        order.shuffle(&mut rng);
        for batch in order.chunks(cfg.batch_size.max(1)) {
            let step = lr / batch.len() as f64;
            // (sample, class, target) triples that violate the margin
            let mut violations = Vec::new();
            for &i in batch {
                for k in 0..n_classes {
                    let y = target(labels[i], k);
                    if y * (weights.dot(k, &x[i]) + bias[k]) < 1.0 {
                        violations.push((i, k, y));
                    }
                }
            }
            weights.shrink(shrink);
            for (i, k, y) in violations {
                weights.add(k, &x[i], step * y);
                bias[k] += step * y;
            }
        }
        let model = LinearModel::from_parts(ModelKind::Svm, n_classes, dimension, weights.to_dense(), bias.clone())
            .map_err(|_| Error::NonFinite { epoch })?;
        let obj = objective(&model, x, labels, cfg.l2_lambda);
        if !obj.is_finite() {
            return Err(Error::NonFinite { epoch });
        }
        history.push(obj);
    }
    let model = LinearModel::from_parts(ModelKind::Svm, n_classes, dimension, weights.to_dense(), bias)
        .map_err(|_| Error::NonFinite { epoch: cfg.epochs })?;
    Ok((model, history))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_per_class() -> (Vec<SparseVector>, Vec<usize>) {
        let x = vec![
            SparseVector::from_dense(&[1.0, 0.0, 0.0]),
            SparseVector::from_dense(&[0.9, 0.1, 0.0]),
            SparseVector::from_dense(&[0.0, 1.0, 0.0]),
            SparseVector::from_dense(&[0.1, 0.9, 0.0]),
            SparseVector::from_dense(&[0.0, 0.0, 1.0]),
            SparseVector::from_dense(&[0.0, 0.1, 0.9]),
        ];
        (x, vec![0, 0, 1, 1, 2, 2])
    }

    #[test]
    fn separable_points_reach_zero_hinge() {
        let (x, y) = two_per_class();
        let mut cfg = TrainConfig::new(ModelKind::Svm);
        cfg.epochs = 200;
        let (model, _) = train(&x, &y, 3, 3, &cfg).unwrap();
        assert_eq!(hinge_loss(&model, &x, &y), 0.0);
        assert!(min_margin(&model, &x, &y) >= 1.0);
    }

    #[test]
    fn full_batch_objective_is_monotone() {
        let (x, y) = two_per_class();
        let mut cfg = TrainConfig::new(ModelKind::Svm);
        cfg.learning_rate = 0.01;
        cfg.batch_size = x.len();
        cfg.epochs = 100;
        let (_, history) = train(&x, &y, 3, 3, &cfg).unwrap();
        for w in history.windows(2) {
            assert!(w[1] <= w[0] + 1e-8, "{} -> {}", w[0], w[1]);
        }
    }
}
