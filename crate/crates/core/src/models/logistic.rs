//! Multinomial logistic regression trained by mini-batch gradient descent on
//! mean softmax cross-entropy plus `(lambda / 2) * ||W||^2`.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::linear::{LinearModel, ScaledWeights};
use super::{ModelKind, TrainConfig};
use crate::error::{Error, Result};
use crate::vectorize::SparseVector;

/// Numerically stable softmax.
pub fn softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exp: Vec<f64> = logits.iter().map(|l| (l - max).exp()).collect();
    let sum: f64 = exp.iter().sum();
    exp.into_iter().map(|e| e / sum).collect()
}

fn log_sum_exp(logits: &[f64]) -> f64 {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    max + logits.iter().map(|l| (l - max).exp()).sum::<f64>().ln()
}

/// Mean cross-entropy over `(x, labels)` plus the L2 penalty on the weights.
pub fn objective(model: &LinearModel, x: &[SparseVector], labels: &[usize], l2_lambda: f64) -> f64 {
    let data: f64 = x
        .iter()
        .zip(labels)
        .map(|(xi, &y)| {
            let logits = model.scores(xi);
            log_sum_exp(&logits) - logits[y]
        })
        .sum::<f64>()
        / x.len() as f64;
    data + 0.5 * l2_lambda * model.weight_sq_norm()
}

/// Gradient of [`objective`] as `(dW row-major, db)`.
pub fn gradient(model: &LinearModel, x: &[SparseVector], labels: &[usize], l2_lambda: f64) -> (Vec<f64>, Vec<f64>) {
    let k = model.n_classes();
    let d = model.dimension();
    let n = x.len() as f64;
    let mut grad_w: Vec<f64> = model.weights().iter().map(|w| l2_lambda * w).collect();
    let mut grad_b = vec![0.0; k];
    for (xi, &y) in x.iter().zip(labels) {
        let p = softmax(&model.scores(xi));
        for c in 0..k {
            let residual = (p[c] - if c == y { 1.0 } else { 0.0 }) / n;
            grad_b[c] += residual;
            for (j, v) in xi.iter() {
                grad_w[c * d + j] += residual * v;
            }
        }
    }
    (grad_w, grad_b)
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
    let mut residuals = vec![0.0; n_classes];
    let mut logits = vec![0.0; n_classes];

    for epoch in 1..=cfg.epochs {
        order.shuffle(&mut rng);
        for batch in order.chunks(cfg.batch_size.max(1)) {
            let step = lr / batch.len() as f64;
            let mut updates: Vec<(usize, Vec<f64>)> = Vec::with_capacity(batch.len());
            for &i in batch {
                for c in 0..n_classes {
                    logits[c] = weights.dot(c, &x[i]) + bias[c];
                }
                let p = softmax(&logits);
                for c in 0..n_classes {
                    residuals[c] = p[c] - if c == labels[i] { 1.0 } else { 0.0 };
                }
                updates.push((i, residuals.clone()));
            }
            weights.shrink(shrink);
            for (i, r) in updates {
                for c in 0..n_classes {
                    weights.add(c, &x[i], -step * r[c]);
                    bias[c] -= step * r[c];
                }
            }
        }
        let model = LinearModel::from_parts(ModelKind::Lr, n_classes, dimension, weights.to_dense(), bias.clone())
            .map_err(|_| Error::NonFinite { epoch })?;
        let obj = objective(&model, x, labels, cfg.l2_lambda);
        if !obj.is_finite() {
            return Err(Error::NonFinite { epoch });
        }
        history.push(obj);
    }
    let model = LinearModel::from_parts(ModelKind::Lr, n_classes, dimension, weights.to_dense(), bias)
        .map_err(|_| Error::NonFinite { epoch: cfg.epochs })?;
    Ok((model, history))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn softmax_is_shift_invariant() {
        let a = softmax(&[1.0, 2.0, 3.0]);
        let b = softmax(&[1001.0, 1002.0, 1003.0]);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12);
        }
        assert!((a.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_sample_probability_increases() {
        let x = vec![SparseVector::from_dense(&[1.0, 0.5]); 4];
        let labels = vec![2; 4];
        let mut cfg = TrainConfig::new(ModelKind::Lr);
        cfg.l2_lambda = 0.0;
        cfg.epochs = 1;
        let mut previous = 1.0 / 3.0;
        for epochs in 1..=300 {
            cfg.epochs = epochs;
            let (model, _) = train(&x, &labels, 3, 2, &cfg).unwrap();
            let p = softmax(&model.scores(&x[0]))[2];
            assert!(p > previous, "epoch {epochs}: {p} <= {previous}");
            previous = p;
        }
        assert!(previous > 0.95, "{previous}");
    }

    #[test]
    fn objective_history_decreases_on_easy_data() {
        let x = vec![
            SparseVector::from_dense(&[1.0, 0.0, 0.0]),
            SparseVector::from_dense(&[0.0, 1.0, 0.0]),
            SparseVector::from_dense(&[0.0, 0.0, 1.0]),
        ];
        let mut cfg = TrainConfig::new(ModelKind::Lr);
        cfg.batch_size = 3;
        let (_, history) = train(&x, &[0, 1, 2], 3, 3, &cfg).unwrap();
        assert!(history.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    }

    #[test]
    fn divergence_is_reported() {
        let x = vec![SparseVector::from_dense(&[1e300, 1e300]), SparseVector::from_dense(&[-1e300, 1e300])];
        let mut cfg = TrainConfig::new(ModelKind::Lr);
        cfg.learning_rate = 1e10;
        cfg.l2_lambda = 0.0;
        let err = train(&x, &[0, 1], 2, 2, &cfg).unwrap_err();
        assert!(matches!(err, Error::NonFinite { epoch: 1 }), "{err:?}");
    }
}
