use crate::error::{Error, Result};
use crate::vectorize::SparseVector;

/// Multinomial naive Bayes with additive (Laplace) smoothing.
///
/// `log_prior[c] = ln(n_c / n)` and
/// `log_likelihood[c][t] = ln((f_ct + alpha) / (sum_t f_ct + alpha * dimension))`
/// where `f_ct` is the summed feature value of term `t` over class `c`.
#[derive(Debug, Clone, PartialEq)]
pub struct MnbModel {
    log_prior: Vec<f64>,
    log_likelihood: Vec<f64>,
    dimension: usize,
    alpha: f64,
}

impl MnbModel {
    /// `feature_totals[c][t]` and `class_counts[c]` as defined above.
    pub fn from_totals(feature_totals: &[Vec<f64>], class_counts: &[u64], alpha: f64) -> Result<MnbModel> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::Config(format!("mnb_alpha must be positive, got {alpha}")));
        }
        if feature_totals.len() != class_counts.len() || feature_totals.is_empty() {
            return Err(Error::Data("one feature-total row per class is required".to_string()));
        }
        let dimension = feature_totals[0].len();
        if feature_totals.iter().any(|row| row.len() != dimension) {
            return Err(Error::Data("ragged feature totals".to_string()));
        }
        let n: u64 = class_counts.iter().sum();
        let log_prior = class_counts.iter().map(|&c| (c as f64 / n as f64).ln()).collect();
        let mut log_likelihood = Vec::with_capacity(feature_totals.len() * dimension);
        for row in feature_totals {
            let denom = (row.iter().sum::<f64>() + alpha * dimension as f64).ln();
            log_likelihood.extend(row.iter().map(|f| (f + alpha).ln() - denom));
        }
        Ok(MnbModel {
            log_prior,
            log_likelihood,
            dimension,
            alpha,
        })
    }

    /// Fits from labelled sparse vectors. Feature values must be
    /// non-negative.
    pub fn fit(x: &[SparseVector], labels: &[usize], n_classes: usize, dimension: usize, alpha: f64) -> Result<MnbModel> {
        let mut totals = vec![vec![0.0; dimension]; n_classes];
        let mut counts = vec![0u64; n_classes];
        for (xi, &y) in x.iter().zip(labels) {
            counts[y] += 1;
            for (j, v) in xi.iter() {
                if v < 0.0 {
                    return Err(Error::Data(format!("negative feature value {v} at index {j}")));
                }
                totals[y][j] += v;
            }
        }
        Self::from_totals(&totals, &counts, alpha)
    }

    pub fn from_parts(log_prior: Vec<f64>, log_likelihood: Vec<f64>, dimension: usize, alpha: f64) -> Result<MnbModel, String> {
        if log_likelihood.len() != log_prior.len() * dimension {
            return Err("log-likelihood size does not match classes x dimension".to_string());
        }
        Ok(MnbModel {
            log_prior,
            log_likelihood,
            dimension,
            alpha,
        })
    }

    pub fn n_classes(&self) -> usize {
        self.log_prior.len()
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn log_prior(&self) -> &[f64] {
        &self.log_prior
    }

    pub fn log_likelihood_row(&self, class: usize) -> &[f64] {
        &self.log_likelihood[class * self.dimension..(class + 1) * self.dimension]
    }

    /// Log joint `log_prior[c] + x . log_likelihood[c]` per class.
    pub fn scores(&self, x: &SparseVector) -> Vec<f64> {
        (0..self.n_classes())
            .map(|c| self.log_prior[c] + x.dot(self.log_likelihood_row(c)))
            .collect()
    }
}
