use crate::models::ModelKind;
use crate::vectorize::SparseVector;

/// One weight row and one bias per class; class scores are `W x + b`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    kind: ModelKind,
    n_classes: usize,
    dimension: usize,
    weights: Vec<f64>,
    bias: Vec<f64>,
}

impl LinearModel {
    pub fn zeros(kind: ModelKind, n_classes: usize, dimension: usize) -> LinearModel {
        LinearModel {
            kind,
            n_classes,
            dimension,
            weights: vec![0.0; n_classes * dimension],
            bias: vec![0.0; n_classes],
        }
    }

    /// `weights` is row-major, `n_classes x dimension`.
    pub fn from_parts(kind: ModelKind, n_classes: usize, dimension: usize, weights: Vec<f64>, bias: Vec<f64>) -> Result<LinearModel, String> {
        if weights.len() != n_classes * dimension || bias.len() != n_classes {
            return Err(format!(
                "expected {n_classes}x{dimension} weights and {n_classes} biases, got {} and {}",
                weights.len(),
                bias.len()
            ));
        }
        if weights.iter().chain(&bias).any(|w| !w.is_finite()) {
            return Err("linear model parameters must be finite".to_string());
        }
        Ok(LinearModel {
            kind,
            n_classes,
            dimension,
            weights,
            bias,
        })
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weights_mut(&mut self) -> &mut [f64] {
        &mut self.weights
    }

    pub fn row(&self, class: usize) -> &[f64] {
        &self.weights[class * self.dimension..(class + 1) * self.dimension]
    }

    pub fn bias(&self) -> &[f64] {
        &self.bias
    }

    pub fn bias_mut(&mut self) -> &mut [f64] {
        &mut self.bias
    }

    /// Squared Frobenius norm of the weight matrix (bias excluded).
    pub fn weight_sq_norm(&self) -> f64 {
        self.weights.iter().map(|w| w * w).sum()
    }

    pub fn scores(&self, x: &SparseVector) -> Vec<f64> {
        (0..self.n_classes).map(|k| x.dot(self.row(k)) + self.bias[k]).collect()
    }
}

/// Weight matrix stored as `scale * values` so that L2 shrinkage is O(1)
/// per step while data updates stay sparse.
pub(crate) struct ScaledWeights {
    values: Vec<f64>,
    scale: f64,
    dimension: usize,
}

impl ScaledWeights {
    const MIN_SCALE: f64 = 1e-9;

    pub fn zeros(n_classes: usize, dimension: usize) -> ScaledWeights {
        ScaledWeights {
            values: vec![0.0; n_classes * dimension],
            scale: 1.0,
            dimension,
        }
    }

    pub fn dot(&self, class: usize, x: &SparseVector) -> f64 {
        let row = &self.values[class * self.dimension..(class + 1) * self.dimension];
        self.scale * x.dot(row)
    }

    /// Multiplies every weight by `factor` (in `(0, 1]`).
    pub fn shrink(&mut self, factor: f64) {
        self.scale *= factor;
        if self.scale < Self::MIN_SCALE {
            for v in &mut self.values {
                *v *= self.scale;
            }
            self.scale = 1.0;
        }
    }

    /// `W[class] += coef * x`
    pub fn add(&mut self, class: usize, x: &SparseVector, coef: f64) {
        let step = coef / self.scale;
        let base = class * self.dimension;
        for (i, w) in x.iter() {
            self.values[base + i] += step * w;
        }
    }

    pub fn to_dense(&self) -> Vec<f64> {
        self.values.iter().map(|v| v * self.scale).collect()
    }
}
