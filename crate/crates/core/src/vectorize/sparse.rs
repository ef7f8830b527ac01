use std::fmt;

/// Sparse real vector with strictly increasing indices and no stored zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseVector {
    dimension: usize,
    entries: Vec<(usize, f64)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SparseError {
    OutOfRange { index: usize, dimension: usize },
    Unsorted { index: usize },
}

impl fmt::Display for SparseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SparseError::OutOfRange { index, dimension } => {
                write!(f, "index {index} out of range for dimension {dimension}")
            }
            SparseError::Unsorted { index } => write!(f, "index {index} is not strictly increasing"),
        }
    }
}

impl std::error::Error for SparseError {}

impl SparseVector {
    pub fn zeros(dimension: usize) -> SparseVector {
        SparseVector {
            dimension,
            entries: Vec::new(),
        }
    }

    /// Builds a vector from `(index, weight)` pairs in strictly increasing
    /// index order. Zero weights are dropped.
    pub fn new(dimension: usize, entries: Vec<(usize, f64)>) -> Result<SparseVector, SparseError> {
        let mut prev: Option<usize> = None;
        for &(index, _) in &entries {
            if index >= dimension {
                return Err(SparseError::OutOfRange { index, dimension });
            }
            if prev.is_some_and(|p| p >= index) {
                return Err(SparseError::Unsorted { index });
            }
            prev = Some(index);
        }
        let entries = entries.into_iter().filter(|&(_, w)| w != 0.0).collect();
        Ok(SparseVector { dimension, entries })
    }

    pub fn from_dense(values: &[f64]) -> SparseVector {
        let entries = values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0.0)
            .map(|(i, &v)| (i, v))
            .collect();
        SparseVector {
            dimension: values.len(),
            entries,
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.entries.iter().copied()
    }

    /// Weight at `index`, zero when absent.
    pub fn get(&self, index: usize) -> f64 {
        self.entries
            .binary_search_by_key(&index, |&(i, _)| i)
            .map_or(0.0, |pos| self.entries[pos].1)
    }

    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|&(_, w)| w * w).sum::<f64>().sqrt()
    }

    /// Dot product with a dense slice of at least `dimension` values.
    pub fn dot(&self, dense: &[f64]) -> f64 {
        self.entries.iter().map(|&(i, w)| w * dense[i]).sum()
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.dimension];
        for &(i, w) in &self.entries {
            out[i] = w;
        }
        out
    }

    /// Divides by the L2 norm; the zero vector is left unchanged.
    pub fn normalize(&mut self) {
        let norm = self.norm();
        if norm > 0.0 {
            for (_, w) in &mut self.entries {
                *w /= norm;
            }
        }
    }

    pub fn scaled(&self, factor: f64) -> SparseVector {
        let entries = self
            .entries
            .iter()
            .map(|&(i, w)| (i, w * factor))
            .filter(|&(_, w)| w != 0.0)
            .collect();
        SparseVector {
            dimension: self.dimension,
            entries,
        }
    }
}
