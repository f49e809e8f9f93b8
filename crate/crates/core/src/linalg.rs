//! Sparse feature vectors and dense row-major class-by-feature matrices.

use crate::error::{Error, Result};

/// One instance's features as strictly increasing `(index, value)` pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseVector {
    indices: Vec<usize>,
    values: Vec<f64>,
    dim: usize,
}

impl SparseVector {
    /// Builds a vector from `(index, value)` pairs, checking order, range and finiteness.
    pub fn new(dim: usize, entries: impl IntoIterator<Item = (usize, f64)>) -> Result<Self> {
        let mut indices = Vec::new();
        let mut values = Vec::new();
        for (idx, val) in entries {
            if idx >= dim {
                return Err(Error::InvalidVector(format!(
                    "index {idx} out of range for dimension {dim}"
                )));
            }
            if let Some(&last) = indices.last() {
                if idx <= last {
                    return Err(Error::InvalidVector(format!(
                        "indices not strictly increasing ({last} then {idx})"
                    )));
                }
            }
            if !val.is_finite() {
                return Err(Error::InvalidVector(format!(
                    "value at index {idx} is not finite"
                )));
            }
            indices.push(idx);
            values.push(val);
        }
        Ok(Self {
            indices,
            values,
            dim,
        })
    }

    /// Stores every nonzero entry of a dense slice.
    pub fn from_dense(dense: &[f64]) -> Result<Self> {
        Self::new(
            dense.len(),
            dense.iter().copied().enumerate().filter(|&(_, v)| v != 0.0),
        )
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            indices: Vec::new(),
            values: Vec::new(),
            dim,
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of stored entries.
    #[inline]
    pub fn nnz(&self) -> usize {
        self.indices.len()
    }

    #[inline]
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.indices
            .iter()
            .copied()
            .zip(self.values.iter().copied())
    }

    pub fn squared_norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    /// `<row, x>` for a dense row of length `dim`.
    #[inline]
    pub fn dot_dense(&self, row: &[f64]) -> f64 {
        debug_assert_eq!(row.len(), self.dim);
        self.iter().map(|(j, v)| row[j] * v).sum()
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        Self {
            indices: self.indices.clone(),
            values: self.values.iter().map(|v| v * alpha).collect(),
            dim: self.dim,
        }
    }

    /// Same entries viewed in a (larger) feature space.
    pub fn with_dim(&self, dim: usize) -> Result<Self> {
        Self::new(dim, self.iter())
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for (j, v) in self.iter() {
            out[j] = v;
        }
        out
    }
}

/// Dense `rows x cols` matrix, row-major by class.
///
/// Holds the model weights as well as the element-wise first/second order
/// matrices and Newton directions, which all share the same shape.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl WeightMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        Self::filled(rows, cols, 0.0)
    }

    pub fn filled(rows: usize, cols: usize, value: f64) -> Result<Self> {
        check_shape(rows, cols)?;
        if !value.is_finite() {
            return Err(Error::NonFinite("matrix fill value"));
        }
        Ok(Self {
            rows,
            cols,
            data: vec![value; rows * cols],
        })
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        check_shape(rows, cols)?;
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                what: "matrix data length",
                expected: rows * cols,
                actual: data.len(),
            });
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("matrix data"));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                what: "matrix row length",
                expected: cols,
                actual: bad.len(),
            });
        }
        Self::from_vec(rows.len(), cols, rows.concat())
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.cols + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        self.data[row * self.cols + col] = value;
    }

    #[inline]
    pub fn row(&self, row: usize) -> &[f64] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, row: usize) -> &mut [f64] {
        &mut self.data[row * self.cols..(row + 1) * self.cols]
    }

    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn same_shape(&self, other: &WeightMatrix) -> bool {
        self.rows == other.rows && self.cols == other.cols
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Frobenius distance `||self - other||`.
    pub fn distance(&self, other: &WeightMatrix) -> f64 {
        debug_assert!(self.same_shape(other));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// `self += alpha * other`.
    pub fn add_scaled(&mut self, alpha: f64, other: &WeightMatrix) {
        debug_assert!(self.same_shape(other));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += alpha * b;
        }
    }

    pub fn scale(&mut self, alpha: f64) {
        self.data.iter_mut().for_each(|v| *v *= alpha);
    }
}

fn check_shape(rows: usize, cols: usize) -> Result<()> {
    if rows < 2 {
        return Err(Error::InvalidMatrix(format!(
            "need at least 2 rows, got {rows}"
        )));
    }
    if cols < 1 {
        return Err(Error::InvalidMatrix("need at least 1 column".into()));
    }
    Ok(())
}
