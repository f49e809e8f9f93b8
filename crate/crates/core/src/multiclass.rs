//! Multiclass scoring, argmax prediction and the top-rival hinge loss.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{SparseVector, WeightMatrix};

/// Dense 0-based class id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassLabel(usize);

impl ClassLabel {
    /// Checked constructor; `id` must be below `classes`.
    pub fn new(id: usize, classes: usize) -> Result<Self> {
        if id >= classes {
            return Err(Error::InvalidLabel { label: id, classes });
        }
        Ok(Self(id))
    }

    /// Unchecked; the caller guarantees `id < m` for the model it is used with.
    #[inline]
    pub const fn from_index(id: usize) -> Self {
        Self(id)
    }

    #[inline]
    pub const fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub(crate) fn check_input(w: &WeightMatrix, x: &SparseVector) -> Result<()> {
    if x.dim() != w.cols() {
        return Err(Error::DimensionMismatch {
            what: "feature dimension vs weight columns",
            expected: w.cols(),
            actual: x.dim(),
        });
    }
    Ok(())
}

pub(crate) fn check_label(y: ClassLabel, classes: usize) -> Result<()> {
    if y.index() >= classes {
        return Err(Error::InvalidLabel {
            label: y.index(),
            classes,
        });
    }
    Ok(())
}

/// One score per class: `s_c = <W[c,:], x>`.
pub fn scores(w: &WeightMatrix, x: &SparseVector) -> Result<Vec<f64>> {
    let mut out = vec![0.0; w.rows()];
    scores_into(w, x, &mut out)?;
    Ok(out)
}

/// [`scores`] writing into a caller-owned buffer of length `m`.
pub fn scores_into(w: &WeightMatrix, x: &SparseVector, out: &mut [f64]) -> Result<()> {
    check_input(w, x)?;
    if out.len() != w.rows() {
        return Err(Error::DimensionMismatch {
            what: "score buffer",
            expected: w.rows(),
            actual: out.len(),
        });
    }
    for (c, s) in out.iter_mut().enumerate() {
        *s = x.dot_dense(w.row(c));
    }
    if out.iter().any(|s| !s.is_finite()) {
        return Err(Error::NonFinite("class scores"));
    }
    Ok(())
}

/// Argmax over class scores; ties go to the lowest class id.
pub fn predict(s: &[f64]) -> Result<ClassLabel> {
    if s.is_empty() {
        return Err(Error::Empty("score vector"));
    }
    Ok(ClassLabel(argmax_excluding(s, None)))
}

/// Highest-scoring class other than `y`; ties go to the lowest class id.
pub fn top_rival(s: &[f64], y: ClassLabel) -> Result<ClassLabel> {
    if s.len() < 2 {
        return Err(Error::TooFewClasses(s.len()));
    }
    check_label(y, s.len())?;
    Ok(ClassLabel(argmax_excluding(s, Some(y.index()))))
}

/// `max(0, 1 - (s_y - s_r))` with `r` the top rival of `y`.
pub fn hinge_loss(s: &[f64], y: ClassLabel) -> Result<f64> {
    let r = top_rival(s, y)?;
    Ok(hinge_from_margin(s[y.index()] - s[r.index()]))
}

#[inline]
pub(crate) fn hinge_from_margin(margin: f64) -> f64 {
    (1.0 - margin).max(0.0)
}

#[inline]
fn argmax_excluding(s: &[f64], skip: Option<usize>) -> usize {
    let mut best = usize::MAX;
    let mut best_score = f64::NEG_INFINITY;
    for (c, &v) in s.iter().enumerate() {
        if Some(c) == skip {
            continue;
        }
        // strict comparison keeps the lowest id on ties
        if best == usize::MAX || v > best_score {
            best = c;
            best_score = v;
        }
    }
    best
}
