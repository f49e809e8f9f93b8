//! Online Newton step with element-wise `m x d` first and second order matrices.
//!
//! Each round scores the instance, predicts by argmax and, when the
//! multiclass hinge loss is positive, takes the step
//!
//! ```text
//! p_c    = sigmoid(ytilde_c * (W x)_c)
//! b[c,j] = -ytilde_c * x_j * p_c (1 - p_c) + lambda * W[c,j]
//! A[c,j] =  x_j^2 * p_c (1 - p_c) + lambda
//! W     <- W - eta_t * (b / A)            (element-wise division)
//! ```
//!
//! with `ytilde` the one-vs-all signed labels and `eta_t = eta_scale / sqrt(t)`.
//! `b - lambda W` is the exact gradient of `sum_c sigmoid(-ytilde_c (W x)_c)` and
//! `A - lambda` the diagonal curvature of the per-class logistic loss, so `A`
//! never drops below `lambda` and the division is always safe. Nothing larger
//! than `m x d` is ever stored.

use crate::error::{Error, Result};
use crate::learner::{OnlineLearner, Step};
use crate::linalg::{SparseVector, WeightMatrix};
use crate::multiclass::{self, check_input, check_label, ClassLabel};

pub const DEFAULT_LAMBDA: f64 = 0.001;
pub const DEFAULT_ETA_SCALE: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonsConfig {
    /// Regularizer and curvature floor; must be strictly positive.
    pub lambda: f64,
    /// Step numerator: `eta_t = eta_scale / sqrt(t)`.
    pub eta_scale: f64,
}

impl Default for MonsConfig {
    fn default() -> Self {
        Self {
            lambda: DEFAULT_LAMBDA,
            eta_scale: DEFAULT_ETA_SCALE,
        }
    }
}

impl MonsConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::Config(format!(
                "lambda must be finite and > 0, got {}",
                self.lambda
            )));
        }
        if !(self.eta_scale > 0.0 && self.eta_scale.is_finite()) {
            return Err(Error::Config(format!(
                "eta_scale must be finite and > 0, got {}",
                self.eta_scale
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct MonsState {
    w: WeightMatrix,
    rounds: u64,
    updates: u64,
    scores: Vec<f64>,
    curvature: Vec<f64>,
    patch: Vec<f64>,
}

impl MonsState {
    /// Zero weights, no rounds seen.
    pub fn new(classes: usize, features: usize) -> Result<Self> {
        Ok(Self {
            w: WeightMatrix::zeros(classes, features)?,
            rounds: 0,
            updates: 0,
            scores: vec![0.0; classes],
            curvature: vec![0.0; classes],
            patch: Vec::new(),
        })
    }

    pub fn from_weights(w: WeightMatrix) -> Self {
        let m = w.rows();
        Self {
            w,
            rounds: 0,
            updates: 0,
            scores: vec![0.0; m],
            curvature: vec![0.0; m],
            patch: Vec::new(),
        }
    }

    pub fn weights(&self) -> &WeightMatrix {
        &self.w
    }

    /// Instances processed so far.
    pub fn rounds(&self) -> u64 {
        self.rounds
    }

    pub fn updates(&self) -> u64 {
        self.updates
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOutcome {
    pub predicted: ClassLabel,
    pub loss: f64,
    pub updated: bool,
    /// Frobenius norm of the Newton direction; zero on passive rounds.
    pub direction_norm: f64,
}

/// Logistic function, evaluated without overflow for any finite `z`.
#[inline]
pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `+1` at the true class, `-1` everywhere else.
pub fn signed_labels(y: ClassLabel, classes: usize) -> Result<Vec<f64>> {
    check_label(y, classes)?;
    Ok((0..classes)
        .map(|c| if c == y.index() { 1.0 } else { -1.0 })
        .collect())
}

/// `p_c = sigmoid(ytilde_c * (W x)_c)`.
pub fn margin_probabilities(
    w: &WeightMatrix,
    x: &SparseVector,
    ytilde: &[f64],
) -> Result<Vec<f64>> {
    check_signed(w.rows(), ytilde)?;
    let s = multiclass::scores(w, x)?;
    Ok(s.iter()
        .zip(ytilde)
        .map(|(s, yt)| sigmoid(yt * s))
        .collect())
}

#[inline(always)]
fn b_entry(yt: f64, xj: f64, q: f64, lambda: f64, w: f64) -> f64 {
    lambda * w - yt * xj * q
}

#[inline(always)]
fn a_entry(xj: f64, q: f64, lambda: f64) -> f64 {
    xj * xj * q + lambda
}

/// First-order matrix `b`.
pub fn matrix_b(
    w: &WeightMatrix,
    x: &SparseVector,
    ytilde: &[f64],
    lambda: f64,
) -> Result<WeightMatrix> {
    let p = margin_probabilities(w, x, ytilde)?;
    let mut b = w.clone();
    for c in 0..w.rows() {
        let q = p[c] * (1.0 - p[c]);
        let yt = ytilde[c];
        let row = b.row_mut(c);
        for v in row.iter_mut() {
            *v *= lambda;
        }
        for (j, xj) in x.iter() {
            row[j] = b_entry(yt, xj, q, lambda, w.get(c, j));
        }
    }
    if !b.is_finite() {
        return Err(Error::NonFinite("first-order matrix b"));
    }
    Ok(b)
}

/// Second-order matrix `A`, one row per entry of `p`.
pub fn matrix_a(x: &SparseVector, p: &[f64], lambda: f64) -> Result<WeightMatrix> {
    if !(lambda > 0.0) {
        return Err(Error::Config(format!("lambda must be > 0, got {lambda}")));
    }
    let mut a = WeightMatrix::filled(p.len(), x.dim(), lambda)?;
    for (c, &pc) in p.iter().enumerate() {
        let q = pc * (1.0 - pc);
        let row = a.row_mut(c);
        for (j, xj) in x.iter() {
            row[j] = a_entry(xj, q, lambda);
        }
    }
    if !a.is_finite() {
        return Err(Error::NonFinite("second-order matrix A"));
    }
    Ok(a)
}

/// Element-wise `b / A`.
pub fn newton_direction(b: &WeightMatrix, a: &WeightMatrix) -> Result<WeightMatrix> {
    if !b.same_shape(a) {
        return Err(Error::DimensionMismatch {
            what: "b and A element count",
            expected: b.len(),
            actual: a.len(),
        });
    }
    if let Some(bad) = a.as_slice().iter().find(|v| !(**v > 0.0)) {
        return Err(Error::InvalidMatrix(format!(
            "second-order matrix entry {bad} is not positive"
        )));
    }
    let data = b
        .as_slice()
        .iter()
        .zip(a.as_slice())
        .map(|(b, a)| b / a)
        .collect();
    WeightMatrix::from_vec(b.rows(), b.cols(), data)
}

/// `eta_scale / sqrt(t)` for round `t >= 1`.
pub fn step_size(t: u64, eta_scale: f64) -> Result<f64> {
    if t == 0 {
        return Err(Error::Config(
            "step size is defined for rounds t >= 1".into(),
        ));
    }
    Ok(eta_scale / (t as f64).sqrt())
}

/// One online round: predict, measure hinge loss, update when the loss is positive.
///
/// The update is fused into a single pass over `W`; it produces exactly
/// `W - eta_t * newton_direction(matrix_b(..), matrix_a(..))`.
pub fn mons_step(
    state: &mut MonsState,
    x: &SparseVector,
    y: ClassLabel,
    cfg: &MonsConfig,
) -> Result<StepOutcome> {
    let m = state.w.rows();
    check_input(&state.w, x)?;
    check_label(y, m)?;

    multiclass::scores_into(&state.w, x, &mut state.scores)?;
    let predicted = multiclass::predict(&state.scores)?;
    let loss = multiclass::hinge_loss(&state.scores, y)?;

    state.rounds += 1;
    if loss <= 0.0 {
        return Ok(StepOutcome {
            predicted,
            loss,
            updated: false,
            direction_norm: 0.0,
        });
    }

    let eta = step_size(state.rounds, cfg.eta_scale)?;
    let lambda = cfg.lambda;
    for c in 0..m {
        let yt = if c == y.index() { 1.0 } else { -1.0 };
        let p = sigmoid(yt * state.scores[c]);
        state.curvature[c] = p * (1.0 - p);
    }

    let idx = x.indices();
    let vals = x.values();
    let mut norm2 = 0.0;
    for c in 0..m {
        let yt = if c == y.index() { 1.0 } else { -1.0 };
        let q = state.curvature[c];
        let row = state.w.row_mut(c);
        state.patch.clear();
        for (&j, &xj) in idx.iter().zip(vals) {
            let dir = b_entry(yt, xj, q, lambda, row[j]) / a_entry(xj, q, lambda);
            let reg = (lambda * row[j]) / lambda;
            norm2 += dir * dir - reg * reg;
            state.patch.push(row[j] - eta * dir);
        }
        // regularizer-only direction everywhere, feature entries overwritten after
        for wj in row.iter_mut() {
            let reg = (lambda * *wj) / lambda;
            norm2 += reg * reg;
            *wj -= eta * reg;
        }
        for (&j, &wj) in idx.iter().zip(&state.patch) {
            row[j] = wj;
        }
    }
    let norm2 = norm2.max(0.0);
    if !norm2.is_finite() || !state.w.is_finite() {
        return Err(Error::NonFinite("weights after Newton step"));
    }
    state.updates += 1;

    Ok(StepOutcome {
        predicted,
        loss,
        updated: true,
        direction_norm: norm2.sqrt(),
    })
}

fn check_signed(m: usize, ytilde: &[f64]) -> Result<()> {
    if ytilde.len() != m {
        return Err(Error::DimensionMismatch {
            what: "signed label vector",
            expected: m,
            actual: ytilde.len(),
        });
    }
    Ok(())
}

/// [`OnlineLearner`] wrapper around [`mons_step`].
#[derive(Debug, Clone)]
pub struct MonsLearner {
    state: MonsState,
    cfg: MonsConfig,
}

impl MonsLearner {
    pub fn new(classes: usize, features: usize, cfg: MonsConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            state: MonsState::new(classes, features)?,
            cfg,
        })
    }

    pub fn state(&self) -> &MonsState {
        &self.state
    }

    pub fn config(&self) -> &MonsConfig {
        &self.cfg
    }

    pub fn step(&mut self, x: &SparseVector, y: ClassLabel) -> Result<StepOutcome> {
        mons_step(&mut self.state, x, y, &self.cfg)
    }
}

impl OnlineLearner for MonsLearner {
    fn name(&self) -> &'static str {
        "ons"
    }

    fn observe(&mut self, x: &SparseVector, y: ClassLabel) -> Result<Step> {
        let out = self.step(x, y)?;
        Ok(Step {
            predicted: out.predicted,
            updated: out.updated,
        })
    }

    fn parameter_count(&self) -> usize {
        self.state.w.len()
    }
}
