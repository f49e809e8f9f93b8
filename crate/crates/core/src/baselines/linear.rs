//! First-order multiclass learners: Perceptron and PA-I.

use crate::baselines::BaselineConfig;
use crate::error::Result;
use crate::learner::{OnlineLearner, Step};
use crate::linalg::{SparseVector, WeightMatrix};
use crate::multiclass::{self, check_label, hinge_from_margin, ClassLabel};

fn shift_rows(w: &mut WeightMatrix, x: &SparseVector, up: ClassLabel, down: ClassLabel, tau: f64) {
    let row = w.row_mut(up.index());
    for (j, v) in x.iter() {
        row[j] += tau * v;
    }
    let row = w.row_mut(down.index());
    for (j, v) in x.iter() {
        row[j] -= tau * v;
    }
}

/// Mistake-driven update: on a wrong prediction `r`, row `y` gains `x` and row `r` loses it.
pub fn perceptron_update(w: &mut WeightMatrix, x: &SparseVector, y: ClassLabel) -> Result<Step> {
    check_label(y, w.rows())?;
    let s = multiclass::scores(w, x)?;
    let predicted = multiclass::predict(&s)?;
    let updated = predicted != y;
    if updated {
        shift_rows(w, x, y, predicted, 1.0);
    }
    Ok(Step { predicted, updated })
}

/// PA-I: step `tau = min(C, loss / (2 ||x||^2))` against the top rival.
pub fn pa1_update(w: &mut WeightMatrix, x: &SparseVector, y: ClassLabel, c: f64) -> Result<Step> {
    check_label(y, w.rows())?;
    let s = multiclass::scores(w, x)?;
    let predicted = multiclass::predict(&s)?;
    let rival = multiclass::top_rival(&s, y)?;
    let loss = hinge_from_margin(s[y.index()] - s[rival.index()]);
    let sq = x.squared_norm();
    let updated = loss > 0.0 && sq > 0.0;
    if updated {
        let tau = c.min(loss / (2.0 * sq));
        shift_rows(w, x, y, rival, tau);
    }
    Ok(Step { predicted, updated })
}

#[derive(Debug, Clone)]
pub struct PerceptronLearner {
    w: WeightMatrix,
}

impl PerceptronLearner {
    pub fn new(classes: usize, features: usize) -> Result<Self> {
        Ok(Self {
            w: WeightMatrix::zeros(classes, features)?,
        })
    }

    pub fn weights(&self) -> &WeightMatrix {
        &self.w
    }
}

impl OnlineLearner for PerceptronLearner {
    fn name(&self) -> &'static str {
        "perceptron"
    }

    fn observe(&mut self, x: &SparseVector, y: ClassLabel) -> Result<Step> {
        perceptron_update(&mut self.w, x, y)
    }

    fn parameter_count(&self) -> usize {
        self.w.len()
    }
}

#[derive(Debug, Clone)]
pub struct Pa1Learner {
    w: WeightMatrix,
    c: f64,
}

impl Pa1Learner {
    pub fn new(classes: usize, features: usize, cfg: &BaselineConfig) -> Result<Self> {
        cfg.validate_c()?;
        Ok(Self {
            w: WeightMatrix::zeros(classes, features)?,
            c: cfg.c,
        })
    }

    pub fn weights(&self) -> &WeightMatrix {
        &self.w
    }
}

impl OnlineLearner for Pa1Learner {
    fn name(&self) -> &'static str {
        "pa1"
    }

    fn observe(&mut self, x: &SparseVector, y: ClassLabel) -> Result<Step> {
        pa1_update(&mut self.w, x, y, self.c)
    }

    fn parameter_count(&self) -> usize {
        self.w.len()
    }
}
