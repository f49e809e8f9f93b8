//! Common interface of every online learner and the algorithm registry.

use std::fmt;
use std::str::FromStr;

use crate::baselines::{
    ArowLearner, BaselineConfig, CwLearner, Pa1Learner, PerceptronLearner, ScwLearner, ScwVariant,
};
use crate::error::{Error, Result};
use crate::linalg::SparseVector;
use crate::mons::{MonsConfig, MonsLearner};
use crate::multiclass::ClassLabel;

/// What a learner reports for one round.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Step {
    /// Prediction made before seeing the label.
    pub predicted: ClassLabel,
    pub updated: bool,
}

pub trait OnlineLearner: Send {
    fn name(&self) -> &'static str;

    /// Predicts `x`, then learns from the revealed label `y`.
    fn observe(&mut self, x: &SparseVector, y: ClassLabel) -> Result<Step>;

    /// Number of reals held as model state.
    fn parameter_count(&self) -> usize;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Ons,
    Perceptron,
    Pa1,
    Cw,
    Arow,
    Scw1,
    Scw2,
}

impl Algorithm {
    pub const ALL: [Algorithm; 7] = [
        Algorithm::Ons,
        Algorithm::Perceptron,
        Algorithm::Pa1,
        Algorithm::Cw,
        Algorithm::Arow,
        Algorithm::Scw1,
        Algorithm::Scw2,
    ];

    /// The learners that maintain a per-weight variance.
    pub const COVARIANCE: [Algorithm; 4] = [
        Algorithm::Cw,
        Algorithm::Arow,
        Algorithm::Scw1,
        Algorithm::Scw2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Ons => "ons",
            Algorithm::Perceptron => "perceptron",
            Algorithm::Pa1 => "pa1",
            Algorithm::Cw => "cw",
            Algorithm::Arow => "arow",
            Algorithm::Scw1 => "scw1",
            Algorithm::Scw2 => "scw2",
        }
    }

    pub fn build(
        self,
        classes: usize,
        features: usize,
        cfg: &LearnerConfig,
    ) -> Result<Box<dyn OnlineLearner>> {
        let b = &cfg.baseline;
        Ok(match self {
            Algorithm::Ons => Box::new(MonsLearner::new(classes, features, cfg.mons)?),
            Algorithm::Perceptron => Box::new(PerceptronLearner::new(classes, features)?),
            Algorithm::Pa1 => Box::new(Pa1Learner::new(classes, features, b)?),
            Algorithm::Cw => Box::new(CwLearner::new(classes, features, b)?),
            Algorithm::Arow => Box::new(ArowLearner::new(classes, features, b)?),
            Algorithm::Scw1 => Box::new(ScwLearner::new(classes, features, b, ScwVariant::One)?),
            Algorithm::Scw2 => Box::new(ScwLearner::new(classes, features, b, ScwVariant::Two)?),
        })
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown algorithm '{s}' (expected one of: ons, perceptron, pa1, cw, arow, scw1, scw2)"
                ))
            })
    }
}

/// Hyperparameters for every learner.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LearnerConfig {
    pub mons: MonsConfig,
    pub baseline: BaselineConfig,
}
