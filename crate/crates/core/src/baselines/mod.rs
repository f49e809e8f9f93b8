//! Comparison learners: Perceptron, PA-I and the diagonal confidence-weighted family.

mod confidence;
mod linear;
mod probit;

pub use confidence::{
    arow_update, cw_alpha, cw_update, margin_stats, scw_alpha, scw_beta, scw_update, ArowLearner,
    CwLearner, GaussianState, MarginStats, ScwLearner, ScwVariant,
};
pub use linear::{pa1_update, perceptron_update, Pa1Learner, PerceptronLearner};
pub use probit::inverse_normal_cdf;

use crate::error::{Error, Result};

pub const DEFAULT_C: f64 = 1.0;
pub const DEFAULT_R: f64 = 1.0;
pub const DEFAULT_ETA_CONF: f64 = 0.75;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaselineConfig {
    /// Aggressiveness for PA-I and SCW.
    pub c: f64,
    /// AROW regularizer.
    pub r: f64,
    /// Confidence level for CW/SCW; `phi = Phi^{-1}(eta_conf)`.
    pub eta_conf: f64,
}

impl Default for BaselineConfig {
    fn default() -> Self {
        Self {
            c: DEFAULT_C,
            r: DEFAULT_R,
            eta_conf: DEFAULT_ETA_CONF,
        }
    }
}

impl BaselineConfig {
    pub fn phi(&self) -> f64 {
        inverse_normal_cdf(self.eta_conf)
    }

    pub(crate) fn validate_c(&self) -> Result<()> {
        if !(self.c > 0.0) {
            return Err(Error::Config(format!("C must be > 0, got {}", self.c)));
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_c()?;
        if !(self.r > 0.0) {
            return Err(Error::Config(format!("r must be > 0, got {}", self.r)));
        }
        if !(self.eta_conf > 0.5 && self.eta_conf < 1.0) {
            return Err(Error::Config(format!(
                "eta_conf must lie in (0.5, 1), got {}",
                self.eta_conf
            )));
        }
        Ok(())
    }
}
