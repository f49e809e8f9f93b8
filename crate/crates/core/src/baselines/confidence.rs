//! Confidence-weighted learners (CW, AROW, SCW-I, SCW-II) with a diagonal
//! Gaussian over the weights.
//!
//! Multiclass updates act on the difference feature between the true row `y`
//! and the top rival row `r`: both rows move by `+-alpha * sigma_row * x` and
//! their variances shrink where `x` is nonzero. No other row is touched.

use crate::baselines::BaselineConfig;
use crate::error::Result;
use crate::learner::{OnlineLearner, Step};
use crate::linalg::{SparseVector, WeightMatrix};
use crate::multiclass::{self, check_label, hinge_from_margin, ClassLabel};

/// Mean matrix plus per-weight variances.
#[derive(Debug, Clone)]
pub struct GaussianState {
    pub mu: WeightMatrix,
    pub sigma: WeightMatrix,
    pub hyper: BaselineConfig,
    /// `Phi^{-1}(eta_conf)`.
    pub phi: f64,
    scores: Vec<f64>,
}

impl GaussianState {
    pub fn new(classes: usize, features: usize, hyper: BaselineConfig) -> Result<Self> {
        hyper.validate()?;
        Ok(Self {
            mu: WeightMatrix::zeros(classes, features)?,
            sigma: WeightMatrix::filled(classes, features, 1.0)?,
            phi: hyper.phi(),
            hyper,
            scores: vec![0.0; classes],
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarginStats {
    /// `mu_y . x - mu_r . x`.
    pub margin: f64,
    /// `sum_j (sigma[y,j] + sigma[r,j]) x_j^2`.
    pub confidence: f64,
    pub loss: f64,
}

struct Round {
    predicted: ClassLabel,
    rival: ClassLabel,
    stats: MarginStats,
}

fn analyze(state: &mut GaussianState, x: &SparseVector, y: ClassLabel) -> Result<Round> {
    check_label(y, state.mu.rows())?;
    multiclass::scores_into(&state.mu, x, &mut state.scores)?;
    let predicted = multiclass::predict(&state.scores)?;
    let rival = multiclass::top_rival(&state.scores, y)?;
    let margin = state.scores[y.index()] - state.scores[rival.index()];
    let sy = state.sigma.row(y.index());
    let sr = state.sigma.row(rival.index());
    let confidence = x.iter().map(|(j, v)| (sy[j] + sr[j]) * v * v).sum();
    Ok(Round {
        predicted,
        rival,
        stats: MarginStats {
            margin,
            confidence,
            loss: hinge_from_margin(margin),
        },
    })
}

pub fn margin_stats(state: &GaussianState, x: &SparseVector, y: ClassLabel) -> Result<MarginStats> {
    let mut scratch = state.clone();
    Ok(analyze(&mut scratch, x, y)?.stats)
}

/// Mean step `mu[y] += alpha sigma[y] x`, `mu[r] -= alpha sigma[r] x`, using
/// the variances from before the round.
fn move_means(
    state: &mut GaussianState,
    x: &SparseVector,
    y: ClassLabel,
    r: ClassLabel,
    alpha: f64,
) {
    for (row, sign) in [(y.index(), 1.0), (r.index(), -1.0)] {
        let sigma = state.sigma.row(row);
        let mu = state.mu.row_mut(row);
        for (j, v) in x.iter() {
            mu[j] += sign * alpha * sigma[j] * v;
        }
    }
}

/// `sigma <- sigma - beta (sigma x)^2` on rows `y` and `r`.
fn shrink_rank_one(
    state: &mut GaussianState,
    x: &SparseVector,
    y: ClassLabel,
    r: ClassLabel,
    beta: f64,
) {
    for row in [y.index(), r.index()] {
        let sigma = state.sigma.row_mut(row);
        for (j, v) in x.iter() {
            let sv = sigma[j] * v;
            sigma[j] -= beta * sv * sv;
        }
    }
}

/// CW step size (variance form).
pub fn cw_alpha(margin: f64, confidence: f64, phi: f64) -> f64 {
    if !(confidence > 0.0) {
        return 0.0;
    }
    let b = 1.0 + 2.0 * phi * margin;
    let disc = b * b - 8.0 * phi * (margin - phi * confidence);
    if disc < 0.0 {
        return 0.0;
    }
    ((-b + disc.sqrt()) / (4.0 * phi * confidence)).max(0.0)
}

pub fn cw_update(state: &mut GaussianState, x: &SparseVector, y: ClassLabel) -> Result<Step> {
    let round = analyze(state, x, y)?;
    let MarginStats {
        margin, confidence, ..
    } = round.stats;
    let alpha = cw_alpha(margin, confidence, state.phi);
    let updated = alpha > 0.0;
    if updated {
        move_means(state, x, y, round.rival, alpha);
        let k = 2.0 * alpha * state.phi;
        for row in [y.index(), round.rival.index()] {
            let sigma = state.sigma.row_mut(row);
            for (j, v) in x.iter() {
                sigma[j] = 1.0 / (1.0 / sigma[j] + k * v * v);
            }
        }
    }
    Ok(Step {
        predicted: round.predicted,
        updated,
    })
}

pub fn arow_update(state: &mut GaussianState, x: &SparseVector, y: ClassLabel) -> Result<Step> {
    let round = analyze(state, x, y)?;
    let MarginStats {
        confidence, loss, ..
    } = round.stats;
    let updated = loss > 0.0;
    if updated {
        let beta = 1.0 / (confidence + state.hyper.r);
        move_means(state, x, y, round.rival, loss * beta);
        shrink_rank_one(state, x, y, round.rival, beta);
    }
    Ok(Step {
        predicted: round.predicted,
        updated,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScwVariant {
    One,
    Two,
}

/// SCW step size `alpha` for either variant.
pub fn scw_alpha(margin: f64, confidence: f64, phi: f64, c: f64, variant: ScwVariant) -> f64 {
    let (m, v) = (margin, confidence);
    if !(v > 0.0) {
        return 0.0;
    }
    let phi2 = phi * phi;
    match variant {
        ScwVariant::One => {
            let zeta = 1.0 + phi2;
            let psi = 1.0 + phi2 / 2.0;
            let radicand = m * m * phi2 * phi2 / 4.0 + v * phi2 * zeta;
            if radicand < 0.0 {
                return 0.0;
            }
            let alpha = (-m * psi + radicand.sqrt()) / (v * zeta);
            alpha.max(0.0).min(c)
        }
        ScwVariant::Two => {
            let n = v + 1.0 / (2.0 * c);
            let radicand = phi2 * m * m * v * v + 4.0 * n * v * (n + v * phi2);
            if radicand < 0.0 {
                return 0.0;
            }
            let gamma = phi * radicand.sqrt();
            let alpha = (-(2.0 * m * n + phi2 * m * v) + gamma) / (2.0 * (n * n + n * v * phi2));
            alpha.max(0.0)
        }
    }
}

/// SCW variance step `beta` matching `alpha`.
pub fn scw_beta(alpha: f64, confidence: f64, phi: f64) -> f64 {
    let avp = alpha * confidence * phi;
    let root = (avp * avp + 4.0 * confidence).sqrt();
    let u = 0.25 * (-avp + root) * (-avp + root);
    alpha * phi / (u.sqrt() + avp)
}

pub fn scw_update(
    state: &mut GaussianState,
    x: &SparseVector,
    y: ClassLabel,
    variant: ScwVariant,
) -> Result<Step> {
    let round = analyze(state, x, y)?;
    let MarginStats {
        margin,
        confidence,
        loss,
    } = round.stats;
    let alpha = if loss > 0.0 {
        scw_alpha(margin, confidence, state.phi, state.hyper.c, variant)
    } else {
        0.0
    };
    let updated = alpha > 0.0;
    if updated {
        let beta = scw_beta(alpha, confidence, state.phi);
        move_means(state, x, y, round.rival, alpha);
        shrink_rank_one(state, x, y, round.rival, beta);
    }
    Ok(Step {
        predicted: round.predicted,
        updated,
    })
}

macro_rules! gaussian_learner {
    ($ty:ident, $name:literal, $update:expr) => {
        #[derive(Debug, Clone)]
        pub struct $ty {
            state: GaussianState,
        }

        impl $ty {
            pub fn new(classes: usize, features: usize, cfg: &BaselineConfig) -> Result<Self> {
                Ok(Self {
                    state: GaussianState::new(classes, features, *cfg)?,
                })
            }

            pub fn state(&self) -> &GaussianState {
                &self.state
            }
        }

        impl OnlineLearner for $ty {
            fn name(&self) -> &'static str {
                $name
            }

            fn observe(&mut self, x: &SparseVector, y: ClassLabel) -> Result<Step> {
                $update(&mut self.state, x, y)
            }

            fn parameter_count(&self) -> usize {
                self.state.mu.len() + self.state.sigma.len()
            }
        }
    };
}

gaussian_learner!(CwLearner, "cw", cw_update);
gaussian_learner!(ArowLearner, "arow", arow_update);

#[derive(Debug, Clone)]
pub struct ScwLearner {
    state: GaussianState,
    variant: ScwVariant,
}

impl ScwLearner {
    pub fn new(
        classes: usize,
        features: usize,
        cfg: &BaselineConfig,
        variant: ScwVariant,
    ) -> Result<Self> {
        Ok(Self {
            state: GaussianState::new(classes, features, *cfg)?,
            variant,
        })
    }

    pub fn state(&self) -> &GaussianState {
        &self.state
    }
}

impl OnlineLearner for ScwLearner {
    fn name(&self) -> &'static str {
        match self.variant {
            ScwVariant::One => "scw1",
            ScwVariant::Two => "scw2",
        }
    }

    fn observe(&mut self, x: &SparseVector, y: ClassLabel) -> Result<Step> {
        scw_update(&mut self.state, x, y, self.variant)
    }

    fn parameter_count(&self) -> usize {
        self.state.mu.len() + self.state.sigma.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PHI_075: f64 = 0.674_489_750_196_081_7;

    fn lbl(i: usize) -> ClassLabel {
        ClassLabel::from_index(i)
    }

    fn fresh(m: usize, d: usize) -> GaussianState {
        GaussianState::new(m, d, BaselineConfig::default()).unwrap()
    }

    fn unit_x() -> SparseVector {
        SparseVector::from_dense(&[0.6, 0.0, 0.8]).unwrap()
    }

    #[test]
    fn margin_stats_examples() {
        let st = fresh(3, 3);
        let x = SparseVector::from_dense(&[1.0, 1.0, 0.0]).unwrap();
        let s = margin_stats(&st, &x, lbl(1)).unwrap();
        assert_eq!((s.margin, s.confidence, s.loss), (0.0, 4.0, 1.0));

        let s = margin_stats(&st, &SparseVector::zeros(3), lbl(1)).unwrap();
        assert_eq!((s.margin, s.confidence, s.loss), (0.0, 0.0, 1.0));

        let mut st = fresh(2, 1);
        st.mu.set(0, 0, 3.0);
        let s = margin_stats(&st, &SparseVector::from_dense(&[1.0]).unwrap(), lbl(0)).unwrap();
        assert_eq!((s.margin, s.loss), (3.0, 0.0));
    }

    /// Root of `(m + a v)(1 + 2 a phi v) = phi v` by bisection: the post-update
    /// mean margin equals `phi` times the post-update variance.
    fn cw_alpha_bisect(m: f64, v: f64, phi: f64) -> f64 {
        let h = |a: f64| (m + a * v) * (1.0 + 2.0 * a * phi * v) - phi * v;
        let (mut lo, mut hi) = (0.0, 1.0);
        while h(hi) < 0.0 {
            hi *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if h(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn cw_alpha_matches_scalar_root() {
        let st = fresh(2, 3);
        let stats = margin_stats(&st, &unit_x(), lbl(0)).unwrap();
        assert_eq!((stats.margin, stats.confidence), (0.0, 2.0));
        assert!((st.phi - PHI_075).abs() < 1e-8);
        let alpha = cw_alpha(0.0, 2.0, st.phi);
        let oracle = cw_alpha_bisect(0.0, 2.0, st.phi);
        assert!((alpha - oracle).abs() < 1e-12, "{alpha} vs {oracle}");
        for (m, v) in [(0.3, 1.5), (-0.5, 0.7), (-2.0, 0.1)] {
            let a = cw_alpha(m, v, PHI_075);
            assert!((a - cw_alpha_bisect(m, v, PHI_075)).abs() < 1e-10);
        }
        // constraint already satisfied
        assert_eq!(cw_alpha(2.0, 1.0, PHI_075), 0.0);
    }

    #[test]
    fn cw_no_update_on_empty_vector() {
        let mut st = fresh(2, 3);
        let step = cw_update(&mut st, &SparseVector::zeros(3), lbl(1)).unwrap();
        assert!(!step.updated);
        assert!(st.mu.as_slice().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn cw_shrinks_touched_variances_only() {
        let mut st = fresh(3, 3);
        let x = unit_x();
        assert!(cw_update(&mut st, &x, lbl(2)).unwrap().updated);
        for row in [2, 0] {
            assert!(st.sigma.get(row, 0) < 1.0);
            assert!(st.sigma.get(row, 2) < 1.0);
            assert_eq!(st.sigma.get(row, 1), 1.0);
        }
        assert!(st.sigma.row(1).iter().all(|&v| v == 1.0));
    }

    #[test]
    fn arow_scalar_example() {
        let mut st = fresh(2, 3);
        let x = unit_x();
        assert!(arow_update(&mut st, &x, lbl(0)).unwrap().updated);
        // v = 2, beta = 1/3, alpha = 1/3
        let third = 1.0 / 3.0;
        assert!((st.mu.get(0, 0) - third * 0.6).abs() < 1e-15);
        assert!((st.mu.get(1, 2) + third * 0.8).abs() < 1e-15);
        assert!((st.sigma.get(0, 0) - (1.0 - third * 0.36)).abs() < 1e-15);
    }

    #[test]
    fn arow_passive_on_zero_loss() {
        let mut st = fresh(2, 1);
        st.mu.set(0, 0, 2.0);
        let (mu, sigma) = (st.mu.clone(), st.sigma.clone());
        let step =
            arow_update(&mut st, &SparseVector::from_dense(&[1.0]).unwrap(), lbl(0)).unwrap();
        assert!(!step.updated);
        assert_eq!((st.mu, st.sigma), (mu, sigma));
    }

    /// Exact CW problem restricted to the update direction: with `w` the ratio
    /// of new to old variance, the smallest feasible mean step is
    /// `a(w) = max(0, (phi sqrt(v w) - m) / v)` and the KL divergence is
    /// `(-ln w - (1 - w) + a(w)^2 v) / 2`. Golden-section search over `w`.
    fn scw_alpha_oracle(m: f64, v: f64, phi: f64) -> f64 {
        let a_of = |w: f64| ((phi * (v * w).sqrt() - m) / v).max(0.0);
        let kl = |w: f64| 0.5 * (-w.ln() - (1.0 - w) + a_of(w).powi(2) * v);
        let g = (5f64.sqrt() - 1.0) / 2.0;
        let (mut lo, mut hi) = (1e-12, 1.0);
        for _ in 0..300 {
            let x1 = hi - g * (hi - lo);
            let x2 = lo + g * (hi - lo);
            if kl(x1) < kl(x2) {
                hi = x2;
            } else {
                lo = x1;
            }
        }
        a_of(0.5 * (lo + hi))
    }

    #[test]
    fn scw1_alpha_matches_kl_minimizer() {
        let st = fresh(2, 3);
        let alpha = scw_alpha(0.0, 2.0, st.phi, 1.0, ScwVariant::One);
        let oracle = scw_alpha_oracle(0.0, 2.0, PHI_075);
        assert!(alpha < 1.0, "unclipped case");
        assert!((alpha - oracle).abs() < 1e-7, "{alpha} vs {oracle}");
        for (m, v) in [(0.3, 1.5), (-0.5, 0.7), (0.1, 0.05)] {
            let a = scw_alpha(m, v, PHI_075, 1e9, ScwVariant::One);
            let o = scw_alpha_oracle(m, v, PHI_075);
            assert!((a - o).abs() < 1e-6 * o.max(1.0), "m={m} v={v}: {a} vs {o}");
        }
        // clipping at C
        assert_eq!(scw_alpha(-5.0, 0.5, PHI_075, 0.1, ScwVariant::One), 0.1);
    }

    #[test]
    fn scw2_tends_to_scw1_without_slack() {
        for (m, v) in [(0.0, 2.0), (0.3, 1.5), (-0.5, 0.7)] {
            let a1 = scw_alpha(m, v, PHI_075, f64::INFINITY, ScwVariant::One);
            let a2 = scw_alpha(m, v, PHI_075, 1e12, ScwVariant::Two);
            assert!((a1 - a2).abs() < 1e-9, "{a1} vs {a2}");
        }
        let soft = scw_alpha(0.0, 2.0, PHI_075, 1.0, ScwVariant::Two);
        let hard = scw_alpha(0.0, 2.0, PHI_075, 1e12, ScwVariant::Two);
        assert!(soft > 0.0 && soft < hard);
    }

    #[test]
    fn scw_beta_matches_exact_cw_variance() {
        // after the step, v_new = v (1 - beta v) must satisfy m + alpha v = phi sqrt(v_new)
        let (m, v) = (0.2, 1.3);
        let alpha = scw_alpha(m, v, PHI_075, f64::INFINITY, ScwVariant::One);
        let beta = scw_beta(alpha, v, PHI_075);
        let v_new = v * (1.0 - beta * v);
        assert!((m + alpha * v - PHI_075 * v_new.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn scw_passive_cases() {
        for variant in [ScwVariant::One, ScwVariant::Two] {
            let mut st = fresh(2, 1);
            st.mu.set(0, 0, 1.5);
            let x = SparseVector::from_dense(&[1.0]).unwrap();
            let before = st.mu.clone();
            assert!(!scw_update(&mut st, &x, lbl(0), variant).unwrap().updated);
            assert_eq!(st.mu, before);

            let mut st = fresh(2, 1);
            assert!(
                !scw_update(&mut st, &SparseVector::zeros(1), lbl(1), variant)
                    .unwrap()
                    .updated
            );
            assert_eq!(scw_alpha(0.0, 0.0, PHI_075, 1.0, variant), 0.0);
        }
    }

    #[test]
    fn scw_fires_from_zero() {
        for variant in [ScwVariant::One, ScwVariant::Two] {
            let mut st = fresh(3, 3);
            assert!(
                scw_update(&mut st, &unit_x(), lbl(1), variant)
                    .unwrap()
                    .updated
            );
            assert!(st.mu.get(1, 0) > 0.0 && st.mu.get(0, 0) < 0.0);
            assert!(st.sigma.get(1, 0) < 1.0 && st.sigma.get(1, 0) > 0.0);
        }
    }
}
