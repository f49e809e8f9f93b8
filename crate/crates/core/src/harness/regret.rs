//! Empirical regret of the Newton learner against the best fixed model.
//!
//! The learner runs once over the stream in order. For each horizon `T` the
//! comparator is the minimizer of the total hinge loss over the first `T`
//! instances within the Frobenius ball holding every iterate the learner
//! visited, found offline by projected subgradient descent. The bound value is
//! `(F^2 + k^2) sqrt(T)` with `F` the largest observed distance between an
//! iterate and the comparator and `k` the largest Newton direction norm.

use crate::dataio::Dataset;
use crate::error::{Error, Result};
use crate::linalg::WeightMatrix;
use crate::mons::{MonsConfig, MonsLearner};
use crate::multiclass::{self, hinge_from_margin};

pub const COMPARATOR_ITERATIONS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegretReport {
    pub horizon: usize,
    /// `L_A(T)`: hinge losses suffered online.
    pub online_loss: f64,
    /// `L_w*(T)`.
    pub comparator_loss: f64,
    pub regret: f64,
    pub bound_value: f64,
    pub diameter: f64,
    pub direction_bound: f64,
    /// Radius of the ball the comparator was searched in.
    pub radius: f64,
    /// False when the comparator could not be verified as a minimizer.
    pub comparator_valid: bool,
}

impl RegretReport {
    pub fn per_round(&self) -> f64 {
        self.regret / self.horizon as f64
    }

    pub fn per_sqrt_round(&self) -> f64 {
        self.regret / (self.horizon as f64).sqrt()
    }

    pub fn within_bound(&self) -> bool {
        self.regret <= self.bound_value
    }
}

#[derive(Debug, Clone)]
pub struct Comparator {
    pub weights: WeightMatrix,
    pub loss: f64,
    pub converged: bool,
}

/// Total multiclass hinge loss of a fixed model over `instances`.
pub fn total_hinge(w: &WeightMatrix, data: &Dataset, upto: usize) -> Result<f64> {
    let mut total = 0.0;
    let mut s = vec![0.0; w.rows()];
    for (x, y) in &data.instances()[..upto] {
        multiclass::scores_into(w, x, &mut s)?;
        total += multiclass::hinge_loss(&s, *y)?;
    }
    Ok(total)
}

/// Projected subgradient descent on the total hinge loss of the first `upto`
/// instances over `{W : ||W||_F <= radius}`, starting at zero with steps of
/// length `radius / sqrt(k)`. The best iterate is returned. It counts as
/// converged when the best loss reaches zero, the subgradient vanishes, or the
/// best loss improves by at most 0.1% over the second half of the iterations.
pub fn batch_comparator(
    data: &Dataset,
    upto: usize,
    radius: f64,
    iterations: usize,
) -> Result<Comparator> {
    let (m, d) = (data.m(), data.d());
    let mut w = WeightMatrix::zeros(m, d)?;
    let mut grad = WeightMatrix::zeros(m, d)?;
    let mut s = vec![0.0; m];
    let mut best = w.clone();
    let mut best_loss = f64::INFINITY;
    let mut best_at_half = f64::INFINITY;
    let mut stationary = false;

    for k in 1..=iterations {
        grad.scale(0.0);
        let mut loss = 0.0;
        for (x, y) in &data.instances()[..upto] {
            multiclass::scores_into(&w, x, &mut s)?;
            let r = multiclass::top_rival(&s, *y)?;
            let l = hinge_from_margin(s[y.index()] - s[r.index()]);
            if l > 0.0 {
                loss += l;
                for (j, v) in x.iter() {
                    grad.row_mut(y.index())[j] -= v;
                    grad.row_mut(r.index())[j] += v;
                }
            }
        }
        if loss < best_loss {
            best_loss = loss;
            best.clone_from(&w);
        }
        if k == iterations / 2 {
            best_at_half = best_loss;
        }
        let gnorm = grad.frobenius_norm();
        if loss == 0.0 || gnorm == 0.0 {
            stationary = true;
            break;
        }
        w.add_scaled(-radius / ((k as f64).sqrt() * gnorm), &grad);
        let norm = w.frobenius_norm();
        if norm > radius {
            w.scale(radius / norm);
        }
    }

    let converged = stationary
        || best_loss == 0.0
        || (best_at_half.is_finite() && best_at_half - best_loss <= 1e-3 * best_loss.max(1.0));
    Ok(Comparator {
        weights: best,
        loss: best_loss,
        converged,
    })
}

/// Runs the Newton learner over `stream` in order and reports regret at each
/// horizon in `horizons` (each at most `stream.n()`).
pub fn regret_report(
    cfg: &MonsConfig,
    stream: &Dataset,
    horizons: &[usize],
) -> Result<Vec<RegretReport>> {
    let max_h = horizons
        .iter()
        .copied()
        .max()
        .ok_or(Error::Empty("regret horizons"))?;
    if max_h > stream.n() || horizons.contains(&0) {
        return Err(Error::Config(format!(
            "horizons must lie in 1..={}, got {horizons:?}",
            stream.n()
        )));
    }

    let mut learner = MonsLearner::new(stream.m(), stream.d(), *cfg)?;
    // iterates[t] is the model used in round t + 1; the last entry follows round max_h
    let mut iterates = Vec::with_capacity(max_h + 1);
    let mut losses = Vec::with_capacity(max_h);
    let mut directions = Vec::with_capacity(max_h);
    for (x, y) in &stream.instances()[..max_h] {
        iterates.push(learner.state().weights().clone());
        let out = learner.step(x, *y)?;
        losses.push(out.loss);
        directions.push(out.direction_norm);
    }
    iterates.push(learner.state().weights().clone());

    horizons
        .iter()
        .map(|&t| {
            let visited = &iterates[..=t];
            let radius = visited
                .iter()
                .map(WeightMatrix::frobenius_norm)
                .fold(0.0, f64::max)
                .max(f64::MIN_POSITIVE);
            let comp = batch_comparator(stream, t, radius, COMPARATOR_ITERATIONS)?;

            // a point known to be feasible must not beat the comparator
            let final_loss = total_hinge(&iterates[t], stream, t)?;
            let zero_loss = t as f64;
            let tol = 1e-6 * comp.loss.max(1.0);
            let dominated = comp.loss <= final_loss + tol && comp.loss <= zero_loss + tol;

            let online_loss: f64 = losses[..t].iter().sum();
            let diameter = visited
                .iter()
                .map(|w| w.distance(&comp.weights))
                .fold(0.0, f64::max);
            let direction_bound = directions[..t].iter().copied().fold(0.0, f64::max);
            let regret = online_loss - comp.loss;
            Ok(RegretReport {
                horizon: t,
                online_loss,
                comparator_loss: comp.loss,
                regret,
                bound_value: (diameter * diameter + direction_bound * direction_bound)
                    * (t as f64).sqrt(),
                diameter,
                direction_bound,
                radius,
                comparator_valid: comp.converged && dominated,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::synthetic::{generate, SyntheticSpec};
    use crate::linalg::SparseVector;
    use crate::multiclass::ClassLabel;

    #[test]
    fn zero_model_optimal_gives_nonpositive_regret() {
        // every instance has x = 0: all scores stay 0, every model loses 1 per round
        let instances = (0..50)
            .map(|i| (SparseVector::zeros(3), ClassLabel::from_index(i % 2)))
            .collect();
        let ds = Dataset::with_dense_labels(instances, 3, 2).unwrap();
        let rep = regret_report(&MonsConfig::default(), &ds, &[50]).unwrap();
        assert!(rep[0].regret <= 0.0);
        assert_eq!(rep[0].online_loss, 50.0);
        assert!(rep[0].comparator_valid);
    }

    #[test]
    fn comparator_separates_separable_data() {
        let (ds, hidden) = generate(&SyntheticSpec::separable(3, 5, 200, 1.0, 2)).unwrap();
        let radius = 2.0 * hidden.frobenius_norm();
        let c = batch_comparator(&ds, 200, radius, COMPARATOR_ITERATIONS).unwrap();
        assert!(c.converged);
        assert!(c.loss <= total_hinge(&hidden, &ds, 200).unwrap());
        assert!(c.weights.frobenius_norm() <= radius * (1.0 + 1e-12));
    }

    #[test]
    fn bad_horizons() {
        let (ds, _) = generate(&SyntheticSpec::separable(3, 5, 20, 1.0, 2)).unwrap();
        assert!(regret_report(&MonsConfig::default(), &ds, &[]).is_err());
        assert!(regret_report(&MonsConfig::default(), &ds, &[21]).is_err());
        assert!(regret_report(&MonsConfig::default(), &ds, &[0]).is_err());
    }
}
