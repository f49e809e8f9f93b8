//! Seeded synthetic multiclass streams labelled by a hidden linear model.

use crate::dataio::{Dataset, SeededRng};
use crate::error::{Error, Result};
use crate::linalg::{SparseVector, WeightMatrix};
use crate::multiclass::{self, ClassLabel};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticSpec {
    pub classes: usize,
    pub features: usize,
    pub instances: usize,
    /// Probability that a feature is nonzero.
    pub density: f64,
    /// Instances whose margin under the hidden model is below this are redrawn;
    /// `0.0` keeps everything.
    pub min_margin: f64,
    pub seed: u64,
}

impl SyntheticSpec {
    pub fn dense(classes: usize, features: usize, instances: usize, seed: u64) -> Self {
        Self {
            classes,
            features,
            instances,
            density: 1.0,
            min_margin: 0.0,
            seed,
        }
    }

    /// Linearly separable with margin `min_margin` under the hidden model.
    pub fn separable(
        classes: usize,
        features: usize,
        instances: usize,
        min_margin: f64,
        seed: u64,
    ) -> Self {
        Self {
            min_margin,
            ..Self::dense(classes, features, instances, seed)
        }
    }
}

/// Features uniform on `[-1, 1]` (kept with probability `density`), hidden
/// weights uniform on `[-1, 1]`, label = argmax of the hidden scores.
pub fn generate(spec: &SyntheticSpec) -> Result<(Dataset, WeightMatrix)> {
    if spec.instances == 0 {
        return Err(Error::Empty("synthetic stream"));
    }
    if !(spec.density > 0.0 && spec.density <= 1.0) {
        return Err(Error::Config(format!(
            "density must lie in (0, 1], got {}",
            spec.density
        )));
    }
    let mut rng = SeededRng::new(spec.seed);
    let (m, d) = (spec.classes, spec.features);
    let hidden =
        WeightMatrix::from_vec(m, d, (0..m * d).map(|_| rng.uniform(-1.0, 1.0)).collect())?;

    let mut instances = Vec::with_capacity(spec.instances);
    let mut attempts = 0usize;
    let max_attempts = spec.instances.saturating_mul(1000).max(10_000);
    while instances.len() < spec.instances {
        attempts += 1;
        if attempts > max_attempts {
            return Err(Error::Config(format!(
                "margin {} rejects almost every draw",
                spec.min_margin
            )));
        }
        let mut entries = Vec::new();
        for j in 0..d {
            if spec.density >= 1.0 || rng.unit() < spec.density {
                entries.push((j, rng.uniform(-1.0, 1.0)));
            }
        }
        let x = SparseVector::new(d, entries)?;
        let s = multiclass::scores(&hidden, &x)?;
        let y = multiclass::predict(&s)?;
        if spec.min_margin > 0.0 {
            let r = multiclass::top_rival(&s, y)?;
            if s[y.index()] - s[r.index()] < spec.min_margin {
                continue;
            }
        }
        instances.push((x, ClassLabel::new(y.index(), m)?));
    }
    let ds = Dataset::with_dense_labels(instances, d, m)?.with_name(format!(
        "synthetic-m{m}-d{d}-n{}-s{}",
        spec.instances, spec.seed
    ));
    Ok((ds, hidden))
}
