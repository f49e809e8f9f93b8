use std::time::Instant;

use rayon::prelude::*;

use crate::dataio::{shuffle, Dataset};
use crate::error::{Error, Result};
use crate::learner::{Algorithm, LearnerConfig, OnlineLearner};

/// Number of curve checkpoints per run.
pub const CHECKPOINTS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub t: usize,
    pub cum_mistakes: usize,
    pub cum_updates: usize,
    pub cum_seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub dataset: String,
    pub algorithm: String,
    pub seed: u64,
    pub n: usize,
    pub mistakes: usize,
    pub updates: usize,
    /// Learning-loop wall time; parsing and setup are excluded.
    pub elapsed_seconds: f64,
    pub curve: Vec<CurvePoint>,
}

impl RunRecord {
    pub fn mistake_rate(&self) -> f64 {
        self.mistakes as f64 / self.n as f64
    }
}

/// Rounds after which the curve is sampled: `ceil(n k / 20)` for `k = 1..=20`,
/// deduplicated, always ending at `n`.
pub fn checkpoints(n: usize) -> Vec<usize> {
    let mut out: Vec<usize> = (1..=CHECKPOINTS)
        .map(|k| (n * k).div_ceil(CHECKPOINTS))
        .filter(|&t| t > 0)
        .collect();
    out.dedup();
    out
}

/// One single pass over `dataset` in the order given by `shuffle(n, seed)`.
///
/// A mistake is the learner's prediction disagreeing with the label, counted
/// before the learner sees that label.
pub fn run_online(
    learner: &mut dyn OnlineLearner,
    dataset: &Dataset,
    seed: u64,
) -> Result<RunRecord> {
    let n = dataset.n();
    let order = shuffle(n, seed)?;
    let marks = checkpoints(n);
    let instances = dataset.instances();

    let mut curve = Vec::with_capacity(marks.len());
    let mut next_mark = marks.iter().copied().peekable();
    let (mut mistakes, mut updates) = (0usize, 0usize);

    let start = Instant::now();
    for (t, idx) in order.iter().enumerate() {
        let (x, y) = &instances[idx];
        let step = learner.observe(x, *y).map_err(|e| Error::Learner {
            algorithm: learner.name().to_string(),
            round: t + 1,
            source: Box::new(e),
        })?;
        mistakes += usize::from(step.predicted != *y);
        updates += usize::from(step.updated);
        if next_mark.peek() == Some(&(t + 1)) {
            next_mark.next();
            curve.push(CurvePoint {
                t: t + 1,
                cum_mistakes: mistakes,
                cum_updates: updates,
                cum_seconds: start.elapsed().as_secs_f64(),
            });
        }
    }
    let elapsed_seconds = curve.last().map_or(0.0, |p| p.cum_seconds);

    Ok(RunRecord {
        dataset: dataset.name().to_string(),
        algorithm: learner.name().to_string(),
        seed,
        n,
        mistakes,
        updates,
        elapsed_seconds,
        curve,
    })
}

/// Runs `algorithm` once per seed, fresh learner each time, on up to `jobs`
/// worker threads. Records come back in seed order.
pub fn run_seeds(
    algorithm: Algorithm,
    cfg: &LearnerConfig,
    dataset: &Dataset,
    seeds: &[u64],
    jobs: usize,
) -> Result<Vec<RunRecord>> {
    let one = |seed: u64| -> Result<RunRecord> {
        let mut learner = algorithm.build(dataset.m(), dataset.d(), cfg)?;
        run_online(learner.as_mut(), dataset, seed)
    };
    if jobs <= 1 {
        return seeds.iter().map(|&s| one(s)).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    pool.install(|| seeds.par_iter().map(|&s| one(s)).collect())
}

/// `base, base + 1, ..., base + runs - 1`.
pub fn seed_range(base: u64, runs: usize) -> Vec<u64> {
    (0..runs as u64).map(|i| base.wrapping_add(i)).collect()
}
