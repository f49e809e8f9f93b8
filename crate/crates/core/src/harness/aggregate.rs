use crate::error::{Error, Result};
use crate::harness::RunRecord;

/// Mean and sample standard deviation (`n - 1` denominator; 0 for one value).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stat {
    pub mean: f64,
    pub std: f64,
}

impl Stat {
    pub fn of(values: &[f64]) -> Self {
        // sorted so the result does not depend on record order
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        let std = if v.len() > 1 {
            (v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        Self { mean, std }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Aggregate {
    pub dataset: String,
    pub algorithm: String,
    pub n: usize,
    pub runs: usize,
    pub mistake_rate: Stat,
    pub updates: Stat,
    pub seconds: Stat,
}

/// Summarizes runs of one algorithm on one dataset.
pub fn aggregate(records: &[RunRecord]) -> Result<Aggregate> {
    let first = records
        .first()
        .ok_or(Error::Empty("run records to aggregate"))?;
    if let Some(r) = records.iter().find(|r| r.algorithm != first.algorithm) {
        return Err(Error::Aggregate(format!(
            "cannot aggregate mixed algorithms ({} and {})",
            first.algorithm, r.algorithm
        )));
    }
    if let Some(r) = records
        .iter()
        .find(|r| r.dataset != first.dataset || r.n != first.n)
    {
        return Err(Error::Aggregate(format!(
            "cannot aggregate mixed datasets ({} n={} and {} n={})",
            first.dataset, first.n, r.dataset, r.n
        )));
    }
    let rates: Vec<f64> = records.iter().map(RunRecord::mistake_rate).collect();
    let updates: Vec<f64> = records.iter().map(|r| r.updates as f64).collect();
    let seconds: Vec<f64> = records.iter().map(|r| r.elapsed_seconds).collect();
    Ok(Aggregate {
        dataset: first.dataset.clone(),
        algorithm: first.algorithm.clone(),
        n: first.n,
        runs: records.len(),
        mistake_rate: Stat::of(&rates),
        updates: Stat::of(&updates),
        seconds: Stat::of(&seconds),
    })
}
