//! Text tables and CSV files for run results, curves and regret.

use std::fs::File;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::harness::{Aggregate, RegretReport, RunRecord};

pub const RESULTS_HEADER: [&str; 8] = [
    "dataset",
    "algorithm",
    "seed",
    "n",
    "mistakes",
    "mistake_rate",
    "updates",
    "elapsed_seconds",
];
pub const CURVES_HEADER: [&str; 7] = [
    "dataset",
    "algorithm",
    "seed",
    "t",
    "cum_mistakes",
    "cum_updates",
    "cum_seconds",
];
pub const REGRET_HEADER: [&str; 5] = [
    "T",
    "online_loss",
    "comparator_loss",
    "regret",
    "bound_value",
];

/// Aligned table: `algorithm | mistake | #updates | time (s)`, each `mean +/- std`.
pub fn format_table(aggregates: &[Aggregate]) -> String {
    let header = ["algorithm", "mistake", "#updates", "time (s)"];
    let rows: Vec<[String; 4]> = aggregates
        .iter()
        .map(|a| {
            [
                a.algorithm.clone(),
                format!("{:.3} +/-{:.3}", a.mistake_rate.mean, a.mistake_rate.std),
                format!("{:.1} +/-{:.1}", a.updates.mean, a.updates.std),
                format!("{:.3} +/-{:.3}", a.seconds.mean, a.seconds.std),
            ]
        })
        .collect();
    let mut widths = header.map(str::len);
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: [&str; 4]| {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect::<Vec<_>>()
            .join(" | ")
            .trim_end()
            .to_string()
    };
    let mut out = String::new();
    if let Some(a) = aggregates.first() {
        out.push_str(&format!(
            "dataset: {} (n={}, runs={})\n",
            a.dataset, a.n, a.runs
        ));
    }
    out.push_str(&line(header));
    out.push('\n');
    out.push_str(
        &widths
            .iter()
            .map(|w| "-".repeat(*w))
            .collect::<Vec<_>>()
            .join("-+-"),
    );
    out.push('\n');
    for row in &rows {
        out.push_str(&line([&row[0], &row[1], &row[2], &row[3]]));
        out.push('\n');
    }
    out
}

pub fn write_results_csv<W: Write>(records: &[RunRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RESULTS_HEADER)?;
    for r in records {
        w.write_record([
            r.dataset.clone(),
            r.algorithm.clone(),
            r.seed.to_string(),
            r.n.to_string(),
            r.mistakes.to_string(),
            r.mistake_rate().to_string(),
            r.updates.to_string(),
            r.elapsed_seconds.to_string(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// One row of a results CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub dataset: String,
    pub algorithm: String,
    pub seed: u64,
    pub n: usize,
    pub mistakes: usize,
    pub mistake_rate: f64,
    pub updates: usize,
    pub elapsed_seconds: f64,
}

pub fn read_results_csv<R: Read>(input: R) -> Result<Vec<ResultRow>> {
    let mut rdr = csv::Reader::from_reader(input);
    let headers = rdr.headers()?.clone();
    if headers.iter().ne(RESULTS_HEADER) {
        return Err(Error::Parse {
            line: 1,
            message: format!("unexpected results header {headers:?}"),
        });
    }
    rdr.records()
        .enumerate()
        .map(|(i, rec)| {
            let rec = rec?;
            let field = |k: usize| rec.get(k).unwrap_or_default();
            let bad = |k: usize| Error::Parse {
                line: i + 2,
                message: format!("bad {} '{}'", RESULTS_HEADER[k], field(k)),
            };
            Ok(ResultRow {
                dataset: field(0).to_string(),
                algorithm: field(1).to_string(),
                seed: field(2).parse().map_err(|_| bad(2))?,
                n: field(3).parse().map_err(|_| bad(3))?,
                mistakes: field(4).parse().map_err(|_| bad(4))?,
                mistake_rate: field(5).parse().map_err(|_| bad(5))?,
                updates: field(6).parse().map_err(|_| bad(6))?,
                elapsed_seconds: field(7).parse().map_err(|_| bad(7))?,
            })
        })
        .collect()
}

pub fn write_curves_csv<W: Write>(records: &[RunRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CURVES_HEADER)?;
    for r in records {
        for p in &r.curve {
            w.write_record([
                r.dataset.clone(),
                r.algorithm.clone(),
                r.seed.to_string(),
                p.t.to_string(),
                p.cum_mistakes.to_string(),
                p.cum_updates.to_string(),
                p.cum_seconds.to_string(),
            ])?;
        }
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn write_regret_csv<W: Write>(reports: &[RegretReport], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(REGRET_HEADER)?;
    for r in reports {
        w.write_record([
            r.horizon.to_string(),
            r.online_loss.to_string(),
            r.comparator_loss.to_string(),
            r.regret.to_string(),
            r.bound_value.to_string(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Where [`emit_results`] writes; `None` skips that output.
#[derive(Debug, Clone, Default)]
pub struct OutputPaths {
    pub table: Option<PathBuf>,
    pub results_csv: Option<PathBuf>,
    pub curves_csv: Option<PathBuf>,
}

fn create(path: &Path) -> Result<File> {
    File::create(path).map_err(|e| Error::io(path, e))
}

/// Writes the table and CSV files requested in `paths`; returns the table text.
pub fn emit_results(
    aggregates: &[Aggregate],
    records: &[RunRecord],
    paths: &OutputPaths,
) -> Result<String> {
    if aggregates.is_empty() {
        return Err(Error::Empty("aggregates to report"));
    }
    let table = format_table(aggregates);
    if let Some(p) = &paths.table {
        create(p)?
            .write_all(table.as_bytes())
            .map_err(|e| Error::io(p, e))?;
    }
    if let Some(p) = &paths.results_csv {
        write_results_csv(records, create(p)?)?;
    }
    if let Some(p) = &paths.curves_csv {
        write_curves_csv(records, create(p)?)?;
    }
    Ok(table)
}

pub fn emit_regret(reports: &[RegretReport], path: &Path) -> Result<()> {
    write_regret_csv(reports, create(path)?)
}
