//! LIBSVM text format: `label idx:val idx:val ...` with 1-based, strictly
//! increasing feature indices. Files ending in `.gz` are decompressed.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use flate2::read::GzDecoder;

use crate::dataio::{remap_labels, Dataset};
use crate::error::{Error, Result};
use crate::linalg::SparseVector;
use crate::multiclass::ClassLabel;

struct RawLine {
    label: f64,
    entries: Vec<(usize, f64)>,
}

/// Parses a LIBSVM stream. `dim` overrides the feature count, which otherwise
/// is the largest index seen.
pub fn parse_libsvm<R: BufRead>(reader: R, dim: Option<usize>) -> Result<Dataset> {
    let mut rows = Vec::new();
    let mut max_index = 0usize;

    for (lineno, line) in reader.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line.map_err(|e| Error::Parse {
            line: lineno,
            message: format!("read failed: {e}"),
        })?;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let row = parse_line(content, lineno)?;
        if let Some(&(last, _)) = row.entries.last() {
            max_index = max_index.max(last + 1);
        }
        rows.push(row);
    }

    if rows.is_empty() {
        return Err(Error::Empty("dataset"));
    }
    let d = match dim {
        Some(d) if d < max_index => {
            return Err(Error::Config(format!(
                "dimension override {d} is smaller than the largest feature index {max_index}"
            )))
        }
        Some(d) => d,
        None => max_index,
    };
    if d == 0 {
        return Err(Error::Empty("feature set"));
    }

    let raw: Vec<f64> = rows.iter().map(|r| r.label).collect();
    let label_map = remap_labels(&raw)?;
    let m = label_map.len();
    let instances = rows
        .into_iter()
        .map(|r| {
            let id = label_map
                .id_of(r.label)
                .expect("label map built from these labels");
            Ok((
                SparseVector::new(d, r.entries)?,
                ClassLabel::new(id.index(), m)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;

    Dataset::new(instances, d, label_map)
}

fn parse_line(content: &str, line: usize) -> Result<RawLine> {
    let err = |message: String| Error::Parse { line, message };
    let mut tokens = content.split_whitespace();
    let label_tok = tokens.next().expect("nonempty line has a token");
    let label: f64 = label_tok
        .parse()
        .map_err(|_| err(format!("label '{label_tok}' is not numeric")))?;
    if !label.is_finite() {
        return Err(err(format!("label '{label_tok}' is not finite")));
    }

    let mut entries = Vec::new();
    let mut prev = 0usize;
    for tok in tokens {
        let (idx, val) = tok
            .split_once(':')
            .ok_or_else(|| err(format!("expected index:value, got '{tok}'")))?;
        let idx: usize = idx
            .parse()
            .map_err(|_| err(format!("feature index '{idx}' is not a positive integer")))?;
        if idx < 1 {
            return Err(err("feature indices are 1-based; got 0".into()));
        }
        if idx <= prev {
            return Err(err(format!(
                "feature indices must be strictly increasing ({prev} then {idx})"
            )));
        }
        let val: f64 = val
            .parse()
            .map_err(|_| err(format!("feature value '{val}' is not numeric")))?;
        if !val.is_finite() {
            return Err(err(format!("feature value '{val}' is not finite")));
        }
        prev = idx;
        entries.push((idx - 1, val));
    }
    // +0.0 so that "-0" and "0" name the same class
    Ok(RawLine {
        label: label + 0.0,
        entries,
    })
}

/// Reads a LIBSVM file from disk, gunzipping `*.gz`.
pub fn load_libsvm(path: impl AsRef<Path>, dim: Option<usize>) -> Result<Dataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let gz = path.extension().is_some_and(|e| e == "gz");
    let result = if gz {
        parse_libsvm(BufReader::new(GzDecoder::new(file)), dim)
    } else {
        parse_libsvm(BufReader::new(file), dim)
    };
    let name = path
        .file_name()
        .map(|f| f.to_string_lossy().trim_end_matches(".gz").to_string())
        .unwrap_or_default();
    result.map(|ds| ds.with_name(name)).map_err(|e| match e {
        Error::Parse { line, message } => Error::Parse {
            line,
            message: format!("{}: {message}", path.display()),
        },
        other => other,
    })
}

/// Writes `dataset` back out in LIBSVM format using the raw labels.
pub fn write_libsvm<W: Write>(dataset: &Dataset, mut out: W) -> std::io::Result<()> {
    for (x, y) in dataset.instances() {
        write!(out, "{}", dataset.label_map().raw_of(*y))?;
        for (j, v) in x.iter() {
            write!(out, " {}:{}", j + 1, v)?;
        }
        writeln!(out)?;
    }
    Ok(())
}
