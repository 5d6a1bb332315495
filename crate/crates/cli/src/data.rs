//! Synthetic dataset generators and the numeric CSV format (RFC-4180
//! subset: comma separated, `.` decimal, no quoting).

use std::fs;
use std::io::Write;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use ohclust_core::Dataset;

use crate::{Error, Result};

/// Parameters of an isotropic Gaussian mixture: `clusters` centers drawn
/// uniformly in `[0, separation]^dim`, `n` points assigned round-robin to
/// the centers, shuffled, and jittered with per-coordinate standard
/// deviation `spread`.
#[derive(Clone, Debug, PartialEq)]
pub struct GmmSpec {
    pub clusters: usize,
    pub dim: usize,
    pub n: usize,
    pub spread: f64,
    pub separation: f64,
    pub seed: u64,
}

impl GmmSpec {
    fn validate(&self) -> Result<()> {
        if self.clusters < 1 || self.n < self.clusters {
            return Err(Error::InvalidSpec(format!(
                "need n >= clusters >= 1, got n={} clusters={}",
                self.n, self.clusters
            )));
        }
        if self.dim < 1 {
            return Err(Error::InvalidSpec("dimension must be positive".into()));
        }
        if !(self.spread > 0.0) {
            return Err(Error::InvalidSpec(format!("spread must be positive, got {}", self.spread)));
        }
        if !(self.separation >= 0.0) {
            return Err(Error::InvalidSpec(format!(
                "separation must be nonnegative, got {}",
                self.separation
            )));
        }
        Ok(())
    }
}

/// Draw a mixture sample and its ground-truth labels. Bitwise
/// deterministic for a given spec. Labels are carried for provenance only;
/// no algorithm in this workspace consumes them.
pub fn generate_gmm(spec: &GmmSpec) -> Result<(Dataset, Vec<usize>)> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let centers: Vec<Vec<f64>> = (0..spec.clusters)
        .map(|_| (0..spec.dim).map(|_| rng.random_range(0.0..=spec.separation)).collect())
        .collect();
    let mut labels: Vec<usize> = (0..spec.n).map(|i| i % spec.clusters).collect();
    labels.shuffle(&mut rng);
    let noise = Normal::new(0.0, spec.spread)
        .map_err(|e| Error::InvalidSpec(format!("bad spread: {e}")))?;
    let mut data = Dataset::new(spec.dim);
    for &label in &labels {
        let point: Vec<f64> =
            centers[label].iter().map(|c| c + noise.sample(&mut rng)).collect();
        data.push(&point)?;
    }
    Ok((data, labels))
}

/// `n` points uniform in the unit square, the scaling benchmark workload.
pub fn generate_uniform_square(n: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut data = Dataset::new(2);
    for _ in 0..n {
        data.push(&[rng.random_range(0.0..1.0), rng.random_range(0.0..1.0)])
            .expect("fixed dimension");
    }
    data
}

/// Load a rectangular numeric CSV, one point per row. With
/// `trailing_labels`, the last column is split off and returned
/// separately. Errors carry 1-based row/column positions.
pub fn load_csv(path: &Path, trailing_labels: bool) -> Result<(Dataset, Option<Vec<f64>>)> {
    let text = fs::read_to_string(path)?;
    let err = |row: usize, col: usize, msg: String| Error::CsvParse {
        path: path.display().to_string(),
        row,
        col,
        msg,
    };

    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width = None;
    for (line_no, line) in text.lines().enumerate() {
        let row = line_no + 1;
        if line.trim().is_empty() {
            continue;
        }
        let mut values = Vec::new();
        for (col_no, cell) in line.split(',').enumerate() {
            let value: f64 = cell
                .trim()
                .parse()
                .map_err(|_| err(row, col_no + 1, format!("non-numeric cell {:?}", cell.trim())))?;
            values.push(value);
        }
        match width {
            None => width = Some(values.len()),
            Some(w) if w != values.len() => {
                return Err(err(row, values.len(), format!("expected {w} columns, got {}", values.len())))
            }
            _ => {}
        }
        rows.push(values);
    }
    let width = width.unwrap_or(0);
    let label_cols = usize::from(trailing_labels);
    if width <= label_cols {
        return Err(err(1, 1, "no feature columns".into()));
    }

    let mut labels = trailing_labels.then(Vec::new);
    let mut data = Dataset::new(width - label_cols);
    for mut row in rows {
        if let Some(labels) = labels.as_mut() {
            labels.push(row.pop().expect("checked width"));
        }
        data.push(&row)?;
    }
    Ok((data, labels))
}

/// Write a dataset as numeric CSV. Values print in shortest form that
/// parses back to the identical float, so save/load round-trips exactly.
pub fn save_csv(data: &Dataset, path: &Path) -> Result<()> {
    let mut out = Vec::with_capacity(data.len() * data.dim() * 8);
    for point in data.points() {
        for (i, x) in point.iter().enumerate() {
            if i > 0 {
                out.push(b',');
            }
            write!(out, "{x}")?;
        }
        out.push(b'\n');
    }
    fs::write(path, out)?;
    Ok(())
}

/// Write ground-truth labels, one per line.
pub fn save_labels(labels: &[usize], path: &Path) -> Result<()> {
    let mut out = Vec::with_capacity(labels.len() * 4);
    for label in labels {
        writeln!(out, "{label}")?;
    }
    fs::write(path, out)?;
    Ok(())
}
