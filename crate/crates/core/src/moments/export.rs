use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest Fisher eigenvalue and Cramér–Rao diagonal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FimRecord {
    pub lambda_min: f64,
    pub crb_diag: Vec<f64>,
}

/// Write a complex matrix row-major, each entry as a `re,im` column pair.
pub fn write_matrix_csv(m: &DMatrix<Complex64>, path: &Path) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(path)?;
    for r in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols())
            .flat_map(|c| [m[(r, c)].re.to_string(), m[(r, c)].im.to_string()])
            .collect();
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_matrix_csv(path: &Path) -> Result<DMatrix<Complex64>> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_path(path)?;
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    for record in r.records() {
        let record = record?;
        let vals = record
            .iter()
            .map(|f| {
                f.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Config(format!("bad matrix entry {f:?}: {e}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        if vals.len() % 2 != 0 {
            return Err(Error::Config("odd number of fields in matrix row".into()));
        }
        rows.push(vals.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect());
    }
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::Config("ragged matrix rows".into()));
    }
    Ok(DMatrix::from_fn(rows.len(), ncols, |r, c| rows[r][c]))
}
