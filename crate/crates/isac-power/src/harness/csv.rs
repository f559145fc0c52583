//! Flat-file persistence of trial records.
//!
//! One row per (trial, threshold) cell, trial-major. Powers are printed with
//! nine significant digits; all other floats use the shortest representation
//! that round-trips exactly. Infeasible cells carry NaN metrics.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::TrialRecord;
use crate::error::{Error, Result};

/// Writes records in the fixed column layout
/// `trial,gamma_db,pt_dbm,solver,status,rate,pd,scnr_est_db,scnr_true_db,iters,p0,...,p{K-1}`.
pub fn write_csv(records: &[TrialRecord], k_paths: usize, path: &Path) -> Result<()> {
    let mut out = String::new();
    out.push_str("trial,gamma_db,pt_dbm,solver,status,rate,pd,scnr_est_db,scnr_true_db,iters");
    for k in 0..k_paths {
        let _ = write!(out, ",p{k}");
    }
    out.push('\n');

    for r in records {
        let _ = write!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.trial,
            r.gamma_db,
            r.pt_dbm,
            r.solver.as_str(),
            r.status.as_str(),
            r.rate,
            r.pd,
            r.scnr_est_db,
            r.scnr_true_db,
            r.iters
        );
        match &r.allocation {
            Some(a) => {
                debug_assert_eq!(a.len(), k_paths);
                for v in a.as_slice() {
                    let _ = write!(out, ",{v:.8e}");
                }
            }
            None => {
                for _ in 0..k_paths {
                    out.push_str(",NaN");
                }
            }
        }
        out.push('\n');
    }

    fs::write(path, out).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Reads a CSV written by [`write_csv`] (or any unquoted comma-separated
/// file): header names plus string cells per row.
pub fn read_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| Error::Csv("file is empty".into()))?
        .split(',')
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let cells: Vec<String> = line.split(',').map(str::to_string).collect();
        if cells.len() != header.len() {
            return Err(Error::Csv(format!(
                "row {} has {} cells, header has {}",
                i + 2,
                cells.len(),
                header.len()
            )));
        }
        rows.push(cells);
    }
    Ok((header, rows))
}
