//! Overlapping rectangular regions of the positive-frequency time-frequency plane.

use serde::{Deserialize, Serialize};

use crate::error::{FusionError, Result};

/// Half-open rectangle `[t0, t1) × [f0, f1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TfRegion {
    pub t0: f64,
    pub t1: f64,
    pub f0: f64,
    pub f1: f64,
}

impl TfRegion {
    pub fn new(t0: f64, t1: f64, f0: f64, f1: f64) -> Result<Self> {
        let ok = [t0, t1, f0, f1].iter().all(|x| x.is_finite()) && t0 < t1 && f0 < f1;
        if !ok {
            return Err(FusionError::BadGrid(format!("empty region [{t0}, {t1}) × [{f0}, {f1})")));
        }
        Ok(Self { t0, t1, f0, f1 })
    }

    pub fn contains(&self, time: f64, freq: f64) -> bool {
        self.t0 <= time && time < self.t1 && self.f0 <= freq && freq < self.f1
    }

    pub fn overlaps(&self, other: &TfRegion) -> bool {
        self.t0 < other.t1 && other.t0 < self.t1 && self.f0 < other.f1 && other.f0 < self.f1
    }
}

/// Number of frequency rows of the plane: `0, …, L/2`.
pub fn freq_extent(len: usize) -> usize {
    len / 2 + 1
}

/// Tiles of length `ℓ` with `extent = n·ℓ − (n−1)·o·ℓ`.
fn tiles(extent: f64, n: usize, overlap: f64) -> Vec<(f64, f64)> {
    let width = extent / (n as f64 - (n as f64 - 1.0) * overlap);
    (0..n)
        .map(|k| {
            let start = k as f64 * width * (1.0 - overlap);
            let end = if k + 1 == n { extent } else { start + width };
            (start, end)
        })
        .collect()
}

/// `rows × cols` tiles of `[0, L) × [0, L/2 + 1)`, row-major with row 0 at the
/// lowest frequencies; neighbours share the fraction `overlap` of a tile edge.
pub fn tf_regions(len: usize, rows: usize, cols: usize, overlap: f64) -> Result<Vec<TfRegion>> {
    if len == 0 || rows == 0 || cols == 0 {
        return Err(FusionError::BadGrid(format!(
            "L={len}, rows={rows}, cols={cols} must be positive"
        )));
    }
    if !(0.0..1.0).contains(&overlap) {
        return Err(FusionError::BadGrid(format!("overlap {overlap} outside [0, 1)")));
    }
    let times = tiles(len as f64, cols, overlap);
    let freqs = tiles(freq_extent(len) as f64, rows, overlap);
    let mut out = Vec::with_capacity(rows * cols);
    for &(f0, f1) in &freqs {
        for &(t0, t1) in &times {
            out.push(TfRegion::new(t0, t1, f0, f1)?);
        }
    }
    Ok(out)
}
