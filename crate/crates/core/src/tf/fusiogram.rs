//! Fusiograms: fusion frame coefficients painted onto the time-frequency plane.

use std::f64::consts::FRAC_1_SQRT_2;

use super::regions::{freq_extent, TfRegion};
use super::{AtomSource, GaborPart, TfFusionSystem};
use crate::error::{FusionError, Result};
use crate::linalg::{Complex64, Matrix, Scalar, Vector};

pub const CELL_OUTSIDE: u8 = 0;
pub const CELL_DIRECT: u8 = 1;
pub const CELL_INTERPOLATED: u8 = 2;

/// Grid of `(L/2 + 1)` frequency rows by `L` time columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Fusiogram {
    pub values: Matrix<Complex64>,
    /// [`CELL_DIRECT`], [`CELL_INTERPOLATED`] or [`CELL_OUTSIDE`] per cell.
    pub mask: Matrix<u8>,
    pub regions: Vec<TfRegion>,
}

impl Fusiogram {
    pub fn freq_rows(&self) -> usize {
        self.values.nrows()
    }

    pub fn time_cols(&self) -> usize {
        self.values.ncols()
    }

    pub fn magnitude(&self) -> Matrix<f64> {
        self.values.map(|z| z.norm())
    }

    /// 8-bit image of `ln|c|` shifted by its minimum, top row = highest frequency.
    ///
    /// Zero magnitudes are raised to the smallest positive one; cells outside
    /// every region are black.
    pub fn display(&self) -> Matrix<u8> {
        let mag = self.magnitude();
        let inside = |i: usize, j: usize| self.mask[(i, j)] != CELL_OUTSIDE;
        let floor = (0..mag.nrows())
            .flat_map(|i| (0..mag.ncols()).map(move |j| (i, j)))
            .filter(|&(i, j)| inside(i, j) && mag[(i, j)] > 0.0)
            .map(|(i, j)| mag[(i, j)])
            .fold(f64::INFINITY, f64::min);
        let rows = mag.nrows();
        if !floor.is_finite() {
            return Matrix::zeros(rows, mag.ncols());
        }
        let log = mag.map(|m| m.max(floor).ln());
        let lo = floor.ln();
        let hi = log.iter().copied().fold(lo, f64::max);
        let span = if hi > lo { hi - lo } else { 1.0 };
        Matrix::from_fn(rows, mag.ncols(), |r, j| {
            let i = rows - 1 - r;
            if !inside(i, j) {
                return 0;
            }
            ((log[(i, j)] - lo) / span * 255.0).round().clamp(0.0, 255.0) as u8
        })
    }
}

/// File contents of an exported fusiogram.
#[derive(Debug, Clone, PartialEq)]
pub struct FusiogramFiles {
    /// Complex cell values, one frequency row per line, lowest frequency first.
    pub grid_csv: String,
    pub mask_csv: String,
    /// Binary PGM of [`Fusiogram::display`].
    pub image_pgm: Vec<u8>,
    /// `{schema_version, regions: [{t0, t1, f0, f1}]}`.
    pub borders_json: String,
}

impl Fusiogram {
    pub fn files(&self, header: bool) -> FusiogramFiles {
        let names: Vec<String> = (0..self.time_cols()).map(|t| format!("t{t}")).collect();
        let header = header.then_some(names.as_slice());
        #[derive(serde::Serialize)]
        struct Borders<'a> {
            schema_version: u32,
            regions: &'a [TfRegion],
        }
        let borders = Borders {
            schema_version: crate::io::SCHEMA_VERSION,
            regions: &self.regions,
        };
        FusiogramFiles {
            grid_csv: crate::io::write_csv(&self.values, header),
            mask_csv: crate::io::write_csv(&self.mask.map(f64::from), header),
            image_pgm: crate::io::write_pgm(&self.display()),
            borders_json: serde_json::to_string_pretty(&borders).expect("regions serialize"),
        }
    }
}

fn check_len<T: Scalar>(sys: &TfFusionSystem<T>, f: &Vector<T>) -> Result<usize> {
    let len = sys.ambient_dim();
    if f.len() != len {
        return Err(FusionError::DimensionMismatch {
            expected: len,
            found: f.len(),
        });
    }
    Ok(len)
}

fn covered(regions: &[TfRegion], len: usize) -> Matrix<bool> {
    Matrix::from_fn(freq_extent(len), len, |i, j| {
        regions.iter().any(|q| q.contains(j as f64, i as f64))
    })
}

/// Contribution of one coefficient to its cell: sum and count.
///
/// A `Cos`/`Sin` pair from the same `g_{m,n}` recombines into `⟨f, g_{m,n}⟩`.
fn contribution(source: &AtomSource, c: Complex64) -> (Complex64, u32) {
    match source {
        AtomSource::Gabor {
            part: GaborPart::Cos, ..
        } => (c * FRAC_1_SQRT_2, 1),
        AtomSource::Gabor {
            part: GaborPart::Sin, ..
        } => (c * Complex64::new(0.0, -FRAC_1_SQRT_2), 0),
        _ => (c, 1),
    }
}

/// Linear interpolation of the marked entries of `line`, constant beyond the ends.
fn fill_line(values: &mut [Complex64], known: &[bool], target: &[bool]) -> Vec<usize> {
    let anchors: Vec<usize> = (0..values.len()).filter(|&k| known[k]).collect();
    let mut filled = Vec::new();
    if anchors.is_empty() {
        return filled;
    }
    for k in 0..values.len() {
        if known[k] || !target[k] {
            continue;
        }
        let right = anchors.partition_point(|&a| a < k);
        values[k] = if right == 0 {
            values[anchors[0]]
        } else if right == anchors.len() {
            values[anchors[right - 1]]
        } else {
            let (a, b) = (anchors[right - 1], anchors[right]);
            let s = (k - a) as f64 / (b - a) as f64;
            values[a] * (1.0 - s) + values[b] * s
        };
        filled.push(k);
    }
    filled
}

/// Places `⟨f, ψ_ik⟩` at `(⌊f_k⌋, ⌊t_k⌋)`, averaging coincident coefficients, and
/// fills the remaining covered cells by linear interpolation along frequency,
/// then along time.
pub fn fusiogram<T: Scalar>(sys: &TfFusionSystem<T>, f: &Vector<T>) -> Result<Fusiogram> {
    let len = check_len(sys, f)?;
    let rows = freq_extent(len);
    let mut sum = Matrix::<Complex64>::zeros(rows, len);
    let mut count = Matrix::<u32>::zeros(rows, len);
    let mut touched = Matrix::<bool>::from_element(rows, len, false);
    for (lf, coords) in sys.system.locals().iter().zip(&sys.coords) {
        let c = lf.synthesis.adjoint() * f;
        for (k, coord) in coords.iter().enumerate() {
            let (i, j) = (coord.freq.floor(), coord.time.floor());
            if i < 0.0 || j < 0.0 || i >= rows as f64 || j >= len as f64 {
                continue;
            }
            let (i, j) = (i as usize, j as usize);
            let (v, n) = contribution(&coord.source, c[k].to_complex());
            sum[(i, j)] += v;
            count[(i, j)] += n;
            touched[(i, j)] = true;
        }
    }
    let cover = covered(&sys.regions, len);
    let mut values = Matrix::<Complex64>::zeros(rows, len);
    let mut mask = Matrix::<u8>::zeros(rows, len);
    for i in 0..rows {
        for j in 0..len {
            if touched[(i, j)] {
                values[(i, j)] = sum[(i, j)] / count[(i, j)].max(1) as f64;
                mask[(i, j)] = CELL_DIRECT;
            }
        }
    }
    for j in 0..len {
        let mut col: Vec<Complex64> = values.column(j).iter().copied().collect();
        let known: Vec<bool> = (0..rows).map(|i| mask[(i, j)] == CELL_DIRECT).collect();
        let target: Vec<bool> = (0..rows).map(|i| cover[(i, j)]).collect();
        for i in fill_line(&mut col, &known, &target) {
            values[(i, j)] = col[i];
            mask[(i, j)] = CELL_INTERPOLATED;
        }
    }
    for i in 0..rows {
        let mut row: Vec<Complex64> = values.row(i).iter().copied().collect();
        let known: Vec<bool> = (0..len).map(|j| mask[(i, j)] != CELL_OUTSIDE).collect();
        let target: Vec<bool> = (0..len).map(|j| cover[(i, j)]).collect();
        for j in fill_line(&mut row, &known, &target) {
            values[(i, j)] = row[j];
            mask[(i, j)] = CELL_INTERPOLATED;
        }
    }
    Ok(Fusiogram {
        values,
        mask,
        regions: sys.regions.clone(),
    })
}

/// Every cell of region `i` holds `‖π_{W_i} f‖`, averaged where regions overlap.
pub fn fusiogram_norms<T: Scalar>(sys: &TfFusionSystem<T>, f: &Vector<T>) -> Result<Fusiogram> {
    let len = check_len(sys, f)?;
    let norms = sys
        .system
        .frame()
        .subspaces()
        .iter()
        .map(|w| w.project(f).map(|p| p.norm()))
        .collect::<Result<Vec<f64>>>()?;
    Ok(paint_norms(&sys.regions, &norms, len))
}

/// Constant-per-region grid with overlap averaging.
pub fn paint_norms(regions: &[TfRegion], norms: &[f64], len: usize) -> Fusiogram {
    let rows = freq_extent(len);
    let mut values = Matrix::<Complex64>::zeros(rows, len);
    let mut mask = Matrix::<u8>::zeros(rows, len);
    for i in 0..rows {
        for j in 0..len {
            let hits: Vec<f64> = regions
                .iter()
                .zip(norms)
                .filter(|(q, _)| q.contains(j as f64, i as f64))
                .map(|(_, &n)| n)
                .collect();
            if !hits.is_empty() {
                values[(i, j)] = Complex64::new(hits.iter().sum::<f64>() / hits.len() as f64, 0.0);
                mask[(i, j)] = CELL_DIRECT;
            }
        }
    }
    Fusiogram {
        values,
        mask,
        regions: regions.to_vec(),
    }
}
