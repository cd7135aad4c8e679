//! Time-frequency fusion frames built from Gabor and wavelet atoms selected
//! by rectangular regions of the time-frequency plane.

pub mod fusiogram;
pub mod gabor;
pub mod regions;
pub mod signal;
pub mod wavelet;

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{FusionError, Result};
use crate::linalg::{Matrix, Scalar, Tolerance, Vector};
use crate::system::FusionFrameSystem;

pub use fusiogram::{fusiogram, fusiogram_norms, Fusiogram, CELL_DIRECT, CELL_INTERPOLATED, CELL_OUTSIDE};
pub use gabor::{gabor_system, gaussian_window, real_gabor_system, Lattice};
pub use regions::{tf_regions, TfRegion};
pub use signal::composite_signal;
pub use wavelet::{wavelet_system, WaveletFilters};

/// How a Gabor atom relates to the complex atom `g_{m,n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GaborPart {
    Complex,
    /// `g_{m,n}` is itself real.
    Real,
    /// `√2·Re g_{m,n}`.
    Cos,
    /// `√2·Im g_{m,n}`.
    Sin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WaveletChannel {
    /// Detail coefficients of level `j ≥ 1`.
    Detail(usize),
    Scaling,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum AtomSource {
    Gabor { m: usize, n: usize, part: GaborPart },
    Wavelet { channel: WaveletChannel, n: usize },
}

/// Position of an atom in the time-frequency plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TfCoord {
    pub time: f64,
    pub freq: f64,
    pub source: AtomSource,
}

/// A vector of `H^L` with its time-frequency position.
#[derive(Debug, Clone, PartialEq)]
pub struct TfAtom<T: Scalar> {
    pub vector: Vector<T>,
    pub time: f64,
    pub freq: f64,
    pub source: AtomSource,
}

impl<T: Scalar> TfAtom<T> {
    pub fn coord(&self) -> TfCoord {
        TfCoord {
            time: self.time,
            freq: self.freq,
            source: self.source,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceKind {
    Gabor,
    Wavelet,
}

/// Alternating assignment: cell `(r, c)` takes wavelets when `r + c` is even.
pub fn checkerboard(rows: usize, cols: usize) -> Vec<SourceKind> {
    (0..rows * cols)
        .map(|k| {
            if (k / cols + k % cols) % 2 == 0 {
                SourceKind::Wavelet
            } else {
                SourceKind::Gabor
            }
        })
        .collect()
}

/// A fusion frame system whose local frames are atoms selected by regions.
#[derive(Debug, Clone)]
pub struct TfFusionSystem<T: Scalar> {
    pub system: FusionFrameSystem<T>,
    pub regions: Vec<TfRegion>,
    /// Index of the atom set used by each region.
    pub assignment: Vec<usize>,
    /// Coordinates of the local frame vectors, in column order.
    pub coords: Vec<Vec<TfCoord>>,
}

impl<T: Scalar> TfFusionSystem<T> {
    pub fn len(&self) -> usize {
        self.regions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.regions.is_empty()
    }

    pub fn ambient_dim(&self) -> usize {
        self.system.frame().ambient_dim()
    }
}

/// Local frame `i` consists of the atoms of `atom_sets[assignment[i]]` lying in `regions[i]`;
/// all weights are 1.
pub fn build_tf_system<T: Scalar>(
    atom_sets: &[Vec<TfAtom<T>>],
    regions: &[TfRegion],
    assignment: &[usize],
    tol: Tolerance,
) -> Result<TfFusionSystem<T>> {
    if regions.is_empty() {
        return Err(FusionError::EmptyList);
    }
    if assignment.len() != regions.len() {
        return Err(FusionError::DimensionMismatch {
            expected: regions.len(),
            found: assignment.len(),
        });
    }
    let len = atom_sets
        .iter()
        .flatten()
        .map(|a| a.vector.len())
        .next()
        .ok_or(FusionError::EmptyList)?;
    let mut synthesis = Vec::with_capacity(regions.len());
    let mut coords = Vec::with_capacity(regions.len());
    for (i, (region, &src)) in regions.iter().zip(assignment).enumerate() {
        let set = atom_sets.get(src).ok_or(FusionError::IndexOutOfRange {
            index: src,
            len: atom_sets.len(),
        })?;
        let picked: Vec<&TfAtom<T>> = set.iter().filter(|a| region.contains(a.time, a.freq)).collect();
        if picked.is_empty() {
            return Err(FusionError::EmptyRegion { index: i });
        }
        for a in &picked {
            if a.vector.len() != len {
                return Err(FusionError::DimensionMismatch {
                    expected: len,
                    found: a.vector.len(),
                });
            }
        }
        synthesis.push(Matrix::from_fn(len, picked.len(), |r, c| picked[c].vector[r]));
        coords.push(picked.iter().map(|a| a.coord()).collect());
    }
    let weights = vec![1.0; regions.len()];
    let system = FusionFrameSystem::from_synthesis(synthesis, &weights, tol)?;
    Ok(TfFusionSystem {
        system,
        regions: regions.to_vec(),
        assignment: assignment.to_vec(),
        coords,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum WindowKind {
    #[default]
    Gauss,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaborConfig {
    pub a: usize,
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(default)]
    pub window: WindowKind,
    /// Time-frequency ratio of the Gaussian; defaults to `a·M/L`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tfr: Option<f64>,
}

/// `"haar"`, `"db8"`, or `{"file": "path"}` holding lowpass coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FilterSpec {
    Named(String),
    File { file: String },
}

impl FilterSpec {
    /// Relative file paths are resolved against `base`.
    pub fn load(&self, base: Option<&Path>) -> Result<WaveletFilters> {
        match self {
            FilterSpec::Named(name) => match name.to_ascii_lowercase().as_str() {
                "haar" | "db1" => Ok(WaveletFilters::haar()),
                "db8" => Ok(WaveletFilters::db8()),
                other => Err(FusionError::BadFilters(format!("unknown filter name {other:?}"))),
            },
            FilterSpec::File { file } => {
                let path = Path::new(file);
                let path = match base {
                    Some(b) if path.is_relative() => b.join(path),
                    _ => path.to_path_buf(),
                };
                let text =
                    std::fs::read_to_string(&path).map_err(|e| FusionError::BadFilters(format!("{}: {e}", path.display())))?;
                WaveletFilters::parse(&text)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaveletConfig {
    #[serde(rename = "J")]
    pub depth: usize,
    pub filters: FilterSpec,
}

/// Parameters of the time-frequency pipeline, as read from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TfConfig {
    #[serde(rename = "L")]
    pub len: usize,
    pub rows: usize,
    pub cols: usize,
    #[serde(default)]
    pub overlap: f64,
    pub gabor: GaborConfig,
    pub wavelet: WaveletConfig,
    /// Source per region in row-major order; checkerboard when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assignment: Option<Vec<SourceKind>>,
    #[serde(default)]
    pub seed: u64,
}

impl TfConfig {
    /// `L = 384`, 2×3 regions with 10% overlap, `a = 16`, `M = 48`, `J = 6`.
    pub fn example(filters: FilterSpec) -> Self {
        Self {
            len: 384,
            rows: 2,
            cols: 3,
            overlap: 0.1,
            gabor: GaborConfig {
                a: 16,
                m: 48,
                window: WindowKind::Gauss,
                tfr: None,
            },
            wavelet: WaveletConfig { depth: 6, filters },
            assignment: None,
            seed: 0,
        }
    }

    pub fn lattice(&self) -> Result<Lattice> {
        Lattice::new(self.len, self.gabor.a, self.gabor.m)
    }

    pub fn window(&self) -> Result<Vec<f64>> {
        let lat = self.lattice()?;
        let tfr = self.gabor.tfr.unwrap_or((lat.a * lat.m) as f64 / lat.len as f64);
        if !(tfr.is_finite() && tfr > 0.0) {
            return Err(FusionError::IncompatibleLattice(format!("window tfr {tfr} must be positive")));
        }
        match self.gabor.window {
            WindowKind::Gauss => Ok(gaussian_window(lat.len, tfr)),
        }
    }

    pub fn assignment(&self) -> Result<Vec<SourceKind>> {
        match &self.assignment {
            None => Ok(checkerboard(self.rows, self.cols)),
            Some(a) if a.len() == self.rows * self.cols => Ok(a.clone()),
            Some(a) => Err(FusionError::BadGrid(format!(
                "assignment lists {} regions, grid has {}",
                a.len(),
                self.rows * self.cols
            ))),
        }
    }

    /// Builds the real system; `base` resolves relative filter files.
    pub fn build(&self, base: Option<&Path>, tol: Tolerance) -> Result<TfFusionSystem<f64>> {
        let filters = self.wavelet.filters.load(base)?;
        self.build_with(&filters, tol)
    }

    pub fn build_with(&self, filters: &WaveletFilters, tol: Tolerance) -> Result<TfFusionSystem<f64>> {
        let lat = self.lattice()?;
        let gabor = real_gabor_system(&lat, &self.window()?)?;
        let wavelet = wavelet_system(self.len, self.wavelet.depth, filters)?;
        let regions = tf_regions(self.len, self.rows, self.cols, self.overlap)?;
        let assignment: Vec<usize> = self
            .assignment()?
            .into_iter()
            .map(|k| match k {
                SourceKind::Gabor => 0,
                SourceKind::Wavelet => 1,
            })
            .collect();
        build_tf_system(&[gabor, wavelet], &regions, &assignment, tol)
    }
}
