//! JSON descriptors, CSV matrices and PGM images.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{FusionError, Result};
use crate::frame::{FusionFrame, WeightedSubspace};
use crate::linalg::{Complex64, Field, Matrix, Scalar, Tolerance, Vector};
use crate::subspace::Subspace;
use crate::system::{FusionFrameSystem, LocalFrame};

pub const SCHEMA_VERSION: u32 = 1;

fn schema_version() -> u32 {
    SCHEMA_VERSION
}

fn unit_weight() -> f64 {
    1.0
}

/// A matrix or vector entry: a JSON number, or a string such as `"1.5-2i"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Number(f64),
    Text(String),
}

impl Entry {
    pub fn to_complex(&self) -> Result<Complex64> {
        match self {
            Entry::Number(x) => Ok(Complex64::new(*x, 0.0)),
            Entry::Text(s) => parse_complex(s),
        }
    }

    pub fn from_scalar<T: Scalar>(x: T) -> Self {
        let z = x.to_complex();
        match T::FIELD {
            Field::Real => Entry::Number(z.re),
            Field::Complex => Entry::Text(format_complex(z)),
        }
    }

    pub fn to_scalar<T: Scalar>(&self) -> Result<T> {
        let z = self.to_complex()?;
        T::from_complex(z).ok_or_else(|| FusionError::Parse(format!("complex entry {z} in a real descriptor")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentDescriptor {
    #[serde(default = "unit_weight")]
    pub weight: f64,
    /// Vectors spanning the subspace, each of length `ambient_dim`.
    pub spanning_vectors: Vec<Vec<Entry>>,
}

/// `{schema_version, field, ambient_dim, components, local_frames?}`.
///
/// `local_frames[i]` lists the frame vectors of component `i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameDescriptor {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    pub field: Field,
    pub ambient_dim: usize,
    pub components: Vec<ComponentDescriptor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub local_frames: Option<Vec<Vec<Vec<Entry>>>>,
}

fn columns_to_matrix<T: Scalar>(len: usize, vectors: &[Vec<Entry>]) -> Result<Matrix<T>> {
    let mut m = Matrix::zeros(len, vectors.len());
    for (j, v) in vectors.iter().enumerate() {
        if v.len() != len {
            return Err(FusionError::DimensionMismatch {
                expected: len,
                found: v.len(),
            });
        }
        for (i, e) in v.iter().enumerate() {
            m[(i, j)] = e.to_scalar()?;
        }
    }
    Ok(m)
}

fn matrix_to_columns<T: Scalar>(m: &Matrix<T>) -> Vec<Vec<Entry>> {
    m.column_iter()
        .map(|c| c.iter().map(|&x| Entry::from_scalar(x)).collect())
        .collect()
}

impl FrameDescriptor {
    pub fn from_json(text: &str) -> Result<Self> {
        let d: Self = serde_json::from_str(text).map_err(|e| FusionError::Parse(e.to_string()))?;
        if d.schema_version != SCHEMA_VERSION {
            return Err(FusionError::Parse(format!("unsupported schema_version {}", d.schema_version)));
        }
        Ok(d)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("descriptor serializes")
    }

    /// Orthonormalizes every component and validates weights.
    pub fn to_frame<T: Scalar>(&self, tol: Tolerance) -> Result<FusionFrame<T>> {
        self.check_field::<T>()?;
        if self.components.is_empty() {
            return Err(FusionError::EmptyList);
        }
        let components = self
            .components
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let m = columns_to_matrix::<T>(self.ambient_dim, &c.spanning_vectors)?;
                let s = Subspace::from_spanning(&m, &tol).map_err(|e| match e {
                    FusionError::ZeroSubspace | FusionError::AllZero => FusionError::DegenerateSubspace { index: i },
                    other => other,
                })?;
                Ok(WeightedSubspace::new(s, c.weight))
            })
            .collect::<Result<Vec<_>>>()?;
        FusionFrame::with_tolerance(components, tol)
    }

    /// Uses `local_frames` when present, otherwise orthonormal bases.
    pub fn to_system<T: Scalar>(&self, tol: Tolerance) -> Result<FusionFrameSystem<T>> {
        let frame = self.to_frame::<T>(tol)?;
        let Some(locals) = &self.local_frames else {
            return Ok(FusionFrameSystem::with_orthonormal_locals(frame));
        };
        if locals.len() != frame.len() {
            return Err(FusionError::DimensionMismatch {
                expected: frame.len(),
                found: locals.len(),
            });
        }
        let locals = locals
            .iter()
            .enumerate()
            .map(|(i, vs)| {
                let m = columns_to_matrix::<T>(self.ambient_dim, vs)?;
                LocalFrame::for_subspace(frame.subspace(i).clone(), m, &tol)
            })
            .collect::<Result<Vec<_>>>()?;
        FusionFrameSystem::new(frame, locals)
    }

    /// Components are written as orthonormal bases.
    pub fn from_frame<T: Scalar>(frame: &FusionFrame<T>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            field: T::FIELD,
            ambient_dim: frame.ambient_dim(),
            components: frame
                .components()
                .iter()
                .map(|c| ComponentDescriptor {
                    weight: c.weight,
                    spanning_vectors: matrix_to_columns(c.subspace.basis()),
                })
                .collect(),
            local_frames: None,
        }
    }

    pub fn from_system<T: Scalar>(sys: &FusionFrameSystem<T>) -> Self {
        Self {
            local_frames: Some(sys.locals().iter().map(|l| matrix_to_columns(&l.synthesis)).collect()),
            ..Self::from_frame(sys.frame())
        }
    }

    fn check_field<T: Scalar>(&self) -> Result<()> {
        if self.field != T::FIELD {
            return Err(FusionError::Parse(format!(
                "descriptor is {}, requested {}",
                self.field,
                T::FIELD
            )));
        }
        Ok(())
    }
}

/// Parses `"3"`, `"-1.5e-3"`, `"2i"`, `"-i"`, `"1+2i"`, `"0.5-1e-2i"` (also with `j`).
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || FusionError::Parse(format!("invalid number {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    let real = |t: &str| t.parse::<f64>().map_err(|_| bad());
    let Some(body) = s.strip_suffix(['i', 'j']) else {
        return Ok(Complex64::new(real(&s)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |t: &str| match t {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        t => real(t),
    };
    match split {
        Some(k) => Ok(Complex64::new(real(&body[..k])?, imag(&body[k..])?)),
        None => Ok(Complex64::new(0.0, imag(body)?)),
    }
}

/// `"a+bi"` / `"a-bi"` with shortest round-trip formatting.
pub fn format_complex(z: Complex64) -> String {
    if z.im.is_sign_negative() {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

pub fn format_scalar<T: Scalar>(x: T) -> String {
    let z = x.to_complex();
    match T::FIELD {
        Field::Real => format!("{}", z.re),
        Field::Complex => format_complex(z),
    }
}

/// One row per line, comma-separated; an optional header line first.
pub fn write_csv<T: Scalar>(m: &Matrix<T>, header: Option<&[String]>) -> String {
    let mut out = String::new();
    if let Some(h) = header {
        out.push_str(&h.join(","));
        out.push('\n');
    }
    for row in m.row_iter() {
        let cells: Vec<String> = row.iter().map(|&x| format_scalar(x)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Rows of already formatted cells.
pub fn write_csv_rows<I, R>(rows: I, header: Option<&[&str]>) -> String
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut out = String::new();
    if let Some(h) = header {
        out.push_str(&h.join(","));
        out.push('\n');
    }
    for row in rows {
        let cells: Vec<String> = row.into_iter().collect();
        let _ = writeln!(out, "{}", cells.join(","));
    }
    out
}

/// Parses a rectangular CSV matrix; blank lines are skipped.
pub fn parse_csv(text: &str, header: bool) -> Result<Matrix<Complex64>> {
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    let lines = text.lines().filter(|l| !l.trim().is_empty()).skip(usize::from(header));
    for (n, line) in lines.enumerate() {
        let row = line
            .split(',')
            .map(|c| parse_complex(c).map_err(|e| FusionError::Parse(format!("row {}: {e}", n + 1))))
            .collect::<Result<Vec<_>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(FusionError::Parse(format!(
                    "row {} has {} cells, expected {}",
                    n + 1,
                    row.len(),
                    first.len()
                )));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(FusionError::Parse("no data rows".into()));
    }
    let cols = rows[0].len();
    Ok(Matrix::from_fn(rows.len(), cols, |i, j| rows[i][j]))
}

pub fn into_field<T: Scalar>(m: &Matrix<Complex64>) -> Result<Matrix<T>> {
    let mut out = Matrix::zeros(m.nrows(), m.ncols());
    for (dst, &z) in out.iter_mut().zip(m.iter()) {
        *dst = T::from_complex(z).ok_or_else(|| FusionError::Parse(format!("complex entry {z} in real data")))?;
    }
    Ok(out)
}

/// A single row or a single column, read as a vector.
pub fn parse_vector_csv<T: Scalar>(text: &str, header: bool) -> Result<Vector<T>> {
    let m = into_field::<T>(&parse_csv(text, header)?)?;
    if m.ncols() == 1 {
        Ok(m.column(0).into_owned())
    } else if m.nrows() == 1 {
        Ok(m.row(0).transpose())
    } else {
        Err(FusionError::ShapeMismatch(format!(
            "expected a single row or column, found {}×{}",
            m.nrows(),
            m.ncols()
        )))
    }
}

/// Binary PGM (P5, maxval 255), rows top to bottom.
pub fn write_pgm(image: &Matrix<u8>) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", image.ncols(), image.nrows()).into_bytes();
    for row in image.row_iter() {
        out.extend(row.iter());
    }
    out
}
