//! Subspaces of `F^L` stored by orthonormal bases, and their projections.

use crate::error::{FusionError, Result};
use crate::linalg::{distance, numerical_rank, orthonormalize, Matrix, Scalar, Tolerance, Vector};

/// A nonzero subspace of `F^L` with an orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace<T: Scalar> {
    basis: Matrix<T>,
}

/// Orthogonal projection matrix `B B*`.
#[derive(Debug, Clone, PartialEq)]
pub struct Projector<T: Scalar> {
    matrix: Matrix<T>,
}

impl<T: Scalar> Projector<T> {
    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.matrix
    }

    pub fn apply(&self, f: &Vector<T>) -> Vector<T> {
        &self.matrix * f
    }
}

impl<T: Scalar> Subspace<T> {
    /// Column space of `spanning`, orthonormalized.
    pub fn from_spanning(spanning: &Matrix<T>, tol: &Tolerance) -> Result<Self> {
        if spanning.ncols() == 0 || spanning.nrows() == 0 {
            return Err(FusionError::ZeroSubspace);
        }
        match orthonormalize(spanning, tol) {
            Ok(basis) => Ok(Self { basis }),
            Err(FusionError::AllZero) => Err(FusionError::ZeroSubspace),
            Err(e) => Err(e),
        }
    }

    /// Span of the given vectors, each of length `ambient_dim`.
    pub fn from_vectors(ambient_dim: usize, vectors: &[Vec<T>], tol: &Tolerance) -> Result<Self> {
        if let Some(bad) = vectors.iter().find(|v| v.len() != ambient_dim) {
            return Err(FusionError::DimensionMismatch {
                expected: ambient_dim,
                found: bad.len(),
            });
        }
        let m = Matrix::from_fn(ambient_dim, vectors.len(), |i, j| vectors[j][i]);
        Self::from_spanning(&m, tol)
    }

    /// Wraps a basis that is already orthonormal, checking it.
    pub fn from_orthonormal(basis: Matrix<T>, tol: &Tolerance) -> Result<Self> {
        if basis.ncols() == 0 {
            return Err(FusionError::ZeroSubspace);
        }
        let gram = basis.adjoint() * &basis;
        let err = distance(&gram, &Matrix::identity(basis.ncols(), basis.ncols()));
        if err > tol.threshold(1.0) {
            return Err(FusionError::PreconditionFailed(format!(
                "basis is not orthonormal (deviation {err:.3e})"
            )));
        }
        Ok(Self { basis })
    }

    /// Span of the standard basis vectors with the given indices.
    pub fn coordinate(ambient_dim: usize, indices: &[usize]) -> Result<Self> {
        let mut unique: Vec<usize> = Vec::with_capacity(indices.len());
        for &i in indices {
            if i >= ambient_dim {
                return Err(FusionError::IndexOutOfRange {
                    index: i,
                    len: ambient_dim,
                });
            }
            if !unique.contains(&i) {
                unique.push(i);
            }
        }
        if unique.is_empty() {
            return Err(FusionError::ZeroSubspace);
        }
        let mut basis = Matrix::zeros(ambient_dim, unique.len());
        for (j, &i) in unique.iter().enumerate() {
            basis[(i, j)] = T::one();
        }
        Ok(Self { basis })
    }

    pub fn full(ambient_dim: usize) -> Result<Self> {
        Self::coordinate(ambient_dim, &(0..ambient_dim).collect::<Vec<_>>())
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &Matrix<T> {
        &self.basis
    }

    pub fn projector(&self) -> Projector<T> {
        Projector {
            matrix: &self.basis * self.basis.adjoint(),
        }
    }

    pub fn project(&self, f: &Vector<T>) -> Result<Vector<T>> {
        if f.len() != self.ambient_dim() {
            return Err(FusionError::DimensionMismatch {
                expected: self.ambient_dim(),
                found: f.len(),
            });
        }
        Ok(&self.basis * (self.basis.adjoint() * f))
    }

    /// Whether `f` lies in the subspace, relative to `‖f‖`.
    pub fn contains(&self, f: &Vector<T>, tol: &Tolerance) -> bool {
        match self.project(f) {
            Ok(p) => (f - p).norm() <= tol.threshold(f.norm()),
            Err(_) => false,
        }
    }

    /// `self ⊆ other`, tested as `‖(I - P_other) B_self‖ ≤ tol`.
    pub fn is_contained_in(&self, other: &Subspace<T>, tol: &Tolerance) -> bool {
        if self.ambient_dim() != other.ambient_dim() || self.dim() > other.dim() {
            return false;
        }
        let residual = &self.basis - &other.basis * (other.basis.adjoint() * &self.basis);
        crate::linalg::spectral_norm(&residual) <= tol.threshold(1.0)
    }

    /// Equality of subspaces by projector distance.
    pub fn approx_eq(&self, other: &Subspace<T>, tol: &Tolerance) -> bool {
        self.ambient_dim() == other.ambient_dim()
            && self.dim() == other.dim()
            && self.projector_distance(other) <= tol.threshold(1.0)
    }

    /// `‖P_self − P_other‖` in the spectral norm.
    pub fn projector_distance(&self, other: &Subspace<T>) -> f64 {
        distance(self.projector().matrix(), other.projector().matrix())
    }
}

pub fn projector<T: Scalar>(s: &Subspace<T>) -> Projector<T> {
    s.projector()
}

pub fn project<T: Scalar>(s: &Subspace<T>, f: &Vector<T>) -> Result<Vector<T>> {
    s.project(f)
}

fn check_common_dim<T: Scalar>(subspaces: &[Subspace<T>]) -> Result<usize> {
    let first = subspaces.first().ok_or(FusionError::EmptyList)?;
    let l = first.ambient_dim();
    for s in subspaces {
        if s.ambient_dim() != l {
            return Err(FusionError::DimensionMismatch {
                expected: l,
                found: s.ambient_dim(),
            });
        }
    }
    Ok(l)
}

/// Horizontal concatenation of bases.
pub(crate) fn concat_bases<'a, T: Scalar>(l: usize, subspaces: impl IntoIterator<Item = &'a Subspace<T>>) -> Matrix<T> {
    let parts: Vec<&Subspace<T>> = subspaces.into_iter().collect();
    let total: usize = parts.iter().map(|s| s.dim()).sum();
    let mut out = Matrix::zeros(l, total);
    let mut offset = 0;
    for s in parts {
        out.columns_mut(offset, s.dim()).copy_from(s.basis());
        offset += s.dim();
    }
    out
}

/// The sum `V_1 + … + V_N`.
pub fn span_union<T: Scalar>(subspaces: &[Subspace<T>], tol: &Tolerance) -> Result<Subspace<T>> {
    let l = check_common_dim(subspaces)?;
    Subspace::from_spanning(&concat_bases(l, subspaces), tol)
}

/// The subspace `U S`.
pub fn apply_operator<T: Scalar>(u: &Matrix<T>, s: &Subspace<T>, tol: &Tolerance) -> Result<Subspace<T>> {
    let l = s.ambient_dim();
    if u.nrows() != l || u.ncols() != l {
        return Err(FusionError::ShapeMismatch(format!(
            "operator is {}x{}, subspace lives in dimension {l}",
            u.nrows(),
            u.ncols()
        )));
    }
    let rank = numerical_rank(u, tol);
    if rank < l {
        return Err(FusionError::SingularOperator { rank, dim: l });
    }
    Subspace::from_spanning(&(u * s.basis()), tol)
}

/// Whether no subspace meets the span of the others nontrivially.
///
/// A family with fewer than two members is minimal.
pub fn minimal_family<T: Scalar>(subspaces: &[Subspace<T>], tol: &Tolerance) -> bool {
    let Ok(l) = check_common_dim(subspaces) else {
        return true;
    };
    if subspaces.len() < 2 {
        return true;
    }
    (0..subspaces.len()).all(|i| {
        let others = concat_bases(l, subspaces.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, s)| s));
        let with_i = concat_bases(
            l,
            subspaces
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, s)| s)
                .chain(std::iter::once(&subspaces[i])),
        );
        numerical_rank(&with_i, tol) == numerical_rank(&others, tol) + subspaces[i].dim()
    })
}
