//! The coefficient space `K_H² = H ⊕ … ⊕ H` and block operators acting on it.

use crate::error::{FusionError, Result};
use crate::frame::FusionFrame;
use crate::linalg::{spectral_norm, Matrix, Scalar, Tolerance, Vector};
use crate::subspace::Subspace;

/// `N` ambient vectors of length `L`, stored as the columns of an `L×N` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientArray<T: Scalar> {
    data: Matrix<T>,
}

impl<T: Scalar> CoefficientArray<T> {
    pub fn zeros(block_dim: usize, num_blocks: usize) -> Self {
        Self {
            data: Matrix::zeros(block_dim, num_blocks),
        }
    }

    pub fn from_blocks(blocks: &[Vector<T>]) -> Result<Self> {
        let first = blocks.first().ok_or(FusionError::EmptyList)?;
        let l = first.len();
        let mut data = Matrix::zeros(l, blocks.len());
        for (j, b) in blocks.iter().enumerate() {
            if b.len() != l {
                return Err(FusionError::DimensionMismatch {
                    expected: l,
                    found: b.len(),
                });
            }
            data.set_column(j, b);
        }
        Ok(Self { data })
    }

    /// Each column is one block.
    pub fn from_matrix(data: Matrix<T>) -> Self {
        Self { data }
    }

    /// Splits a stacked vector of length `N·L` into `N` blocks.
    pub fn from_stacked(stacked: &Vector<T>, block_dim: usize) -> Result<Self> {
        if block_dim == 0 || stacked.len() % block_dim != 0 {
            return Err(FusionError::ShapeMismatch(format!(
                "stacked length {} is not a multiple of {block_dim}",
                stacked.len()
            )));
        }
        let n = stacked.len() / block_dim;
        Ok(Self {
            data: Matrix::from_column_slice(block_dim, n, stacked.as_slice()),
        })
    }

    pub fn block_dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn num_blocks(&self) -> usize {
        self.data.ncols()
    }

    pub fn block(&self, i: usize) -> Vector<T> {
        self.data.column(i).into_owned()
    }

    pub fn set_block(&mut self, i: usize, v: &Vector<T>) -> Result<()> {
        if i >= self.num_blocks() {
            return Err(FusionError::IndexOutOfRange {
                index: i,
                len: self.num_blocks(),
            });
        }
        if v.len() != self.block_dim() {
            return Err(FusionError::DimensionMismatch {
                expected: self.block_dim(),
                found: v.len(),
            });
        }
        self.data.set_column(i, v);
        Ok(())
    }

    pub fn blocks(&self) -> impl Iterator<Item = Vector<T>> + '_ {
        (0..self.num_blocks()).map(|i| self.block(i))
    }

    pub fn as_matrix(&self) -> &Matrix<T> {
        &self.data
    }

    /// Blocks stacked into one vector of length `N·L`.
    pub fn to_stacked(&self) -> Vector<T> {
        Vector::from_column_slice(self.data.as_slice())
    }

    /// `(Σ ‖c_i‖²)^{1/2}`.
    pub fn norm(&self) -> f64 {
        self.data.norm()
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Blocks<T: Scalar> {
    Diagonal(Vec<Matrix<T>>),
    Full(Vec<Vec<Matrix<T>>>),
}

/// Operator on `K_H²` given by an `N×N` grid of `L×L` blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockOperator<T: Scalar> {
    block_dim: usize,
    blocks: Blocks<T>,
}

fn check_square_blocks<T: Scalar>(l: usize, ops: &[&Matrix<T>]) -> Result<()> {
    for m in ops {
        if m.nrows() != l || m.ncols() != l {
            return Err(FusionError::ShapeMismatch(format!(
                "block is {}x{}, expected {l}x{l}",
                m.nrows(),
                m.ncols()
            )));
        }
    }
    Ok(())
}

impl<T: Scalar> BlockOperator<T> {
    /// `⊕ Q_i`.
    pub fn block_diagonal(ops: Vec<Matrix<T>>) -> Result<Self> {
        let l = ops.first().ok_or(FusionError::EmptyList)?.nrows();
        check_square_blocks(l, &ops.iter().collect::<Vec<_>>())?;
        Ok(Self {
            block_dim: l,
            blocks: Blocks::Diagonal(ops),
        })
    }

    /// Row-major grid: `grid[i][j] = Q_ij`.
    pub fn from_grid(grid: Vec<Vec<Matrix<T>>>) -> Result<Self> {
        let n = grid.len();
        let l = grid.first().and_then(|r| r.first()).ok_or(FusionError::EmptyList)?.nrows();
        for row in &grid {
            if row.len() != n {
                return Err(FusionError::ShapeMismatch(format!(
                    "grid row has {} blocks, expected {n}",
                    row.len()
                )));
            }
            check_square_blocks(l, &row.iter().collect::<Vec<_>>())?;
        }
        Ok(Self {
            block_dim: l,
            blocks: Blocks::Full(grid),
        })
    }

    pub fn identity(num_blocks: usize, block_dim: usize) -> Self {
        Self {
            block_dim,
            blocks: Blocks::Diagonal(vec![Matrix::identity(block_dim, block_dim); num_blocks]),
        }
    }

    /// `M_k`: identity in slot `k` (zero-based), zero elsewhere.
    pub fn coordinate_mask(num_blocks: usize, block_dim: usize, k: usize) -> Result<Self> {
        if k >= num_blocks {
            return Err(FusionError::IndexOutOfRange {
                index: k,
                len: num_blocks,
            });
        }
        let ops = (0..num_blocks)
            .map(|i| {
                if i == k {
                    Matrix::identity(block_dim, block_dim)
                } else {
                    Matrix::zeros(block_dim, block_dim)
                }
            })
            .collect();
        Ok(Self {
            block_dim,
            blocks: Blocks::Diagonal(ops),
        })
    }

    /// Reads the grid out of a dense `(N·L)×(N·L)` matrix.
    pub fn from_dense(dense: &Matrix<T>, num_blocks: usize, block_dim: usize) -> Result<Self> {
        let size = num_blocks * block_dim;
        if dense.nrows() != size || dense.ncols() != size {
            return Err(FusionError::ShapeMismatch(format!(
                "dense operator is {}x{}, expected {size}x{size}",
                dense.nrows(),
                dense.ncols()
            )));
        }
        let grid = (0..num_blocks)
            .map(|i| {
                (0..num_blocks)
                    .map(|j| {
                        dense
                            .view((i * block_dim, j * block_dim), (block_dim, block_dim))
                            .into_owned()
                    })
                    .collect()
            })
            .collect();
        Self::from_grid(grid)
    }

    pub fn block_dim(&self) -> usize {
        self.block_dim
    }

    pub fn num_blocks(&self) -> usize {
        match &self.blocks {
            Blocks::Diagonal(d) => d.len(),
            Blocks::Full(g) => g.len(),
        }
    }

    /// True when stored as a diagonal grid (off-diagonal blocks exactly zero).
    pub fn is_diagonal_storage(&self) -> bool {
        matches!(self.blocks, Blocks::Diagonal(_))
    }

    pub fn block(&self, i: usize, j: usize) -> Matrix<T> {
        match &self.blocks {
            Blocks::Diagonal(d) if i == j => d[i].clone(),
            Blocks::Diagonal(_) => Matrix::zeros(self.block_dim, self.block_dim),
            Blocks::Full(g) => g[i][j].clone(),
        }
    }

    /// Diagonal blocks `Q_ii`.
    pub fn diagonal_blocks(&self) -> Vec<Matrix<T>> {
        (0..self.num_blocks()).map(|i| self.block(i, i)).collect()
    }

    pub fn apply(&self, c: &CoefficientArray<T>) -> Result<CoefficientArray<T>> {
        if c.num_blocks() != self.num_blocks() || c.block_dim() != self.block_dim {
            return Err(FusionError::ShapeMismatch(format!(
                "operator on {} blocks of dim {}, array has {} blocks of dim {}",
                self.num_blocks(),
                self.block_dim,
                c.num_blocks(),
                c.block_dim()
            )));
        }
        let mut out = Matrix::zeros(self.block_dim, self.num_blocks());
        match &self.blocks {
            Blocks::Diagonal(d) => {
                for (i, q) in d.iter().enumerate() {
                    out.set_column(i, &(q * c.as_matrix().column(i)));
                }
            }
            Blocks::Full(g) => {
                for (i, row) in g.iter().enumerate() {
                    let mut acc = Vector::zeros(self.block_dim);
                    for (j, q) in row.iter().enumerate() {
                        acc += q * c.as_matrix().column(j);
                    }
                    out.set_column(i, &acc);
                }
            }
        }
        Ok(CoefficientArray::from_matrix(out))
    }

    pub fn to_dense(&self) -> Matrix<T> {
        let (n, l) = (self.num_blocks(), self.block_dim);
        let mut out = Matrix::zeros(n * l, n * l);
        for i in 0..n {
            for j in 0..n {
                if i == j || !self.is_diagonal_storage() {
                    out.view_mut((i * l, j * l), (l, l)).copy_from(&self.block(i, j));
                }
            }
        }
        out
    }

    /// Adjoint grid: `(Q*)_ij = Q_ji*`.
    pub fn adjoint(&self) -> Self {
        let blocks = match &self.blocks {
            Blocks::Diagonal(d) => Blocks::Diagonal(d.iter().map(|q| q.adjoint()).collect()),
            Blocks::Full(g) => {
                let n = g.len();
                Blocks::Full((0..n).map(|i| (0..n).map(|j| g[j][i].adjoint()).collect()).collect())
            }
        };
        Self {
            block_dim: self.block_dim,
            blocks,
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.num_blocks() != other.num_blocks() || self.block_dim != other.block_dim {
            return Err(FusionError::ShapeMismatch(
                "composing block operators of different shapes".into(),
            ));
        }
        match (&self.blocks, &other.blocks) {
            (Blocks::Diagonal(a), Blocks::Diagonal(b)) => Self::block_diagonal(a.iter().zip(b).map(|(x, y)| x * y).collect()),
            _ => {
                let n = self.num_blocks();
                let grid = (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| {
                                (0..n).fold(Matrix::zeros(self.block_dim, self.block_dim), |acc, k| {
                                    acc + self.block(i, k) * other.block(k, j)
                                })
                            })
                            .collect()
                    })
                    .collect();
                Self::from_grid(grid)
            }
        }
    }

    /// Operator norm; `max ‖Q_i‖` for diagonal storage.
    pub fn norm(&self) -> f64 {
        match &self.blocks {
            Blocks::Diagonal(d) => d.iter().map(spectral_norm).fold(0.0, f64::max),
            Blocks::Full(_) => spectral_norm(&self.to_dense()),
        }
    }
}

/// Whether every off-diagonal block vanishes within tolerance, i.e. `Q M_k = M_k Q` for all `k`.
pub fn is_block_diagonal<T: Scalar>(q: &BlockOperator<T>, tol: &Tolerance) -> bool {
    if q.is_diagonal_storage() {
        return true;
    }
    let scale = q.norm();
    let n = q.num_blocks();
    (0..n).all(|i| (0..n).all(|j| i == j || spectral_norm(&q.block(i, j)) <= tol.threshold(scale)))
}

/// Dense variant of [`is_block_diagonal`].
pub fn is_block_diagonal_dense<T: Scalar>(q: &Matrix<T>, num_blocks: usize, block_dim: usize, tol: &Tolerance) -> Result<bool> {
    Ok(is_block_diagonal(&BlockOperator::from_dense(q, num_blocks, block_dim)?, tol))
}

/// Block-diagonal and `Q_k V_k = W_k` for every `k`.
pub fn is_component_preserving<T: Scalar>(
    q: &BlockOperator<T>,
    v: &FusionFrame<T>,
    w: &FusionFrame<T>,
    tol: &Tolerance,
) -> Result<bool> {
    let n = q.num_blocks();
    if v.len() != n || w.len() != n {
        return Err(FusionError::BlockCountMismatch {
            expected: n,
            found: if v.len() != n { v.len() } else { w.len() },
        });
    }
    if q.block_dim() != v.ambient_dim() || q.block_dim() != w.ambient_dim() {
        return Err(FusionError::ShapeMismatch(
            "operator and frames live in different dimensions".into(),
        ));
    }
    if !is_block_diagonal(q, tol) {
        return Ok(false);
    }
    for k in 0..n {
        let image = q.block(k, k) * v.subspace(k).basis();
        match Subspace::from_spanning(&image, tol) {
            Ok(range) => {
                if !range.approx_eq(w.subspace(k), tol) {
                    return Ok(false);
                }
            }
            Err(FusionError::ZeroSubspace) => return Ok(false),
            Err(e) => return Err(e),
        }
    }
    Ok(true)
}
