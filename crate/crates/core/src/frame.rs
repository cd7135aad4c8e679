//! Fusion frames, their analysis/synthesis/frame operators, bounds and
//! structural classification.

use serde::{Deserialize, Serialize};

use crate::coefspace::CoefficientArray;
use crate::error::{FusionError, Result};
use crate::linalg::{distance, eig_sym, numerical_rank, singular_values, spd_inverse, Matrix, Scalar, Tolerance, Vector};
use crate::subspace::{apply_operator, concat_bases, minimal_family, Subspace};

/// A subspace with its positive weight.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSubspace<T: Scalar> {
    pub subspace: Subspace<T>,
    pub weight: f64,
}

impl<T: Scalar> WeightedSubspace<T> {
    pub fn new(subspace: Subspace<T>, weight: f64) -> Self {
        Self { subspace, weight }
    }
}

/// Lower and upper frame bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
}

impl FrameBounds {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if !(lower.is_finite() && upper.is_finite()) || lower < 0.0 || upper <= 0.0 || lower > upper {
            return Err(FusionError::InvalidBounds { lower, upper });
        }
        Ok(Self { lower, upper })
    }

    /// `B / A`, infinite when `A` vanishes.
    pub fn condition(&self) -> f64 {
        if self.lower > 0.0 {
            self.upper / self.lower
        } else {
            f64::INFINITY
        }
    }

    pub fn is_frame(&self, tol: &Tolerance) -> bool {
        self.lower > tol.rel * self.upper
    }
}

/// Structural predicates of a fusion frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub is_fusion_frame: bool,
    pub is_tight: bool,
    pub is_parseval: bool,
    pub is_onb_fusion_basis: bool,
    pub is_riesz_basis: bool,
    pub is_exact: bool,
    pub is_minimal: bool,
}

/// An ordered family of weighted subspaces of `F^L`.
///
/// The frame operator `S_V = Σ v_i² P_i` is computed once at construction.
#[derive(Debug, Clone)]
pub struct FusionFrame<T: Scalar> {
    components: Vec<WeightedSubspace<T>>,
    frame_operator: Matrix<T>,
    spans: bool,
    tol: Tolerance,
}

impl<T: Scalar> FusionFrame<T> {
    pub fn new(components: Vec<WeightedSubspace<T>>) -> Result<Self> {
        Self::with_tolerance(components, Tolerance::default())
    }

    pub fn with_tolerance(components: Vec<WeightedSubspace<T>>, tol: Tolerance) -> Result<Self> {
        let l = components.first().ok_or(FusionError::EmptyList)?.subspace.ambient_dim();
        let mut s = Matrix::zeros(l, l);
        for (i, c) in components.iter().enumerate() {
            if c.subspace.ambient_dim() != l {
                return Err(FusionError::DimensionMismatch {
                    expected: l,
                    found: c.subspace.ambient_dim(),
                });
            }
            if !(c.weight.is_finite() && c.weight > 0.0) {
                return Err(FusionError::InvalidWeight {
                    index: i,
                    value: c.weight,
                });
            }
            let b = c.subspace.basis();
            s += (b * b.adjoint()).scale(c.weight * c.weight);
        }
        let s = (&s + s.adjoint()).unscale(2.0);
        let spans = numerical_rank(&concat_bases(l, components.iter().map(|c| &c.subspace)), &tol) == l;
        Ok(Self {
            components,
            frame_operator: s,
            spans,
            tol,
        })
    }

    pub fn from_parts(subspaces: Vec<Subspace<T>>, weights: &[f64]) -> Result<Self> {
        if subspaces.len() != weights.len() {
            return Err(FusionError::DimensionMismatch {
                expected: subspaces.len(),
                found: weights.len(),
            });
        }
        Self::new(
            subspaces
                .into_iter()
                .zip(weights)
                .map(|(s, &w)| WeightedSubspace::new(s, w))
                .collect(),
        )
    }

    /// All weights equal to one.
    pub fn unweighted(subspaces: Vec<Subspace<T>>) -> Result<Self> {
        let w = vec![1.0; subspaces.len()];
        Self::from_parts(subspaces, &w)
    }

    /// Same subspaces with new weights; keeps the tolerance.
    pub fn reweighted(&self, weights: &[f64]) -> Result<Self> {
        if weights.len() != self.len() {
            return Err(FusionError::DimensionMismatch {
                expected: self.len(),
                found: weights.len(),
            });
        }
        Self::with_tolerance(
            self.components
                .iter()
                .zip(weights)
                .map(|(c, &w)| WeightedSubspace::new(c.subspace.clone(), w))
                .collect(),
            self.tol,
        )
    }

    pub fn with_tol(&self, tol: Tolerance) -> Self {
        Self { tol, ..self.clone() }
    }

    pub fn tolerance(&self) -> &Tolerance {
        &self.tol
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn ambient_dim(&self) -> usize {
        self.frame_operator.nrows()
    }

    pub fn components(&self) -> &[WeightedSubspace<T>] {
        &self.components
    }

    pub fn subspace(&self, i: usize) -> &Subspace<T> {
        &self.components[i].subspace
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.components[i].weight
    }

    pub fn weights(&self) -> Vec<f64> {
        self.components.iter().map(|c| c.weight).collect()
    }

    pub fn subspaces(&self) -> Vec<Subspace<T>> {
        self.components.iter().map(|c| c.subspace.clone()).collect()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.subspace.dim()).collect()
    }

    /// `S_V = Σ v_i² P_i`.
    pub fn frame_operator(&self) -> &Matrix<T> {
        &self.frame_operator
    }

    /// Rank test: the subspaces span the ambient space.
    pub fn is_fusion_frame(&self) -> bool {
        self.spans
    }

    /// `S_V⁻¹`.
    pub fn inverse_frame_operator(&self) -> Result<Matrix<T>> {
        if !self.spans {
            return Err(FusionError::NotFusionFrame);
        }
        spd_inverse(&self.frame_operator, &self.tol).map_err(|e| match e {
            FusionError::NotPositiveDefinite { .. } => FusionError::NotFusionFrame,
            other => other,
        })
    }

    /// Solves `S_V x = y`.
    pub fn solve(&self, y: &Vector<T>) -> Result<Vector<T>> {
        if y.len() != self.ambient_dim() {
            return Err(FusionError::DimensionMismatch {
                expected: self.ambient_dim(),
                found: y.len(),
            });
        }
        if !self.spans {
            return Err(FusionError::NotFusionFrame);
        }
        let rhs = Matrix::from_column_slice(y.len(), 1, y.as_slice());
        let x = crate::linalg::solve_spd(&self.frame_operator, &rhs, &self.tol).map_err(|e| match e {
            FusionError::NotPositiveDefinite { .. } => FusionError::NotFusionFrame,
            other => other,
        })?;
        Ok(x.column(0).into_owned())
    }

    fn check_vector(&self, f: &Vector<T>) -> Result<()> {
        if f.len() != self.ambient_dim() {
            return Err(FusionError::DimensionMismatch {
                expected: self.ambient_dim(),
                found: f.len(),
            });
        }
        Ok(())
    }

    /// `C_V f = (v_i P_i f)_i`.
    pub fn analysis(&self, f: &Vector<T>) -> Result<CoefficientArray<T>> {
        self.check_vector(f)?;
        let mut out = CoefficientArray::zeros(self.ambient_dim(), self.len());
        for (i, c) in self.components.iter().enumerate() {
            let p = c.subspace.project(f)?.scale(c.weight);
            out.set_block(i, &p)?;
        }
        Ok(out)
    }

    /// `D_V (c_i) = Σ v_i P_i c_i`.
    pub fn synthesis(&self, c: &CoefficientArray<T>) -> Result<Vector<T>> {
        if c.num_blocks() != self.len() {
            return Err(FusionError::BlockCountMismatch {
                expected: self.len(),
                found: c.num_blocks(),
            });
        }
        if c.block_dim() != self.ambient_dim() {
            return Err(FusionError::DimensionMismatch {
                expected: self.ambient_dim(),
                found: c.block_dim(),
            });
        }
        let mut out = Vector::zeros(self.ambient_dim());
        for (i, comp) in self.components.iter().enumerate() {
            out += comp.subspace.project(&c.block(i))?.scale(comp.weight);
        }
        Ok(out)
    }

    /// Matrix of `C_V`, of size `(N·L)×L`.
    pub fn analysis_matrix(&self) -> Matrix<T> {
        let l = self.ambient_dim();
        let mut out = Matrix::zeros(self.len() * l, l);
        for (i, c) in self.components.iter().enumerate() {
            let p = c.subspace.projector().into_matrix().scale(c.weight);
            out.view_mut((i * l, 0), (l, l)).copy_from(&p);
        }
        out
    }

    /// Matrix of `D_V`, of size `L×(N·L)`.
    pub fn synthesis_matrix(&self) -> Matrix<T> {
        let l = self.ambient_dim();
        let mut out = Matrix::zeros(l, self.len() * l);
        for (i, c) in self.components.iter().enumerate() {
            let p = c.subspace.projector().into_matrix().scale(c.weight);
            out.view_mut((0, i * l), (l, l)).copy_from(&p);
        }
        out
    }

    /// Optimal bounds: extreme eigenvalues of `S_V`.
    pub fn bounds(&self) -> FrameBounds {
        let e = eig_sym(&self.frame_operator, &self.tol).expect("frame operator is Hermitian by construction");
        FrameBounds {
            lower: e.min().max(0.0),
            upper: e.max(),
        }
    }

    pub fn is_tight(&self) -> bool {
        let b = self.bounds();
        b.upper - b.lower <= self.tol.threshold(b.upper)
    }

    pub fn is_parseval(&self) -> bool {
        let l = self.ambient_dim();
        distance(&self.frame_operator, &Matrix::identity(l, l)) <= self.tol.threshold(1.0)
    }

    /// Pairwise orthogonal subspaces, weights one, Parseval.
    pub fn is_onb_fusion_basis(&self) -> bool {
        let unit = self.components.iter().all(|c| (c.weight - 1.0).abs() <= self.tol.rel);
        if !unit || !self.is_parseval() {
            return false;
        }
        let n = self.len();
        (0..n).all(|i| {
            (i + 1..n).all(|j| {
                let cross = self.subspace(i).basis().adjoint() * self.subspace(j).basis();
                // ‖P_i P_j‖ = ‖B_i* B_j‖
                crate::linalg::spectral_norm(&cross) <= self.tol.threshold(1.0)
            })
        })
    }

    /// Fusion frame with `Σ dim V_i = L`.
    pub fn is_riesz_basis(&self) -> bool {
        self.spans && self.dims().iter().sum::<usize>() == self.ambient_dim()
    }

    /// Removing any single component destroys the spanning property.
    pub fn is_exact(&self) -> bool {
        if !self.spans {
            return false;
        }
        let l = self.ambient_dim();
        (0..self.len()).all(|i| {
            let others: Vec<&Subspace<T>> = self
                .components
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, c)| &c.subspace)
                .collect();
            others.is_empty() || numerical_rank(&concat_bases(l, others), &self.tol) < l
        })
    }

    pub fn is_minimal(&self) -> bool {
        minimal_family(&self.subspaces(), &self.tol)
    }

    pub fn classify(&self) -> Classification {
        Classification {
            is_fusion_frame: self.is_fusion_frame(),
            is_tight: self.is_tight(),
            is_parseval: self.is_parseval(),
            is_onb_fusion_basis: self.is_onb_fusion_basis(),
            is_riesz_basis: self.is_riesz_basis(),
            is_exact: self.is_exact(),
            is_minimal: self.is_minimal(),
        }
    }

    /// `max_{i,k} ‖v_i² P_k S_V⁻¹ P_i − δ_ik P_i‖`.
    ///
    /// Vanishes exactly when the frame is a fusion Riesz basis.
    pub fn riesz_delta_residual(&self) -> Result<f64> {
        let s_inv = self.inverse_frame_operator()?;
        let projectors: Vec<Matrix<T>> = self.components.iter().map(|c| c.subspace.projector().into_matrix()).collect();
        let mut worst: f64 = 0.0;
        for (i, pi) in projectors.iter().enumerate() {
            let right = (&s_inv * pi).scale(self.weight(i).powi(2));
            for (k, pk) in projectors.iter().enumerate() {
                let mut m = pk * &right;
                if i == k {
                    m -= pi;
                }
                worst = worst.max(crate::linalg::spectral_norm(&m));
            }
        }
        Ok(worst)
    }

    /// `UV = (U V_i, v_i)` with the guaranteed bounds
    /// `A ‖U⁻¹‖⁻² ‖U‖⁻²` and `B ‖U⁻¹‖² ‖U‖²`.
    pub fn transform(&self, u: &Matrix<T>) -> Result<(FusionFrame<T>, FrameBounds)> {
        let l = self.ambient_dim();
        if u.nrows() != l || u.ncols() != l {
            return Err(FusionError::ShapeMismatch(format!("operator must be {l}x{l}")));
        }
        let components = self
            .components
            .iter()
            .map(|c| Ok(WeightedSubspace::new(apply_operator(u, &c.subspace, &self.tol)?, c.weight)))
            .collect::<Result<Vec<_>>>()?;
        let sv = singular_values(u);
        let (smax, smin) = (sv[0], sv[sv.len() - 1]);
        // ‖U‖ = smax, ‖U⁻¹‖ = 1/smin
        let kappa2 = (smax / smin).powi(2);
        let b = self.bounds();
        let guaranteed = FrameBounds {
            lower: b.lower / kappa2,
            upper: b.upper * kappa2,
        };
        Ok((Self::with_tolerance(components, self.tol)?, guaranteed))
    }

    /// Writes a fusion Riesz basis as `V_i = U E_i` with `(E_i)` a partition of
    /// the coordinate basis and `U = [v_1 B_1 … v_N B_N]`.
    pub fn riesz_factorization(&self) -> Result<(Matrix<T>, Vec<Subspace<T>>)> {
        if !self.is_riesz_basis() {
            return Err(FusionError::NotRieszBasis);
        }
        let l = self.ambient_dim();
        let mut u = Matrix::zeros(l, l);
        let mut e = Vec::with_capacity(self.len());
        let mut offset = 0;
        for c in &self.components {
            let d = c.subspace.dim();
            u.columns_mut(offset, d).copy_from(&c.subspace.basis().scale(c.weight));
            e.push(Subspace::coordinate(l, &(offset..offset + d).collect::<Vec<_>>())?);
            offset += d;
        }
        Ok((u, e))
    }

    /// `(S_V^{-1/2} V_i, 1)`.
    pub fn sqrt_inverse_transform(&self) -> Result<FusionFrame<T>> {
        if !self.spans {
            return Err(FusionError::NotFusionFrame);
        }
        let e = eig_sym(&self.frame_operator, &self.tol)?;
        if e.min() <= self.tol.threshold(e.max()) {
            return Err(FusionError::NotFusionFrame);
        }
        let root_inv = e.map(|x| 1.0 / x.sqrt());
        let subspaces = self
            .components
            .iter()
            .map(|c| apply_operator(&root_inv, &c.subspace, &self.tol))
            .collect::<Result<Vec<_>>>()?;
        Self::with_tolerance(
            subspaces.into_iter().map(|s| WeightedSubspace::new(s, 1.0)).collect(),
            self.tol,
        )
    }

    /// Subspace-wise equality (same length, equal subspaces, equal weights).
    pub fn approx_eq(&self, other: &FusionFrame<T>, tol: &Tolerance) -> bool {
        self.len() == other.len()
            && self
                .components
                .iter()
                .zip(&other.components)
                .all(|(a, b)| a.subspace.approx_eq(&b.subspace, tol) && (a.weight - b.weight).abs() <= tol.threshold(a.weight))
    }
}
