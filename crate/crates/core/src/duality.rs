//! Dual fusion frames: Q-duals, canonical and alternate duals, left and right
//! inverses of the analysis operator, and the identity-Q case.

use serde::Serialize;

use crate::coefspace::{BlockOperator, CoefficientArray};
use crate::error::{FusionError, Result};
use crate::frame::{FusionFrame, WeightedSubspace};
use crate::linalg::{eig_sym, spectral_norm, Matrix, Scalar, Tolerance, Vector};
use crate::subspace::{apply_operator, Subspace};

/// Outcome of checking `D_W Q C_V = I`.
#[derive(Debug, Clone)]
pub struct QDualCertificate<T: Scalar> {
    pub v: FusionFrame<T>,
    pub w: FusionFrame<T>,
    pub q: BlockOperator<T>,
    /// `D_W Q C_V`.
    pub composition: Matrix<T>,
    /// `‖D_W Q C_V − I‖`.
    pub residual: f64,
    /// `‖D_V Q* C_W − I‖`.
    pub adjoint_residual: f64,
    pub tolerance: Tolerance,
}

/// Serializable summary of a certificate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CertificateSummary {
    pub residual: f64,
    pub adjoint_residual: f64,
    pub valid: bool,
    pub identity_scale: f64,
    pub scaled_identity_residual: f64,
}

impl<T: Scalar> QDualCertificate<T> {
    pub fn is_valid(&self) -> bool {
        self.residual <= self.tolerance.threshold(1.0)
    }

    pub fn is_adjoint_valid(&self) -> bool {
        self.adjoint_residual <= self.tolerance.threshold(1.0)
    }

    /// `c` minimizing `‖D_W Q C_V − c I‖_F`, i.e. `tr / L`.
    pub fn identity_scale(&self) -> f64 {
        let l = self.composition.nrows();
        if l == 0 {
            return 0.0;
        }
        (0..l).map(|i| self.composition[(i, i)].real()).sum::<f64>() / l as f64
    }

    /// `‖D_W Q C_V − c I‖` for `c = identity_scale()`.
    pub fn scaled_identity_residual(&self) -> f64 {
        let l = self.composition.nrows();
        let c = T::from_real(self.identity_scale());
        spectral_norm(&(&self.composition - Matrix::identity(l, l) * c))
    }

    pub fn summary(&self) -> CertificateSummary {
        CertificateSummary {
            residual: self.residual,
            adjoint_residual: self.adjoint_residual,
            valid: self.is_valid(),
            identity_scale: self.identity_scale(),
            scaled_identity_residual: self.scaled_identity_residual(),
        }
    }
}

fn check_pair<T: Scalar>(v: &FusionFrame<T>, w: &FusionFrame<T>, q: &BlockOperator<T>) -> Result<()> {
    if v.ambient_dim() != w.ambient_dim() || q.block_dim() != v.ambient_dim() {
        return Err(FusionError::ShapeMismatch(format!(
            "frames in dimensions {} and {}, operator blocks of size {}",
            v.ambient_dim(),
            w.ambient_dim(),
            q.block_dim()
        )));
    }
    if v.len() != w.len() || q.num_blocks() != v.len() {
        return Err(FusionError::ShapeMismatch(format!(
            "frames with {} and {} components, operator with {} blocks",
            v.len(),
            w.len(),
            q.num_blocks()
        )));
    }
    Ok(())
}

/// `D_W Q C_V = Σ_ij w_i v_j P_{W_i} Q_ij P_{V_j}`.
fn compose<T: Scalar>(v: &FusionFrame<T>, w: &FusionFrame<T>, q: &BlockOperator<T>) -> Matrix<T> {
    let l = v.ambient_dim();
    let pv: Vec<Matrix<T>> = v.subspaces().iter().map(|s| s.projector().into_matrix()).collect();
    let pw: Vec<Matrix<T>> = w.subspaces().iter().map(|s| s.projector().into_matrix()).collect();
    let mut out = Matrix::zeros(l, l);
    for (i, pw_i) in pw.iter().enumerate() {
        let cols: Vec<usize> = if q.is_diagonal_storage() {
            vec![i]
        } else {
            (0..v.len()).collect()
        };
        for j in cols {
            let term = pw_i * q.block(i, j) * &pv[j];
            out += term.scale(w.weight(i) * v.weight(j));
        }
    }
    out
}

fn identity_residual<T: Scalar>(m: &Matrix<T>) -> f64 {
    let l = m.nrows();
    spectral_norm(&(m - Matrix::identity(l, l)))
}

/// Checks whether `W` is a Q-dual of `V`, reporting both `D_W Q C_V` and `D_V Q* C_W`.
pub fn verify_q_dual<T: Scalar>(v: &FusionFrame<T>, w: &FusionFrame<T>, q: &BlockOperator<T>) -> Result<QDualCertificate<T>> {
    check_pair(v, w, q)?;
    let composition = compose(v, w, q);
    let adjoint = compose(w, v, &q.adjoint());
    Ok(QDualCertificate {
        residual: identity_residual(&composition),
        adjoint_residual: identity_residual(&adjoint),
        composition,
        v: v.clone(),
        w: w.clone(),
        q: q.clone(),
        tolerance: *v.tolerance(),
    })
}

/// Block-diagonal duality `Σ v_i w_i P_{W_i} Q_i P_{V_i} = I`.
pub fn verify_block_dual<T: Scalar>(v: &FusionFrame<T>, w: &FusionFrame<T>, qs: Vec<Matrix<T>>) -> Result<QDualCertificate<T>> {
    if qs.len() != v.len() {
        return Err(FusionError::ShapeMismatch(format!(
            "{} blocks for {} components",
            qs.len(),
            v.len()
        )));
    }
    verify_q_dual(v, w, &BlockOperator::block_diagonal(qs)?)
}

fn check_weights(weights: &[f64], n: usize) -> Result<()> {
    if weights.len() != n {
        return Err(FusionError::DimensionMismatch {
            expected: n,
            found: weights.len(),
        });
    }
    for (i, &w) in weights.iter().enumerate() {
        if !(w.is_finite() && w > 0.0) {
            return Err(FusionError::InvalidWeight { index: i, value: w });
        }
    }
    Ok(())
}

/// Canonical dual `(S_V⁻¹ V_i, w_i)` with `Q = ⊕ (v_i/w_i) S_V⁻¹ P_{V_i}`.
///
/// `weights = None` keeps the weights of `V`.
pub fn canonical_dual<T: Scalar>(v: &FusionFrame<T>, weights: Option<&[f64]>) -> Result<(FusionFrame<T>, BlockOperator<T>)> {
    let s_inv = v.inverse_frame_operator()?;
    let own = v.weights();
    let w = weights.unwrap_or(&own);
    check_weights(w, v.len())?;
    let tol = *v.tolerance();
    let mut comps = Vec::with_capacity(v.len());
    let mut blocks = Vec::with_capacity(v.len());
    for (i, c) in v.components().iter().enumerate() {
        comps.push(WeightedSubspace::new(apply_operator(&s_inv, &c.subspace, &tol)?, w[i]));
        blocks.push((&s_inv * c.subspace.projector().matrix()).scale(c.weight / w[i]));
    }
    Ok((
        FusionFrame::with_tolerance(comps, tol)?,
        BlockOperator::block_diagonal(blocks)?,
    ))
}

/// A left inverse of `C_V`, with the free parameter it was built from.
#[derive(Debug, Clone)]
pub struct LeftInverse<T: Scalar> {
    pub matrix: Matrix<T>,
    pub free_part: Matrix<T>,
}

impl<T: Scalar> LeftInverse<T> {
    /// `L_i`: the `i`-th `L×L` column block.
    pub fn block(&self, i: usize) -> Matrix<T> {
        let l = self.matrix.nrows();
        self.matrix.columns(i * l, l).into_owned()
    }

    pub fn num_blocks(&self) -> usize {
        self.matrix.ncols().checked_div(self.matrix.nrows()).unwrap_or(0)
    }
}

/// `(C_V S_V⁻¹ D_V, S_V⁻¹)`: the projection onto the range of `C_V`, and `S_V⁻¹`.
fn range_projection<T: Scalar>(v: &FusionFrame<T>) -> Result<(Matrix<T>, Matrix<T>)> {
    let s_inv = v.inverse_frame_operator()?;
    let c = v.analysis_matrix();
    let p = &c * &s_inv * c.adjoint();
    Ok((p, s_inv))
}

/// `S_V⁻¹ D_V + L_free (I − C_V S_V⁻¹ D_V)`.
pub fn left_inverse<T: Scalar>(v: &FusionFrame<T>, free: &Matrix<T>) -> Result<LeftInverse<T>> {
    let l = v.ambient_dim();
    let nl = v.len() * l;
    if free.nrows() != l || free.ncols() != nl {
        return Err(FusionError::ShapeMismatch(format!(
            "free part is {}x{}, expected {l}x{nl}",
            free.nrows(),
            free.ncols()
        )));
    }
    let (p, s_inv) = range_projection(v)?;
    let complement = Matrix::identity(nl, nl) - p;
    let matrix = s_inv * v.synthesis_matrix() + free * complement;
    Ok(LeftInverse {
        matrix,
        free_part: free.clone(),
    })
}

/// The canonical left inverse `S_V⁻¹ D_V`.
pub fn canonical_left_inverse<T: Scalar>(v: &FusionFrame<T>) -> Result<LeftInverse<T>> {
    left_inverse(v, &Matrix::zeros(v.ambient_dim(), v.len() * v.ambient_dim()))
}

/// `C_V S_V⁻¹ + (I − C_V S_V⁻¹ D_V) R_free`.
pub fn right_inverse<T: Scalar>(v: &FusionFrame<T>, free: &Matrix<T>) -> Result<Matrix<T>> {
    let l = v.ambient_dim();
    let nl = v.len() * l;
    if free.nrows() != nl || free.ncols() != l {
        return Err(FusionError::ShapeMismatch(format!(
            "free part is {}x{}, expected {nl}x{l}",
            free.nrows(),
            free.ncols()
        )));
    }
    let (p, s_inv) = range_projection(v)?;
    let complement = Matrix::identity(nl, nl) - p;
    Ok(v.analysis_matrix() * s_inv + complement * free)
}

/// Component-preserving dual induced by a left inverse:
/// `W_i = L_i V_i`, `Q = ⊕ (1/w_i) L_i`.
pub fn cp_dual_from_left_inverse<T: Scalar>(
    v: &FusionFrame<T>,
    linv: &LeftInverse<T>,
    weights: &[f64],
) -> Result<(FusionFrame<T>, BlockOperator<T>)> {
    check_weights(weights, v.len())?;
    let l = v.ambient_dim();
    if linv.matrix.nrows() != l || linv.matrix.ncols() != v.len() * l {
        return Err(FusionError::ShapeMismatch("left inverse does not match the frame".into()));
    }
    let tol = *v.tolerance();
    let mut comps = Vec::with_capacity(v.len());
    let mut blocks = Vec::with_capacity(v.len());
    for (i, &weight) in weights.iter().enumerate() {
        let li = linv.block(i);
        let image = &li * v.subspace(i).basis();
        let wi = match Subspace::from_spanning(&image, &tol) {
            Ok(s) => s,
            Err(FusionError::ZeroSubspace) => return Err(FusionError::DegenerateSubspace { index: i }),
            Err(e) => return Err(e),
        };
        comps.push(WeightedSubspace::new(wi, weight));
        blocks.push(li.unscale(weight));
    }
    Ok((
        FusionFrame::with_tolerance(comps, tol)?,
        BlockOperator::block_diagonal(blocks)?,
    ))
}

/// Factors `T = w P` with `P` an orthogonal projection and `w > 0`.
fn factor_scaled_projector<T: Scalar>(index: usize, t: &Matrix<T>, tol: &Tolerance) -> Result<(f64, Subspace<T>)> {
    let norm = spectral_norm(t);
    if norm <= tol.abs {
        return Err(FusionError::NotScaledProjector {
            index,
            reason: "block vanishes".into(),
        });
    }
    let asym = spectral_norm(&(t - t.adjoint()));
    if asym > tol.threshold(norm) {
        return Err(FusionError::NotScaledProjector {
            index,
            reason: format!("not Hermitian (asymmetry {asym:.3e})"),
        });
    }
    let e = eig_sym(t, tol)?;
    let top = e.max();
    if top <= 0.0 {
        return Err(FusionError::NotScaledProjector {
            index,
            reason: "no positive eigenvalue".into(),
        });
    }
    let cut = tol.threshold(top);
    let mut kept = Vec::new();
    for (k, &lambda) in e.values.iter().enumerate() {
        if lambda.abs() <= cut {
            continue;
        }
        if (lambda - top).abs() > cut {
            return Err(FusionError::NotScaledProjector {
                index,
                reason: format!("nonzero eigenvalues {lambda:.6e} and {top:.6e} differ"),
            });
        }
        kept.push(k);
    }
    let w = kept.iter().map(|&k| e.values[k]).sum::<f64>() / kept.len() as f64;
    let basis = Matrix::from_fn(t.nrows(), kept.len(), |i, j| e.vectors[(i, kept[j])]);
    Ok((w, Subspace::from_orthonormal(basis, &Tolerance::new(1e-8, tol.abs)?)?))
}

/// The dual `W` with `Q = I`, obtained from the parametrization
/// `w_i P_{W_i} = v_i S⁻¹ P_i + L_i − (Σ_k L_k v_k P_k) v_i S⁻¹ P_i`.
pub fn identity_q_dual<T: Scalar>(v: &FusionFrame<T>, ls: &[Matrix<T>]) -> Result<FusionFrame<T>> {
    let l = v.ambient_dim();
    if ls.len() != v.len() {
        return Err(FusionError::ShapeMismatch(format!(
            "{} parameter blocks for {} components",
            ls.len(),
            v.len()
        )));
    }
    if let Some(bad) = ls.iter().find(|m| m.nrows() != l || m.ncols() != l) {
        return Err(FusionError::ShapeMismatch(format!(
            "parameter block is {}x{}, expected {l}x{l}",
            bad.nrows(),
            bad.ncols()
        )));
    }
    let s_inv = v.inverse_frame_operator()?;
    let tol = *v.tolerance();
    let projectors: Vec<Matrix<T>> = v.subspaces().iter().map(|s| s.projector().into_matrix()).collect();
    let mut mix = Matrix::zeros(l, l);
    for (k, lk) in ls.iter().enumerate() {
        mix += (lk * &projectors[k]).scale(v.weight(k));
    }
    let mut comps = Vec::with_capacity(v.len());
    for (i, li) in ls.iter().enumerate() {
        let base = (&s_inv * &projectors[i]).scale(v.weight(i));
        let t = &base + li - &mix * &base;
        let (w, s) = factor_scaled_projector(i, &t, &tol)?;
        comps.push(WeightedSubspace::new(s, w));
    }
    let w = FusionFrame::with_tolerance(comps, tol)?;
    let cert = verify_q_dual(v, &w, &BlockOperator::identity(v.len(), l))?;
    if !cert.is_valid() {
        return Err(FusionError::PreconditionFailed(format!(
            "identity-Q dual fails to reconstruct (residual {:.3e})",
            cert.residual
        )));
    }
    Ok(w)
}

/// `(v_i P_i S_V⁻¹ f)_i`: the minimal-norm coefficients of `f`.
pub fn dual_coefficients<T: Scalar>(v: &FusionFrame<T>, f: &Vector<T>) -> Result<CoefficientArray<T>> {
    let g = v.solve(f)?;
    v.analysis(&g)
}

/// Subspace relations between a fusion Riesz basis and one of its block-diagonal duals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RieszDualReport {
    /// `S_V⁻¹ V_i ⊆ W_i` for every `i`.
    pub contained: bool,
    /// `S_V⁻¹ V_i = W_i` for every `i`.
    pub equal: bool,
    pub dual_is_riesz: bool,
}

impl RieszDualReport {
    /// Containment always, equality whenever the dual is itself a Riesz basis.
    pub fn holds(&self) -> bool {
        self.contained && (!self.dual_is_riesz || self.equal)
    }
}

pub fn riesz_block_dual_report<T: Scalar>(v: &FusionFrame<T>, w: &FusionFrame<T>, qs: Vec<Matrix<T>>) -> Result<RieszDualReport> {
    if !v.is_riesz_basis() {
        return Err(FusionError::PreconditionFailed(
            "the primal family is not a fusion Riesz basis".into(),
        ));
    }
    let cert = verify_block_dual(v, w, qs)?;
    if !cert.is_valid() {
        return Err(FusionError::PreconditionFailed(format!(
            "not a block-diagonal dual (residual {:.3e})",
            cert.residual
        )));
    }
    let tol = *v.tolerance();
    let s_inv = v.inverse_frame_operator()?;
    let mut contained = true;
    let mut equal = true;
    for i in 0..v.len() {
        let target = apply_operator(&s_inv, v.subspace(i), &tol)?;
        contained &= target.is_contained_in(w.subspace(i), &tol);
        equal &= target.approx_eq(w.subspace(i), &tol);
    }
    Ok(RieszDualReport {
        contained,
        equal,
        dual_is_riesz: w.is_riesz_basis(),
    })
}

pub fn riesz_block_dual_check<T: Scalar>(v: &FusionFrame<T>, w: &FusionFrame<T>, qs: Vec<Matrix<T>>) -> Result<bool> {
    Ok(riesz_block_dual_report(v, w, qs)?.holds())
}
