//! Fusion frame systems: a fusion frame with a local frame in every subspace.

use crate::coefspace::BlockOperator;
use crate::duality::{verify_q_dual, QDualCertificate};
use crate::error::{FusionError, Result};
use crate::frame::{FrameBounds, FusionFrame, WeightedSubspace};
use crate::linalg::{eig_sym, pinv, spectral_norm, Matrix, Scalar, Tolerance};
use crate::subspace::Subspace;

/// Synthesis matrix of a spanning family of one subspace.
#[derive(Debug, Clone)]
pub struct LocalFrame<T: Scalar> {
    pub subspace: Subspace<T>,
    /// `L×K` matrix whose columns are the frame vectors.
    pub synthesis: Matrix<T>,
    /// Bounds of the frame sequence, taken on the subspace.
    pub bounds: FrameBounds,
}

/// Eigenspace of `D D*` above `rel·λ_max`, with the extreme kept eigenvalues.
fn nonzero_spectrum<T: Scalar>(synthesis: &Matrix<T>, tol: &Tolerance) -> Result<(Subspace<T>, FrameBounds)> {
    if synthesis.ncols() == 0 {
        return Err(FusionError::ZeroSubspace);
    }
    let e = eig_sym(&(synthesis * synthesis.adjoint()), tol)?;
    let top = e.max();
    if top <= tol.abs {
        return Err(FusionError::ZeroSubspace);
    }
    let cut = tol.threshold(top);
    let kept: Vec<usize> = (0..e.values.len()).filter(|&k| e.values[k] > cut).collect();
    let basis = Matrix::from_fn(synthesis.nrows(), kept.len(), |i, j| e.vectors[(i, kept[j])]);
    let subspace = Subspace::from_orthonormal(basis, &Tolerance::new(1e-8, tol.abs)?)?;
    Ok((
        subspace,
        FrameBounds {
            lower: e.values[kept[0]],
            upper: top,
        },
    ))
}

impl<T: Scalar> LocalFrame<T> {
    /// Frame for the numerical column space of `synthesis`: the eigenspace of
    /// `D D*` whose eigenvalues exceed `rel·λ_max`.
    pub fn new(synthesis: Matrix<T>, tol: &Tolerance) -> Result<Self> {
        let (subspace, bounds) = nonzero_spectrum(&synthesis, tol)?;
        Ok(Self {
            subspace,
            synthesis,
            bounds,
        })
    }

    /// Frame for a given subspace; its columns must span exactly that subspace.
    pub fn for_subspace(subspace: Subspace<T>, synthesis: Matrix<T>, tol: &Tolerance) -> Result<Self> {
        let own = Self::new(synthesis, tol)?;
        if !own.subspace.approx_eq(&subspace, tol) {
            return Err(FusionError::PreconditionFailed(
                "local frame vectors do not span the given subspace".into(),
            ));
        }
        Ok(Self { subspace, ..own })
    }

    /// The orthonormal basis of the subspace as a local frame.
    pub fn orthonormal(subspace: &Subspace<T>) -> Self {
        Self {
            subspace: subspace.clone(),
            synthesis: subspace.basis().clone(),
            bounds: FrameBounds { lower: 1.0, upper: 1.0 },
        }
    }

    pub fn len(&self) -> usize {
        self.synthesis.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.synthesis.ncols() == 0
    }

    /// Canonical dual within the subspace: `(D D*)^† D`.
    pub fn canonical_dual(&self, tol: &Tolerance) -> Self {
        let s = &self.synthesis * self.synthesis.adjoint();
        let dual = pinv(&s, tol) * &self.synthesis;
        let b = self.bounds;
        Self {
            subspace: self.subspace.clone(),
            synthesis: dual,
            bounds: FrameBounds {
                lower: 1.0 / b.upper,
                upper: 1.0 / b.lower,
            },
        }
    }
}

/// A fusion frame with one local frame per component.
#[derive(Debug, Clone)]
pub struct FusionFrameSystem<T: Scalar> {
    frame: FusionFrame<T>,
    locals: Vec<LocalFrame<T>>,
}

/// Residuals of a dual-system check by the two available routes.
#[derive(Debug, Clone)]
pub struct SystemDualCertificate<T: Scalar> {
    /// `D_W (⊕ D_ψ C_φ) C_V`.
    pub certificate: QDualCertificate<T>,
    /// `‖D_{wψ} C_{vφ} − I‖`.
    pub global_residual: f64,
}

impl<T: Scalar> SystemDualCertificate<T> {
    pub fn is_valid(&self) -> bool {
        self.certificate.is_valid()
    }

    /// Both routes agree within `10·tol`.
    pub fn routes_agree(&self) -> bool {
        (self.certificate.residual - self.global_residual).abs() <= 10.0 * self.certificate.tolerance.threshold(1.0)
    }
}

impl<T: Scalar> FusionFrameSystem<T> {
    pub fn new(frame: FusionFrame<T>, locals: Vec<LocalFrame<T>>) -> Result<Self> {
        if locals.len() != frame.len() {
            return Err(FusionError::DimensionMismatch {
                expected: frame.len(),
                found: locals.len(),
            });
        }
        let tol = *frame.tolerance();
        for (i, lf) in locals.iter().enumerate() {
            if !lf.subspace.approx_eq(frame.subspace(i), &tol) {
                return Err(FusionError::PreconditionFailed(format!(
                    "local frame {i} does not span component {i}"
                )));
            }
        }
        Ok(Self { frame, locals })
    }

    /// Builds the fusion frame from the column spaces of the local synthesis matrices.
    pub fn from_synthesis(synthesis: Vec<Matrix<T>>, weights: &[f64], tol: Tolerance) -> Result<Self> {
        if synthesis.len() != weights.len() {
            return Err(FusionError::DimensionMismatch {
                expected: synthesis.len(),
                found: weights.len(),
            });
        }
        let locals = synthesis
            .into_iter()
            .map(|d| LocalFrame::new(d, &tol))
            .collect::<Result<Vec<_>>>()?;
        let frame = FusionFrame::with_tolerance(
            locals
                .iter()
                .zip(weights)
                .map(|(lf, &w)| WeightedSubspace::new(lf.subspace.clone(), w))
                .collect(),
            tol,
        )?;
        Ok(Self { frame, locals })
    }

    /// Orthonormal bases as local frames.
    pub fn with_orthonormal_locals(frame: FusionFrame<T>) -> Self {
        let locals = frame.subspaces().iter().map(LocalFrame::orthonormal).collect();
        Self { frame, locals }
    }

    pub fn frame(&self) -> &FusionFrame<T> {
        &self.frame
    }

    pub fn locals(&self) -> &[LocalFrame<T>] {
        &self.locals
    }

    /// `inf A_i` and `sup B_i`.
    pub fn local_bounds(&self) -> FrameBounds {
        let lower = self.locals.iter().map(|l| l.bounds.lower).fold(f64::INFINITY, f64::min);
        let upper = self.locals.iter().map(|l| l.bounds.upper).fold(0.0, f64::max);
        FrameBounds { lower, upper }
    }

    /// `[v_1 D_1, …, v_N D_N]`.
    pub fn global_frame(&self) -> Matrix<T> {
        self.weighted_concat(|lf| &lf.synthesis)
    }

    fn weighted_concat<'a>(&'a self, pick: impl Fn(&'a LocalFrame<T>) -> &'a Matrix<T>) -> Matrix<T> {
        let l = self.frame.ambient_dim();
        let total: usize = self.locals.iter().map(|lf| pick(lf).ncols()).sum();
        let mut out = Matrix::zeros(l, total);
        let mut offset = 0;
        for (i, lf) in self.locals.iter().enumerate() {
            let d = pick(lf);
            out.columns_mut(offset, d.ncols()).copy_from(&d.scale(self.frame.weight(i)));
            offset += d.ncols();
        }
        out
    }

    /// Optimal frame bounds of the global frame.
    pub fn global_bounds(&self) -> Result<FrameBounds> {
        let g = self.global_frame();
        let e = eig_sym(&(&g * g.adjoint()), self.frame.tolerance())?;
        Ok(FrameBounds {
            lower: e.min().max(0.0),
            upper: e.max(),
        })
    }

    pub fn local_canonical_duals(&self) -> Vec<LocalFrame<T>> {
        let tol = *self.frame.tolerance();
        self.locals.iter().map(|lf| lf.canonical_dual(&tol)).collect()
    }

    /// `D_{vφᵈ} C_{vφ}`, checked against `S_V`.
    pub fn fusion_operator_via_locals(&self) -> Result<Matrix<T>> {
        let duals = self.local_canonical_duals();
        let l = self.frame.ambient_dim();
        let mut s = Matrix::zeros(l, l);
        for (i, (lf, d)) in self.locals.iter().zip(&duals).enumerate() {
            s += (&d.synthesis * lf.synthesis.adjoint()).scale(self.frame.weight(i).powi(2));
        }
        let sv = self.frame.frame_operator();
        let gap = spectral_norm(&(&s - sv));
        if gap > self.frame.tolerance().threshold(spectral_norm(sv)) {
            return Err(FusionError::PreconditionFailed(format!(
                "local reconstruction of the fusion frame operator is off by {gap:.3e}"
            )));
        }
        Ok(s)
    }

    /// Checks whether `(W, ψ)` is a dual fusion frame system of `(V, φ)` with
    /// `Q = ⊕ D_{ψ_i} C_{φ_i}`.
    pub fn is_dual_system(&self, other: &FusionFrameSystem<T>) -> Result<SystemDualCertificate<T>> {
        if self.locals.len() != other.locals.len() {
            return Err(FusionError::DimensionMismatch {
                expected: self.locals.len(),
                found: other.locals.len(),
            });
        }
        for (i, (a, b)) in self.locals.iter().zip(&other.locals).enumerate() {
            if a.len() != b.len() {
                return Err(FusionError::LocalSizeMismatch {
                    index: i,
                    left: a.len(),
                    right: b.len(),
                });
            }
        }
        let qs: Vec<Matrix<T>> = self
            .locals
            .iter()
            .zip(&other.locals)
            .map(|(phi, psi)| &psi.synthesis * phi.synthesis.adjoint())
            .collect();
        let certificate = verify_q_dual(&self.frame, &other.frame, &BlockOperator::block_diagonal(qs)?)?;
        let global = other.global_frame() * self.global_frame().adjoint();
        let l = self.frame.ambient_dim();
        let global_residual = spectral_norm(&(global - Matrix::identity(l, l)));
        Ok(SystemDualCertificate {
            certificate,
            global_residual,
        })
    }
}
