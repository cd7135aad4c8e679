//! Exact and iterative reconstruction from fusion frame data.

use crate::coefspace::CoefficientArray;
use crate::error::{FusionError, Result};
use crate::frame::{FrameBounds, FusionFrame};
use crate::linalg::{Scalar, Vector};

/// `f = S_V⁻¹ S_V f`, computed with a Cholesky solve.
pub fn reconstruct_exact<T: Scalar>(v: &FusionFrame<T>, f: &Vector<T>) -> Result<Vector<T>> {
    if f.len() != v.ambient_dim() {
        return Err(FusionError::DimensionMismatch {
            expected: v.ambient_dim(),
            found: f.len(),
        });
    }
    v.solve(&(v.frame_operator() * f))
}

/// `f = S_V⁻¹ D_V c` for analysis coefficients `c = C_V f`.
pub fn reconstruct_from_coefficients<T: Scalar>(v: &FusionFrame<T>, c: &CoefficientArray<T>) -> Result<Vector<T>> {
    v.solve(&v.synthesis(c)?)
}

/// `λ_max(S_V) / λ_min(S_V)`.
pub fn condition_number<T: Scalar>(v: &FusionFrame<T>) -> Result<f64> {
    if !v.is_fusion_frame() {
        return Err(FusionError::NotFusionFrame);
    }
    Ok(v.bounds().condition())
}

/// When the frame algorithm stops.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StopRule {
    /// Stop once `‖f − g_n‖ ≤ target_eps · ‖f‖`.
    pub target_eps: f64,
    pub max_iter: usize,
    pub keep_iterates: bool,
}

impl Default for StopRule {
    fn default() -> Self {
        Self {
            target_eps: 1e-8,
            max_iter: 10_000,
            keep_iterates: false,
        }
    }
}

impl StopRule {
    pub fn iterations(n: usize) -> Self {
        Self {
            target_eps: 0.0,
            max_iter: n,
            keep_iterates: false,
        }
    }
}

/// Errors (and optionally iterates) of the frame algorithm.
#[derive(Debug, Clone)]
pub struct IterationTrace<T: Scalar> {
    /// `errors[n] = ‖f − g_n‖`, starting at `g_0 = 0`.
    pub errors: Vec<f64>,
    pub iterates: Option<Vec<Vector<T>>>,
    /// `(B − A) / (B + A)`.
    pub rate_bound: f64,
    pub signal_norm: f64,
}

impl<T: Scalar> IterationTrace<T> {
    pub fn iterations(&self) -> usize {
        self.errors.len().saturating_sub(1)
    }

    /// `rate^n ‖f‖`.
    pub fn bound(&self, n: usize) -> f64 {
        self.rate_bound.powi(n as i32) * self.signal_norm
    }

    /// Whether every error respects the guaranteed decay, up to `slack` relative to `‖f‖`.
    pub fn satisfies_bound(&self, slack: f64) -> bool {
        self.errors
            .iter()
            .enumerate()
            .all(|(n, &e)| e <= self.bound(n) + slack * self.signal_norm)
    }

    pub fn final_error(&self) -> f64 {
        self.errors.last().copied().unwrap_or(0.0)
    }

    /// `(n, error, bound)` rows.
    pub fn rows(&self) -> impl Iterator<Item = (usize, f64, f64)> + '_ {
        self.errors.iter().enumerate().map(|(n, &e)| (n, e, self.bound(n)))
    }
}

/// Iterations after which the guaranteed bound drops below `eps`.
pub fn predicted_iterations(rate: f64, eps: f64) -> usize {
    if rate <= 0.0 {
        return 1;
    }
    // guard against ln rounding pushing an exact integer over
    (eps.ln() / rate.ln() - 1e-9).ceil().max(1.0) as usize
}

/// Richardson iteration `g_n = g_{n−1} + 2/(A+B) S_V (f − g_{n−1})`.
///
/// Any valid bounds work (`A ≤ A_opt`, `B ≥ B_opt`); the guaranteed rate is
/// `(B − A)/(B + A)`.
pub fn frame_algorithm<T: Scalar>(
    v: &FusionFrame<T>,
    f: &Vector<T>,
    bounds: FrameBounds,
    stop: StopRule,
) -> Result<IterationTrace<T>> {
    let (a, b) = (bounds.lower, bounds.upper);
    if !(a > 0.0) || a > b || !b.is_finite() {
        return Err(FusionError::InvalidBounds { lower: a, upper: b });
    }
    if f.len() != v.ambient_dim() {
        return Err(FusionError::DimensionMismatch {
            expected: v.ambient_dim(),
            found: f.len(),
        });
    }
    let s = v.frame_operator();
    let lambda = 2.0 / (a + b);
    let norm = f.norm();
    let sf = s * f;
    let mut g = Vector::zeros(f.len());
    let mut errors = vec![norm];
    let mut iterates = stop.keep_iterates.then(|| vec![g.clone()]);
    let target = stop.target_eps * norm;
    let mut n = 0;
    while errors[n] > target && n < stop.max_iter {
        let step = (&sf - s * &g).scale(lambda);
        g += step;
        n += 1;
        errors.push((f - &g).norm());
        if let Some(it) = iterates.as_mut() {
            it.push(g.clone());
        }
    }
    Ok(IterationTrace {
        errors,
        iterates,
        rate_bound: (b - a) / (b + a),
        signal_norm: norm,
    })
}
