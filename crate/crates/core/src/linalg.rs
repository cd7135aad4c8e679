//! Dense linear algebra kernel shared by every other module.
//!
//! All routines are generic over [`Scalar`], which is implemented for `f64`
//! and `Complex64`. Adjoints always conjugate, so the real case is simply the
//! complex code path with zero imaginary parts.

use std::fmt;

use nalgebra::{Complex, ComplexField, DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{FusionError, Result};

pub type Complex64 = Complex<f64>;
pub type Matrix<T> = DMatrix<T>;
pub type Vector<T> = DVector<T>;

/// The ground field of a computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Real => f.write_str("real"),
            Field::Complex => f.write_str("complex"),
        }
    }
}

/// Field element usable throughout the library.
pub trait Scalar: ComplexField<RealField = f64> + Copy + Send + Sync {
    const FIELD: Field;

    /// Converts a complex number into this field. Returns `None` when the
    /// value has a non-zero imaginary part and the field is real.
    fn from_complex(z: Complex64) -> Option<Self>;

    fn to_complex(self) -> Complex64;

    /// Standard normal sample (circularly symmetric, unit variance, for complex).
    fn sample_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;
}

impl Scalar for f64 {
    const FIELD: Field = Field::Real;

    fn from_complex(z: Complex64) -> Option<Self> {
        (z.im == 0.0).then_some(z.re)
    }

    fn to_complex(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }

    fn sample_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.sample(StandardNormal)
    }
}

impl Scalar for Complex64 {
    const FIELD: Field = Field::Complex;

    fn from_complex(z: Complex64) -> Option<Self> {
        Some(z)
    }

    fn to_complex(self) -> Complex64 {
        self
    }

    fn sample_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    }
}

/// Relative and absolute tolerances used for every numerical decision.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { rel: 1e-10, abs: 1e-12 }
    }
}

impl Tolerance {
    pub fn new(rel: f64, abs: f64) -> Result<Self> {
        if !(rel > 0.0 && rel.is_finite()) {
            return Err(FusionError::InvalidTolerance(format!("rel must be positive, got {rel}")));
        }
        if !(abs > 0.0 && abs.is_finite()) {
            return Err(FusionError::InvalidTolerance(format!("abs must be positive, got {abs}")));
        }
        Ok(Self { rel, abs })
    }

    /// `max(rel * scale, abs)`.
    pub fn threshold(&self, scale: f64) -> f64 {
        (self.rel * scale).max(self.abs)
    }
}

/// Largest singular value.
pub fn spectral_norm<T: Scalar>(m: &Matrix<T>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Singular values in descending order.
pub fn singular_values<T: Scalar>(m: &Matrix<T>) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut sv: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Spectral norm of `a - b`.
pub fn distance<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> f64 {
    spectral_norm(&(a - b))
}

pub fn identity<T: Scalar>(n: usize) -> Matrix<T> {
    Matrix::identity(n, n)
}

fn column_norm<T: Scalar>(col: &[T]) -> f64 {
    col.iter().map(|x| x.modulus_squared()).sum::<f64>().sqrt()
}

/// Householder QR with column pivoting, truncated at the numerical rank.
struct PivotedQr<T: Scalar> {
    rows: usize,
    reflectors: Vec<Vec<T>>,
}

impl<T: Scalar> PivotedQr<T> {
    fn new(a: &Matrix<T>, tol: &Tolerance) -> Result<Self> {
        let rows = a.nrows();
        let cols = a.ncols();
        if cols == 0 || rows == 0 {
            return Err(FusionError::AllZero);
        }
        // column-major working copy
        let mut work: Vec<Vec<T>> = (0..cols).map(|j| a.column(j).iter().copied().collect()).collect();
        let mut reflectors = Vec::new();
        let mut leading = 0.0;
        for k in 0..rows.min(cols) {
            let (pivot, norm) = (k..cols)
                .map(|j| (j, column_norm(&work[j][k..])))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if k == 0 {
                if norm <= tol.abs {
                    return Err(FusionError::AllZero);
                }
                leading = norm;
            } else if norm <= tol.threshold(leading) {
                break;
            }
            work.swap(k, pivot);

            let x = &work[k][k..];
            let x0 = x[0];
            let phase = if x0.modulus() == 0.0 {
                T::one()
            } else {
                x0.unscale(x0.modulus())
            };
            let alpha = -phase.scale(norm);
            let mut v: Vec<T> = x.to_vec();
            v[0] -= alpha;
            let vnorm = column_norm(&v);
            for vi in v.iter_mut() {
                *vi = vi.unscale(vnorm);
            }
            for col in work.iter_mut().skip(k) {
                apply_reflector(&v, &mut col[k..]);
            }
            reflectors.push(v);
        }
        Ok(Self { rows, reflectors })
    }

    fn rank(&self) -> usize {
        self.reflectors.len()
    }

    /// First `rank` columns of the orthogonal factor.
    fn thin_q(&self) -> Matrix<T> {
        let r = self.rank();
        let mut cols: Vec<Vec<T>> = (0..r)
            .map(|j| {
                let mut e = vec![T::zero(); self.rows];
                e[j] = T::one();
                e
            })
            .collect();
        for (k, v) in self.reflectors.iter().enumerate().rev() {
            for col in cols.iter_mut() {
                apply_reflector(v, &mut col[k..]);
            }
        }
        Matrix::from_fn(self.rows, r, |i, j| cols[j][i])
    }
}

/// `x <- (I - 2 v v*) x` for a unit vector `v`.
fn apply_reflector<T: Scalar>(v: &[T], x: &mut [T]) {
    let dot = v
        .iter()
        .zip(x.iter())
        .fold(T::zero(), |acc, (vi, xi)| acc + vi.conjugate() * *xi);
    let s = dot + dot;
    for (xi, vi) in x.iter_mut().zip(v) {
        *xi -= *vi * s;
    }
}

/// Orthonormal basis (as columns) of the column space of `spanning`.
///
/// Rank is decided by pivoted Householder QR: a column is dropped once its
/// residual norm falls below `rel * |R_00|`.
pub fn orthonormalize<T: Scalar>(spanning: &Matrix<T>, tol: &Tolerance) -> Result<Matrix<T>> {
    Ok(PivotedQr::new(spanning, tol)?.thin_q())
}

/// Numerical rank by pivoted QR; zero for a numerically zero matrix.
pub fn numerical_rank<T: Scalar>(m: &Matrix<T>, tol: &Tolerance) -> usize {
    match PivotedQr::new(m, tol) {
        Ok(qr) => qr.rank(),
        Err(_) => 0,
    }
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct SymEig<T: Scalar> {
    /// Ascending.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, aligned with `values`.
    pub vectors: Matrix<T>,
}

impl<T: Scalar> SymEig<T> {
    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    /// `V f(Λ) V*`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Matrix<T> {
        let n = self.vectors.nrows();
        let mut scaled = self.vectors.clone();
        for (j, &lambda) in self.values.iter().enumerate() {
            let s = f(lambda);
            scaled.column_mut(j).iter_mut().for_each(|x| *x = x.scale(s));
        }
        let out = scaled * self.vectors.adjoint();
        debug_assert_eq!(out.nrows(), n);
        out
    }
}

fn check_square<T: Scalar>(a: &Matrix<T>) -> Result<()> {
    if a.nrows() != a.ncols() {
        return Err(FusionError::ShapeMismatch(format!(
            "expected a square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    Ok(())
}

/// Hermitian eigen-decomposition with ascending eigenvalues.
///
/// Each eigenvector is rotated so that its largest-modulus entry is real and
/// positive, which makes the output deterministic.
pub fn eig_sym<T: Scalar>(a: &Matrix<T>, tol: &Tolerance) -> Result<SymEig<T>> {
    check_square(a)?;
    let n = a.nrows();
    if n == 0 {
        return Ok(SymEig {
            values: Vec::new(),
            vectors: Matrix::zeros(0, 0),
        });
    }
    let scale = a.norm();
    let asymmetry = (a - a.adjoint()).norm();
    let threshold = tol.threshold(scale);
    if asymmetry > threshold {
        return Err(FusionError::NotHermitian { asymmetry, threshold });
    }
    let herm = (a + a.adjoint()).unscale(2.0);
    let eig = SymmetricEigen::new(herm);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let col = eig.eigenvectors.column(src);
        let (imax, _) = col.iter().enumerate().fold((0, -1.0), |best, (i, x)| {
            if x.modulus() > best.1 + 1e-14 {
                (i, x.modulus())
            } else {
                best
            }
        });
        let pivot = col[imax];
        let phase = if pivot.modulus() == 0.0 {
            T::one()
        } else {
            pivot.conjugate().unscale(pivot.modulus())
        };
        for i in 0..n {
            vectors[(i, dst)] = col[i] * phase;
        }
    }
    Ok(SymEig { values, vectors })
}

/// Cholesky factor `L` with `A = L L*`.
pub fn cholesky<T: Scalar>(a: &Matrix<T>, tol: &Tolerance) -> Result<Matrix<T>> {
    check_square(a)?;
    let n = a.nrows();
    let mut l = Matrix::<T>::zeros(n, n);
    for j in 0..n {
        let mut diag = a[(j, j)].real();
        for k in 0..j {
            diag -= l[(j, k)].modulus_squared();
        }
        if !(diag > tol.abs) {
            return Err(FusionError::NotPositiveDefinite { index: j, pivot: diag });
        }
        let d = diag.sqrt();
        l[(j, j)] = T::from_real(d);
        for i in (j + 1)..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conjugate();
            }
            l[(i, j)] = s.unscale(d);
        }
    }
    Ok(l)
}

/// Solves `A X = B` for Hermitian positive definite `A` by Cholesky.
pub fn solve_spd<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>, tol: &Tolerance) -> Result<Matrix<T>> {
    if b.nrows() != a.nrows() {
        return Err(FusionError::DimensionMismatch {
            expected: a.nrows(),
            found: b.nrows(),
        });
    }
    let l = cholesky(a, tol)?;
    let n = a.nrows();
    let mut x = b.clone();
    for c in 0..x.ncols() {
        // forward: L y = b
        for i in 0..n {
            let mut s = x[(i, c)];
            for k in 0..i {
                s -= l[(i, k)] * x[(k, c)];
            }
            x[(i, c)] = s / l[(i, i)];
        }
        // backward: L* x = y
        for i in (0..n).rev() {
            let mut s = x[(i, c)];
            for k in (i + 1)..n {
                s -= l[(k, i)].conjugate() * x[(k, c)];
            }
            x[(i, c)] = s / l[(i, i)];
        }
    }
    Ok(x)
}

/// Inverse of a Hermitian positive definite matrix.
pub fn spd_inverse<T: Scalar>(a: &Matrix<T>, tol: &Tolerance) -> Result<Matrix<T>> {
    let inv = solve_spd(a, &identity(a.nrows()), tol)?;
    Ok((&inv + inv.adjoint()).unscale(2.0))
}

/// Moore-Penrose pseudo-inverse via SVD, dropping singular values below
/// `rel * sigma_max`.
pub fn pinv<T: Scalar>(a: &Matrix<T>, tol: &Tolerance) -> Matrix<T> {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return Matrix::zeros(n, m);
    }
    let svd = a.clone().svd(true, true);
    let u = svd.u.expect("u requested");
    let v_t = svd.v_t.expect("v_t requested");
    let sigma_max = svd.singular_values.iter().copied().fold(0.0, f64::max);
    if sigma_max <= tol.abs {
        return Matrix::zeros(n, m);
    }
    let cut = tol.rel * sigma_max;
    let mut out = Matrix::zeros(n, m);
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s > cut {
            let vk = v_t.row(k).adjoint();
            let uk = u.column(k).adjoint();
            out += (vk * uk).unscale(s);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn random<T: Scalar>(rng: &mut ChaCha8Rng, r: usize, c: usize) -> Matrix<T> {
        Matrix::from_fn(r, c, |_, _| T::sample_normal(rng))
    }

    #[test]
    fn tolerance_validation() {
        assert!(Tolerance::new(0.0, 1e-12).is_err());
        assert!(Tolerance::new(1e-10, -1.0).is_err());
        assert!(Tolerance::new(1e-8, 1e-14).is_ok());
    }

    #[test]
    fn orthonormalize_identity() {
        let q = orthonormalize(&identity::<f64>(3), &tol()).unwrap();
        assert_eq!(q.ncols(), 3);
        // projector must be the identity whatever the signs
        assert!(distance(&(&q * q.adjoint()), &identity(3)) < 1e-14);
    }

    #[test]
    fn orthonormalize_two_vectors() {
        let a = dmatrix![1.0, 0.0; 0.0, 1.0; 0.0, 0.5];
        let q = orthonormalize(&a, &tol()).unwrap();
        assert_eq!(q.ncols(), 2);
        // Gram-Schmidt by hand: e1 and (0,1,0.5)/sqrt(1.25)
        let s = 1.25f64.sqrt();
        let expected = dmatrix![1.0, 0.0; 0.0, 1.0 / s; 0.0, 0.5 / s];
        let p = &q * q.transpose();
        let pe = &expected * expected.transpose();
        assert!(distance(&p, &pe) < 1e-14);
        for j in 0..2 {
            let c = q.column(j);
            let matched = (0..2).any(|k| {
                let e = expected.column(k);
                (c - e).norm() < 1e-14 || (c + e).norm() < 1e-14
            });
            assert!(matched, "column {j} is not ±(expected column)");
        }
    }

    #[test]
    fn orthonormalize_rank_deficient() {
        let a = dmatrix![1.0, 2.0; 0.0, 0.0];
        let q = orthonormalize(&a, &tol()).unwrap();
        assert_eq!(q.ncols(), 1);
        assert!((q[(0, 0)].abs() - 1.0).abs() < 1e-15);
        assert!(q[(1, 0)].abs() < 1e-15);
    }

    #[test]
    fn orthonormalize_all_zero() {
        let a = Matrix::<f64>::zeros(3, 2);
        assert_eq!(orthonormalize(&a, &tol()), Err(FusionError::AllZero));
        assert_eq!(numerical_rank(&a, &tol()), 0);
    }

    #[test]
    fn eig_sym_diagonal() {
        let a = Matrix::from_diagonal(&DVector::from_vec(vec![1.0, 2.0, 1.0]));
        let e = eig_sym(&a, &tol()).unwrap();
        assert_eq!(e.values.len(), 3);
        for (got, want) in e.values.iter().zip([1.0, 1.0, 2.0]) {
            assert!((got - want).abs() < 1e-14);
        }
        let e = eig_sym(&identity::<f64>(4), &tol()).unwrap();
        assert!(e.values.iter().all(|v| (v - 1.0).abs() < 1e-14));
    }

    #[test]
    fn eig_sym_two_by_two() {
        // characteristic polynomial x^2 - 7x + 9
        let a = dmatrix![2.0, 1.0; 1.0, 5.0];
        let e = eig_sym(&a, &tol()).unwrap();
        let disc = (49.0f64 - 36.0).sqrt();
        assert!((e.values[0] - (7.0 - disc) / 2.0).abs() < 1e-14);
        assert!((e.values[1] - (7.0 + disc) / 2.0).abs() < 1e-14);
        assert!((e.values[0] * e.values[1] - 9.0).abs() < 1e-13);
    }

    #[test]
    fn eig_sym_rejects_non_hermitian() {
        let a = dmatrix![1.0, 2.0; 0.0, 1.0];
        assert!(matches!(eig_sym(&a, &tol()), Err(FusionError::NotHermitian { .. })));
        let c = dmatrix![Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0); Complex64::new(0.0, 1.0), Complex64::new(1.0, 0.0)];
        assert!(matches!(eig_sym(&c, &tol()), Err(FusionError::NotHermitian { .. })));
    }

    #[test]
    fn eig_sym_complex_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let b = random::<Complex64>(&mut rng, 6, 6);
        let a = &b + b.adjoint();
        let e = eig_sym(&a, &tol()).unwrap();
        let lam = Matrix::from_diagonal(&DVector::from_iterator(6, e.values.iter().map(|&v| Complex64::new(v, 0.0))));
        let resid = (&a * &e.vectors - &e.vectors * lam).norm();
        assert!(resid <= 1e-10 * a.norm());
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn solve_spd_examples() {
        let b = dmatrix![3.0; -1.0];
        assert_eq!(solve_spd(&identity::<f64>(2), &b, &tol()).unwrap(), b);

        let a = dmatrix![2.0, 1.0; 1.0, 5.0];
        let x = solve_spd(&a, &dmatrix![1.0; 2.0], &tol()).unwrap();
        assert!((x[0] - 1.0 / 3.0).abs() < 1e-15 && (x[1] - 1.0 / 3.0).abs() < 1e-15);

        let a = Matrix::from_diagonal(&DVector::from_vec(vec![1.0, 1.0, 2.0]));
        let x = solve_spd(&a, &dmatrix![0.0; 0.0; 4.0], &tol()).unwrap();
        assert!((x - dmatrix![0.0; 0.0; 2.0]).norm() < 1e-15);
    }

    #[test]
    fn solve_spd_rejects_indefinite() {
        let a = dmatrix![1.0, 0.0; 0.0, 0.0];
        assert!(matches!(
            solve_spd(&a, &dmatrix![1.0; 1.0], &tol()),
            Err(FusionError::NotPositiveDefinite { index: 1, .. })
        ));
    }

    #[test]
    fn pinv_examples() {
        assert!(distance(&pinv(&identity::<f64>(3), &tol()), &identity(3)) < 1e-15);
        let p = pinv(&dmatrix![1.0; 1.0], &tol());
        assert_eq!(p.shape(), (1, 2));
        assert!((p[(0, 0)] - 0.5).abs() < 1e-15 && (p[(0, 1)] - 0.5).abs() < 1e-15);
        let z = pinv(&Matrix::<f64>::zeros(2, 3), &tol());
        assert_eq!(z, Matrix::zeros(3, 2));
    }

    #[test]
    fn pinv_penrose_conditions_complex() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        // rank 2, 5x4
        let a = random::<Complex64>(&mut rng, 5, 2) * random::<Complex64>(&mut rng, 2, 4);
        let p = pinv(&a, &tol());
        let scale = a.norm();
        assert!((&a * &p * &a - &a).norm() < 1e-10 * scale);
        assert!((&p * &a * &p - &p).norm() < 1e-10 * p.norm());
        let ap = &a * &p;
        assert!((&ap - ap.adjoint()).norm() < 1e-10);
        let pa = &p * &a;
        assert!((&pa - pa.adjoint()).norm() < 1e-10);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn orthonormalize_is_orthonormal(seed in any::<u64>(), l in 1usize..=64, k in 1usize..=80) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random::<Complex64>(&mut rng, l, k);
            let q = orthonormalize(&a, &tol()).unwrap();
            prop_assert_eq!(q.ncols(), l.min(k));
            let gram = q.adjoint() * &q;
            prop_assert!(distance(&gram, &identity(q.ncols())) <= 10.0 * tol().rel);
            // same column space
            let p = &q * q.adjoint();
            prop_assert!((&p * &a - &a).norm() <= 1e-10 * a.norm());
        }

        #[test]
        fn projector_eigenvalues_are_zero_or_one(seed in any::<u64>(), l in 2usize..=12, k in 1usize..=6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let q = orthonormalize(&random::<f64>(&mut rng, l, k.min(l)), &tol()).unwrap();
            let e = eig_sym(&(&q * q.transpose()), &tol()).unwrap();
            for v in e.values {
                prop_assert!(v.abs() < 1e-10 || (v - 1.0).abs() < 1e-10);
            }
        }

        #[test]
        fn solve_spd_residual(seed in any::<u64>(), n in 1usize..=20) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = random::<Complex64>(&mut rng, n, n);
            let a = &g * g.adjoint() + identity::<Complex64>(n);
            let b = random::<Complex64>(&mut rng, n, 2);
            let x = solve_spd(&a, &b, &tol()).unwrap();
            prop_assert!((&a * &x - &b).norm() <= 1e-10 * a.norm() * x.norm());
        }

        #[test]
        fn pinv_is_an_involution_on_full_rank(seed in any::<u64>(), r in 1usize..=8, c in 1usize..=8) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random::<f64>(&mut rng, r, c);
            let back = pinv(&pinv(&a, &tol()), &tol());
            prop_assert!((back - &a).norm() <= 1e-8 * a.norm());
        }
    }
}
