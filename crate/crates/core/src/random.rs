//! Seeded generators of random frames, systems and signals.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::frame::FusionFrame;
use crate::linalg::{singular_values, Matrix, Scalar, Tolerance, Vector};
use crate::subspace::Subspace;
use crate::system::{FusionFrameSystem, LocalFrame};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_matrix<T: Scalar, R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> Matrix<T> {
    Matrix::from_fn(rows, cols, |_, _| T::sample_normal(rng))
}

pub fn gaussian_vector<T: Scalar, R: Rng + ?Sized>(rng: &mut R, len: usize) -> Vector<T> {
    Vector::from_fn(len, |_, _| T::sample_normal(rng))
}

/// Uniform weights in `[lo, hi)`.
pub fn weights<R: Rng + ?Sized>(rng: &mut R, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(lo..hi)).collect()
}

/// A `dim`-dimensional subspace drawn from the rotation-invariant distribution.
pub fn subspace<T: Scalar, R: Rng + ?Sized>(rng: &mut R, ambient: usize, dim: usize) -> Subspace<T> {
    loop {
        if let Ok(s) = Subspace::from_spanning(&gaussian_matrix::<T, _>(rng, ambient, dim), &Tolerance::default()) {
            if s.dim() == dim {
                return s;
            }
        }
    }
}

/// Invertible matrix with condition number at most `max_cond`.
pub fn invertible<T: Scalar, R: Rng + ?Sized>(rng: &mut R, n: usize, max_cond: f64) -> Matrix<T> {
    loop {
        let g = gaussian_matrix::<T, _>(rng, n, n);
        let s = singular_values(&g);
        if s[n - 1] > 0.0 && s[0] / s[n - 1] <= max_cond {
            return g;
        }
    }
}

/// `n` random subspaces of `F^l` with random dimensions and weights in `[0.5, 2)`,
/// redrawn until they span.
pub fn fusion_frame<T: Scalar, R: Rng + ?Sized>(rng: &mut R, l: usize, n: usize) -> FusionFrame<T> {
    let min_dim = l.div_ceil(n).max(1);
    loop {
        let dims: Vec<usize> = (0..n).map(|_| rng.random_range(min_dim..=l)).collect();
        let subs = dims.iter().map(|&d| subspace::<T, _>(rng, l, d)).collect();
        let w = weights(rng, n, 0.5, 2.0);
        if let Ok(v) = FusionFrame::from_parts(subs, &w) {
            if v.is_fusion_frame() && v.bounds().lower > 1e-6 {
                return v;
            }
        }
    }
}

/// Splits `l` into `n ≤ l` positive parts.
pub fn partition<R: Rng + ?Sized>(rng: &mut R, l: usize, n: usize) -> Vec<usize> {
    assert!(1 <= n && n <= l, "cannot split {l} into {n} positive parts");
    let mut cuts: Vec<usize> = (1..l).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(n - 1).collect();
    cuts.sort_unstable();
    let mut prev = 0;
    let mut parts = Vec::with_capacity(n);
    for c in cuts.into_iter().chain(std::iter::once(l)) {
        parts.push(c - prev);
        prev = c;
    }
    parts
}

/// Images `U·span(e_block)` of a coordinate decomposition under a random
/// invertible `U`, with random weights.
pub fn fusion_riesz_basis<T: Scalar, R: Rng + ?Sized>(rng: &mut R, l: usize, n: usize) -> FusionFrame<T> {
    let u = invertible::<T, _>(rng, l, 50.0);
    let mut offset = 0;
    let subs = partition(rng, l, n)
        .into_iter()
        .map(|d| {
            let s = Subspace::from_spanning(&u.columns(offset, d).into_owned(), &Tolerance::default())
                .expect("columns of an invertible matrix are independent");
            offset += d;
            s
        })
        .collect();
    FusionFrame::from_parts(subs, &weights(rng, n, 0.5, 2.0)).expect("a Riesz decomposition is a fusion frame")
}

/// Local frames of `d_i + extra` vectors `B_i G_i` with `G_i` Gaussian and
/// of full rank.
pub fn system<T: Scalar, R: Rng + ?Sized>(rng: &mut R, frame: FusionFrame<T>, extra: usize) -> FusionFrameSystem<T> {
    let tol = *frame.tolerance();
    let locals = frame
        .subspaces()
        .into_iter()
        .map(|s| loop {
            let k = s.dim() + rng.random_range(0..=extra);
            let d = s.basis() * gaussian_matrix::<T, _>(rng, s.dim(), k);
            if let Ok(lf) = LocalFrame::for_subspace(s.clone(), d, &tol) {
                if lf.bounds.lower > 1e-6 {
                    break lf;
                }
            }
        })
        .collect();
    FusionFrameSystem::new(frame, locals).expect("local frames span their components")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Complex64;

    #[test]
    fn generators_are_deterministic() {
        let a: FusionFrame<f64> = fusion_frame(&mut seeded(5), 6, 3);
        let b: FusionFrame<f64> = fusion_frame(&mut seeded(5), 6, 3);
        assert_eq!(a.frame_operator(), b.frame_operator());
    }

    #[test]
    fn riesz_bases_and_partitions() {
        let mut rng = seeded(1);
        for _ in 0..20 {
            let l = rng.random_range(1..10);
            let n = rng.random_range(1..=l);
            let p = partition(&mut rng, l, n);
            assert_eq!(p.len(), n);
            assert_eq!(p.iter().sum::<usize>(), l);
            assert!(p.iter().all(|&d| d > 0));
            let v: FusionFrame<Complex64> = fusion_riesz_basis(&mut rng, l, n);
            assert!(v.is_riesz_basis());
        }
    }

    #[test]
    fn systems_have_valid_locals() {
        let mut rng = seeded(2);
        let v: FusionFrame<f64> = fusion_frame(&mut rng, 5, 3);
        let s = system(&mut rng, v, 2);
        for lf in s.locals() {
            assert!(lf.len() >= lf.subspace.dim());
            assert!(lf.bounds.lower > 0.0);
        }
    }
}
