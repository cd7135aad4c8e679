//! Periodic orthogonal wavelet systems from a Mallat filter bank.

use std::f64::consts::FRAC_1_SQRT_2;

use super::{AtomSource, TfAtom, WaveletChannel};
use crate::error::{FusionError, Result};
use crate::linalg::Vector;

const DB8: &str = include_str!("../../data/db8.txt");

/// Orthogonal two-channel filter bank given by its lowpass filter `h`; the
/// highpass filter is `g[n] = (−1)^n h[K−1−n]`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletFilters {
    lowpass: Vec<f64>,
    highpass: Vec<f64>,
}

impl WaveletFilters {
    /// Validates `Σ h = √2` and `Σ_n h[n] h[n+2k] = δ_k`.
    pub fn from_lowpass(h: Vec<f64>) -> Result<Self> {
        let k = h.len();
        if k < 2 || k % 2 != 0 {
            return Err(FusionError::BadFilters(format!(
                "lowpass length {k} must be even and at least 2"
            )));
        }
        let sum: f64 = h.iter().sum();
        if (sum - std::f64::consts::SQRT_2).abs() > 1e-8 {
            return Err(FusionError::BadFilters(format!("lowpass sums to {sum}, expected √2")));
        }
        for shift in (0..k).step_by(2) {
            let dot: f64 = (0..k - shift).map(|n| h[n] * h[n + shift]).sum();
            let want = if shift == 0 { 1.0 } else { 0.0 };
            if (dot - want).abs() > 1e-8 {
                return Err(FusionError::BadFilters(format!(
                    "lowpass is not orthogonal to its shift by {shift} (inner product {dot:.3e})"
                )));
            }
        }
        let highpass = (0..k)
            .map(|n| if n % 2 == 0 { h[k - 1 - n] } else { -h[k - 1 - n] })
            .collect();
        Ok(Self { lowpass: h, highpass })
    }

    pub fn haar() -> Self {
        Self::from_lowpass(vec![FRAC_1_SQRT_2, FRAC_1_SQRT_2]).expect("Haar filters are orthogonal")
    }

    /// Daubechies filters with eight vanishing moments (16 taps).
    pub fn db8() -> Self {
        Self::parse(DB8).expect("bundled db8 coefficients are valid")
    }

    /// One coefficient per line or separated by commas/whitespace; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut h = Vec::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("");
            for tok in line.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
                h.push(
                    tok.parse::<f64>()
                        .map_err(|e| FusionError::BadFilters(format!("bad coefficient {tok:?}: {e}")))?,
                );
            }
        }
        Self::from_lowpass(h)
    }

    pub fn lowpass(&self) -> &[f64] {
        &self.lowpass
    }

    pub fn highpass(&self) -> &[f64] {
        &self.highpass
    }
}

/// One analysis step: `a[n] = Σ_k h[k] x[2n+k]`, `d[n] = Σ_k g[k] x[2n+k]` (indices mod N).
pub fn analysis_step(x: &[f64], filters: &WaveletFilters) -> (Vec<f64>, Vec<f64>) {
    let n = x.len();
    let half = n / 2;
    let mut a = vec![0.0; half];
    let mut d = vec![0.0; half];
    for i in 0..half {
        for (k, (&h, &g)) in filters.lowpass.iter().zip(&filters.highpass).enumerate() {
            let xi = x[(2 * i + k) % n];
            a[i] += h * xi;
            d[i] += g * xi;
        }
    }
    (a, d)
}

/// Adjoint (and inverse) of [`analysis_step`].
pub fn synthesis_step(a: &[f64], d: &[f64], filters: &WaveletFilters) -> Vec<f64> {
    let n = 2 * a.len();
    let mut x = vec![0.0; n];
    for i in 0..a.len() {
        for (k, (&h, &g)) in filters.lowpass.iter().zip(&filters.highpass).enumerate() {
            x[(2 * i + k) % n] += h * a[i] + g * d[i];
        }
    }
    x
}

fn check_depth(len: usize, depth: usize) -> Result<()> {
    if depth == 0 {
        return Err(FusionError::BadDepth("depth must be at least 1".into()));
    }
    if depth >= usize::BITS as usize || len % (1usize << depth) != 0 || len < (1usize << depth) {
        return Err(FusionError::BadDepth(format!("2^{depth} does not divide L={len}")));
    }
    Ok(())
}

/// Forward transform returning `(d_1, …, d_J, a_J)`.
pub fn dwt(x: &[f64], depth: usize, filters: &WaveletFilters) -> Result<Vec<Vec<f64>>> {
    check_depth(x.len(), depth)?;
    let mut out = Vec::with_capacity(depth + 1);
    let mut approx = x.to_vec();
    for _ in 0..depth {
        let (a, d) = analysis_step(&approx, filters);
        out.push(d);
        approx = a;
    }
    out.push(approx);
    Ok(out)
}

/// Inverse of [`dwt`].
pub fn idwt(coeffs: &[Vec<f64>], filters: &WaveletFilters) -> Vec<f64> {
    let depth = coeffs.len() - 1;
    let mut approx = coeffs[depth].clone();
    for j in (0..depth).rev() {
        approx = synthesis_step(&approx, &coeffs[j], filters);
    }
    approx
}

/// Atoms of the `J`-level periodic wavelet basis of `R^L`.
///
/// Detail level `j` has `L/2^j` atoms at time `2^j (n + 1/2)` and frequency
/// `(3/2)·L/2^{j+1}`; the scaling channel has `L/2^J` atoms at frequency `L/2^{J+1}`.
pub fn wavelet_system(len: usize, depth: usize, filters: &WaveletFilters) -> Result<Vec<TfAtom<f64>>> {
    check_depth(len, depth)?;
    let lf = len as f64;
    let zero_coeffs = || -> Vec<Vec<f64>> {
        (1..=depth)
            .map(|j| vec![0.0; len >> j])
            .chain(std::iter::once(vec![0.0; len >> depth]))
            .collect()
    };
    let mut atoms = Vec::with_capacity(len);
    for slot in 0..=depth {
        let (count, scale, channel) = if slot < depth {
            let j = slot + 1;
            (len >> j, (1usize << j) as f64, WaveletChannel::Detail(j))
        } else {
            (len >> depth, (1usize << depth) as f64, WaveletChannel::Scaling)
        };
        let freq = match channel {
            WaveletChannel::Detail(j) => 1.5 * lf / (1usize << (j + 1)) as f64,
            WaveletChannel::Scaling => lf / (1usize << (depth + 1)) as f64,
        };
        for n in 0..count {
            let mut c = zero_coeffs();
            c[slot][n] = 1.0;
            atoms.push(TfAtom {
                vector: Vector::from_vec(idwt(&c, filters)),
                time: scale * (n as f64 + 0.5),
                freq,
                source: AtomSource::Wavelet { channel, n },
            });
        }
    }
    Ok(atoms)
}
