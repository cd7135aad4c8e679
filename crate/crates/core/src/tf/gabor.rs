//! Discrete Gabor systems: modulated, cyclically translated windows.

use std::f64::consts::{PI, SQRT_2};

use super::{AtomSource, GaborPart, TfAtom};
use crate::error::{FusionError, Result};
use crate::linalg::{Complex64, Vector};

/// Lattice parameters of a Gabor system on `Z_L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lattice {
    pub len: usize,
    /// Time shift `a`.
    pub a: usize,
    /// Number of channels `M`; the frequency step is `b = L / M`.
    pub m: usize,
}

impl Lattice {
    pub fn new(len: usize, a: usize, m: usize) -> Result<Self> {
        if len == 0 || a == 0 || m == 0 {
            return Err(FusionError::IncompatibleLattice(format!(
                "L={len}, a={a}, M={m} must be positive"
            )));
        }
        if len % a != 0 {
            return Err(FusionError::IncompatibleLattice(format!("a={a} does not divide L={len}")));
        }
        if len % m != 0 {
            return Err(FusionError::IncompatibleLattice(format!("M={m} does not divide L={len}")));
        }
        Ok(Self { len, a, m })
    }

    pub fn b(&self) -> usize {
        self.len / self.m
    }

    pub fn translations(&self) -> usize {
        self.len / self.a
    }

    /// `M / a`.
    pub fn redundancy(&self) -> f64 {
        self.m as f64 / self.a as f64
    }
}

/// Periodized Gaussian `Σ_j exp(−π (k + jL)² / (tfr·L))`, centred at 0, unit norm.
///
/// `tfr = a·M / L` matches the window to the lattice.
pub fn gaussian_window(len: usize, tfr: f64) -> Vec<f64> {
    let l = len as f64;
    let width = tfr * l;
    let reach = ((width * 40.0).sqrt() / l).ceil() as i64 + 1;
    let mut g: Vec<f64> = (0..len)
        .map(|k| {
            (-reach..=reach)
                .map(|j| {
                    let x = k as f64 + j as f64 * l;
                    (-PI * x * x / width).exp()
                })
                .sum()
        })
        .collect();
    let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
    g.iter_mut().for_each(|x| *x /= norm);
    g
}

fn modulated(lat: &Lattice, window: &[Complex64], m: usize, n: usize) -> Vector<Complex64> {
    let l = lat.len;
    let step = m * lat.b();
    let shift = (n * lat.a) % l;
    Vector::from_fn(l, |k, _| {
        let phase = 2.0 * PI * ((step * k) % l) as f64 / l as f64;
        Complex64::from_polar(1.0, phase) * window[(k + l - shift) % l]
    })
}

fn check_window<W>(lat: &Lattice, window: &[W]) -> Result<()> {
    if window.len() != lat.len {
        return Err(FusionError::IncompatibleLattice(format!(
            "window has length {}, expected {}",
            window.len(),
            lat.len
        )));
    }
    Ok(())
}

/// `g_{m,n}[k] = e^{2πi m b k / L} g[k − na]` for `m < M`, `n < L/a`.
pub fn gabor_system(lat: &Lattice, window: &[Complex64]) -> Result<Vec<TfAtom<Complex64>>> {
    check_window(lat, window)?;
    let mut atoms = Vec::with_capacity(lat.m * lat.translations());
    for n in 0..lat.translations() {
        for m in 0..lat.m {
            atoms.push(TfAtom {
                vector: modulated(lat, window, m, n),
                time: (n * lat.a) as f64,
                freq: (m * lat.b()) as f64,
                source: AtomSource::Gabor {
                    m,
                    n,
                    part: GaborPart::Complex,
                },
            });
        }
    }
    Ok(atoms)
}

/// Real Gabor system for a real window, spanning the same real frame operator
/// as the complex one restricted to `R^L`.
///
/// Channels `0 < m < M/2` contribute `√2·Re g_{m,n}` and `√2·Im g_{m,n}`;
/// channel `0` and, for even `M`, channel `M/2` contribute `g_{m,n}` itself,
/// which is real.
pub fn real_gabor_system(lat: &Lattice, window: &[f64]) -> Result<Vec<TfAtom<f64>>> {
    check_window(lat, window)?;
    let cw: Vec<Complex64> = window.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let half = lat.m / 2;
    let mut atoms = Vec::with_capacity(lat.m * lat.translations());
    for n in 0..lat.translations() {
        for m in 0..=half {
            let g = modulated(lat, &cw, m, n);
            let time = (n * lat.a) as f64;
            let freq = (m * lat.b()) as f64;
            let self_conjugate = m == 0 || 2 * m == lat.m;
            if self_conjugate {
                atoms.push(TfAtom {
                    vector: g.map(|z| z.re),
                    time,
                    freq,
                    source: AtomSource::Gabor {
                        m,
                        n,
                        part: GaborPart::Real,
                    },
                });
            } else {
                atoms.push(TfAtom {
                    vector: g.map(|z| SQRT_2 * z.re),
                    time,
                    freq,
                    source: AtomSource::Gabor {
                        m,
                        n,
                        part: GaborPart::Cos,
                    },
                });
                atoms.push(TfAtom {
                    vector: g.map(|z| SQRT_2 * z.im),
                    time,
                    freq,
                    source: AtomSource::Gabor {
                        m,
                        n,
                        part: GaborPart::Sin,
                    },
                });
            }
        }
    }
    Ok(atoms)
}
