//! Test signal: Gaussian-windowed noise, a sinusoid and a short impulse.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::Vector;

/// For `L = 384`: uniform `(0, 1)` noise under a Gaussian centred at `L/2`,
/// plus `sin(2π·48k/L)`, plus `2` on samples `320..=325`.
///
/// Other lengths scale the sinusoid frequency (`L/8`) and impulse position.
pub fn composite_signal(len: usize, seed: u64) -> Vector<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let l = len as f64;
    let centre = l / 2.0;
    let sigma = l / 16.0;
    let freq = (len / 8) as f64;
    let start = len * 320 / 384;
    let stop = (len * 326).div_ceil(384).max(start + 1).min(len);
    Vector::from_fn(len, |k, _| {
        let x = k as f64;
        let noise: f64 = rng.random::<f64>() * (-0.5 * ((x - centre) / sigma).powi(2)).exp();
        let tone = (2.0 * PI * freq * x / l).sin();
        let impulse = if (start..stop).contains(&k) { 2.0 } else { 0.0 };
        noise + tone + impulse
    })
}
