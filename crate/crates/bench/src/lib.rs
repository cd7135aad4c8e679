//! Fixtures shared by the criterion benches.

use fusionframe_core::random::{self, seeded};
use fusionframe_core::tf::{FilterSpec, TfConfig};
use fusionframe_core::{FusionFrame, FusionFrameSystem, Tolerance};

/// Random real fusion frame of `n` subspaces in `R^l`.
pub fn frame(l: usize, n: usize, seed: u64) -> FusionFrame<f64> {
    random::fusion_frame(&mut seeded(seed), l, n)
}

/// Random system with up to two redundant vectors per local frame.
pub fn system(l: usize, n: usize, seed: u64) -> FusionFrameSystem<f64> {
    let mut rng = seeded(seed);
    let v = random::fusion_frame(&mut rng, l, n);
    random::system(&mut rng, v, 2)
}

/// The six-region Gabor/wavelet configuration with the db8 filters.
pub fn tf_config() -> TfConfig {
    TfConfig::example(FilterSpec::Named("db8".into()))
}

pub fn tol() -> Tolerance {
    Tolerance::default()
}
