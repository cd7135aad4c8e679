//! Finite-dimensional fusion frames: frame operators, classification, duality,
//! iterative reconstruction and time-frequency fusion systems.
//!
//! Vectors live in `F^L` with `F` either `f64` or [`Complex64`]; every routine is
//! generic over [`Scalar`].

pub mod coefspace;
pub mod duality;
pub mod error;
pub mod frame;
pub mod io;
pub mod linalg;
pub mod random;
pub mod reconstruct;
pub mod subspace;
pub mod system;
pub mod tf;

pub use coefspace::{BlockOperator, CoefficientArray};
pub use duality::{
    canonical_dual, canonical_left_inverse, cp_dual_from_left_inverse, dual_coefficients, identity_q_dual, left_inverse,
    right_inverse, verify_block_dual, verify_q_dual, LeftInverse, QDualCertificate,
};
pub use error::{FusionError, Result};
pub use frame::{Classification, FrameBounds, FusionFrame, WeightedSubspace};
pub use linalg::{Complex64, Field, Matrix, Scalar, Tolerance, Vector};
pub use reconstruct::{frame_algorithm, predicted_iterations, reconstruct_exact, IterationTrace, StopRule};
pub use subspace::Subspace;
pub use system::{FusionFrameSystem, LocalFrame, SystemDualCertificate};
pub use tf::{TfConfig, TfFusionSystem};
