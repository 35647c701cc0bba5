//! Numerical laboratory for the iterated spherical average Δ(A₁)^N viewed as a
//! Fourier multiplier, discrete modulation-space norms built from the
//! frequency-uniform decomposition, and the lattice/extremal machinery needed
//! to measure the sharp regularity shift σ = 2 − (n−1)N/2.
//!
//! All numeric kernels are generic over the scalar type through [`Real`];
//! concrete `f64` aliases are exported at the crate root.

pub mod dd;
pub mod decomp;
pub mod error;
pub mod extremal;
pub mod fit;
pub mod grid;
pub mod lattice;
pub mod patch;
pub mod scalar;
pub mod special;
pub mod symbol;
pub mod walk;

pub use error::{Error, Result};
pub use scalar::Real;

/// Default-precision sampled field.
pub type Field64 = grid::SampledField<f64>;
/// Single-precision sampled field.
pub type Field32 = grid::SampledField<f32>;
/// Default-precision baseband patch.
pub type Patch64 = patch::BlockPatch<f64>;
