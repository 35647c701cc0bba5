//! Scalar abstraction: all field/grid/symbol code is generic over [`Real`],
//! instantiated in practice at `f32` or `f64`.

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, Signed, ToPrimitive};
use std::fmt::{Debug, Display};

/// Floating-point scalar usable throughout the crate: f32 or f64.
///
/// The supertrait list is exactly what the FFT backend (`rustfft::FftNum`)
/// and the numeric kernels need; anything satisfying it gets a blanket impl.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Signed
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Lossless lift to `f64` (f32 and f64 both embed exactly).
    fn to_f64x(self) -> f64 {
        self.to_f64().expect("scalar converts to f64")
    }

    /// Conversion from `f64`, rounding to the target precision.
    fn from_f64x(x: f64) -> Self {
        Self::from_f64(x).expect("scalar converts from f64")
    }
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + ToPrimitive
        + NumAssign
        + Signed
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}
