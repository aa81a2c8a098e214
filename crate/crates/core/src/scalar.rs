use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst};
use rustfft::FftNum;

/// Floating point type the whole crate is generic over (f32 or f64).
///
/// `Signed::abs` and `Float::abs` are both in scope through the bounds, so
/// generic code calls `Float::abs(x)` explicitly.
pub trait Scalar:
    Float + FloatConst + FftNum + Sum + Default + Debug + Display + LowerExp + Send + Sync + 'static
{
    /// Converts an f64 literal into the scalar type.
    fn lit(x: f64) -> Self;

    /// Widens (or passes through) to f64.
    fn as_f64(self) -> f64;

    /// Converts an integer to the scalar type.
    fn from_len(x: usize) -> Self {
        Self::lit(x as f64)
    }
}

impl Scalar for f32 {
    #[inline]
    fn lit(x: f64) -> Self {
        x as f32
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self as f64
    }
}

impl Scalar for f64 {
    #[inline]
    fn lit(x: f64) -> Self {
        x
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self
    }
}
