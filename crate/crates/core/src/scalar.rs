//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};

/// Floating point scalar the geometry and the checkers are generic over: `f32` or `f64`.
pub trait Scalar:
    num_traits::Float
    + num_traits::FloatConst
    + num_traits::FromPrimitive
    + num_traits::ToPrimitive
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal, rounding to the nearest representable value.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable")
    }

    /// Lossy conversion back to `f64` for reporting.
    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
