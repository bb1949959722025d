//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};
use serde::Serialize;

/// Real floating-point scalar: `f32` or `f64`.
///
/// Tolerances are specified once, in `f64`, in [`crate::tolerances`]. They
/// are converted with [`Real::tol`], which never returns less than a small
/// multiple of the type's machine epsilon so that the same thresholds stay
/// attainable in single precision.
pub trait Real:
    Float
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Default
    + Debug
    + Display
    + Serialize
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from `f64`.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 is representable in every Real")
    }

    /// Lossy conversion to `f64`.
    fn f64(self) -> f64 {
        self.to_f64().expect("Real converts to f64")
    }

    /// A tolerance given in double precision, floored at `64 * epsilon`.
    fn tol(x: f64) -> Self {
        let floor = Self::epsilon() * Self::of(64.0);
        Self::of(x).max(floor)
    }

    /// `self > 0` and finite; false for NaN.
    fn is_positive_finite(self) -> bool {
        self.is_finite() && self > Self::zero()
    }

    fn usize(n: usize) -> Self {
        Self::from_usize(n).expect("count is representable")
    }
}

impl<T> Real for T where
    T: Float
        + FromPrimitive
        + ToPrimitive
        + NumAssign
        + Sum
        + Default
        + Debug
        + Display
        + Serialize
        + Send
        + Sync
        + 'static
{
}
