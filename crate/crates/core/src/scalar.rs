use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point scalar used throughout the crate: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal into `Self`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("index representable in scalar type")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + ToPrimitive
        + NumAssign
        + Sum
        + Default
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}

/// Pairwise (cascade) summation; deterministic for a fixed input order.
pub fn pairwise_sum<T: Real>(xs: &[T]) -> T {
    const BLOCK: usize = 32;
    if xs.len() <= BLOCK {
        return xs.iter().fold(T::zero(), |acc, &x| acc + x);
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}
