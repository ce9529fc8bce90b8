//! Scalar abstraction for the reward and advantage math.

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar: `f32` or `f64`.
pub trait Scalar: Float + FromPrimitive + core::fmt::Debug + Copy + 'static {
    /// Lossy conversion from `f64`, used for constants and defaults.
    fn from_f64_lossy(v: f64) -> Self {
        Self::from_f64(v).expect("finite f64 constant converts to any Scalar")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
