//! Scalar abstraction shared by every numerical routine.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Real floating-point type the library is generic over (`f32` or `f64`).
pub trait Real: Float + FloatConst + FromPrimitive + Debug + Display + Send + Sync + 'static {
    /// Converts an `f64` literal into this type.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable")
    }

    /// Converts a count into this type.
    fn count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable")
    }

    /// Machine epsilon scaled by a safety factor.
    fn eps_times(factor: f64) -> Self {
        Self::epsilon() * Self::lit(factor)
    }
}

impl Real for f32 {}
impl Real for f64 {}
