//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating point scalar the probability arithmetic is generic over.
///
/// Implemented for `f32` and `f64`. `SIMPLEX_TOL` is the absolute slack
/// accepted when validating that a table sums to one; it is wider for
/// `f32` because single precision cannot hold 1e-9.
pub trait Real: Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static {
    const SIMPLEX_TOL: f64;

    /// Converts an `f64` literal, panicking only if the value is not representable at all.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).unwrap_or_else(Self::infinity)
    }

    /// `x * log2(x)` with the `0 log 0 = 0` convention.
    #[inline]
    fn xlog2x(self) -> Self {
        if self <= Self::zero() {
            Self::zero()
        } else {
            self * self.log2()
        }
    }
}

impl Real for f32 {
    const SIMPLEX_TOL: f64 = 1e-5;
}

impl Real for f64 {
    const SIMPLEX_TOL: f64 = 1e-9;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xlog2x_convention() {
        assert_eq!(0.0f64.xlog2x(), 0.0);
        assert_eq!(1.0f64.xlog2x(), 0.0);
        assert!((0.5f64.xlog2x() + 0.5).abs() < 1e-15);
        assert!((0.5f32.xlog2x() + 0.5).abs() < 1e-6);
    }
}
