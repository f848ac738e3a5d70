//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive};

/// Real floating-point scalar the library is generic over.
///
/// Implemented for `f32` and `f64`. Validation tolerances are written as
/// double-precision literals and widened for lower-precision types through
/// [`Real::tol`].
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Converts a literal. Panics only for values the type cannot represent.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    /// A tolerance calibrated for `f64`, rescaled to this type's precision.
    fn tol(x: f64) -> Self;

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable in scalar type")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    #[inline]
    fn tol(x: f64) -> Self {
        x
    }
}

impl Real for f32 {
    #[inline]
    fn tol(x: f64) -> Self {
        let ratio = f64::from(f32::EPSILON) / f64::EPSILON;
        (x * ratio).min(x.max(1e-3)) as f32
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerances_scale_with_precision() {
        assert_eq!(<f64 as Real>::tol(1e-12), 1e-12);
        let t = <f32 as Real>::tol(1e-12);
        assert!(t > 1e-6 && t <= 1e-3);
        assert_eq!(<f32 as Real>::tol(0.5), 0.5);
    }
}
