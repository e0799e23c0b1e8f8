//! Scalar abstraction shared by every numerical module.
//!
//! The engine is written once against [`Real`] and instantiated for `f32`
//! and `f64`. Tolerances that only make sense relative to the machine
//! precision live on the trait so that generic code never hard-codes an
//! `f64` threshold.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use rustfft::FftNum;

/// Floating point type usable by the spectral engine.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + FftNum + Default + Debug + Display + LowerExp
{
    /// Largest admissible |mean(R - S)| for the zero-mean precondition.
    fn mean_tolerance() -> Self;

    /// Target residual scale for the inverse of the speed antiderivative.
    fn solver_tolerance() -> Self;

    /// Convert an `f64` literal. Panics only on non-representable input,
    /// which cannot happen for the finite constants used in this crate.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize fits")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite float")
    }

    #[inline]
    fn two_pi() -> Self {
        Self::TAU()
    }
}

impl Real for f64 {
    fn mean_tolerance() -> Self {
        1e-10
    }

    fn solver_tolerance() -> Self {
        1e-13
    }
}

impl Real for f32 {
    fn mean_tolerance() -> Self {
        1e-4
    }

    fn solver_tolerance() -> Self {
        1e-6
    }
}
