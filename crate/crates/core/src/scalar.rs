//! Scalar abstractions.
//!
//! Floating-point code is written against [`Real`] (implemented for `f32` and
//! `f64`). Kernel coefficient sequences are rational numbers, so they are
//! generic over the weaker [`Coefficient`] trait, which `Ratio<i64>` also
//! implements; this lets the kernel identities be checked without rounding.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_rational::Ratio;
use num_traits::{Float, FloatConst, FromPrimitive, Num, ToPrimitive};
use rustfft::FftNum;

/// A number type that can represent the rationals `num / den` appearing in
/// kernel coefficients.
pub trait Coefficient: Num + Clone + Debug {
    fn ratio(num: i64, den: i64) -> Self;
}

impl Coefficient for f32 {
    fn ratio(num: i64, den: i64) -> Self {
        (num as f64 / den as f64) as f32
    }
}

impl Coefficient for f64 {
    fn ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
}

impl Coefficient for Ratio<i64> {
    fn ratio(num: i64, den: i64) -> Self {
        Ratio::new(num, den)
    }
}

/// Floating-point scalar used by all numerical routines.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + FftNum
    + Coefficient
    + Default
    + Display
    + LowerExp
    + Sum
    + Send
    + Sync
{
    /// Lossy conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}
