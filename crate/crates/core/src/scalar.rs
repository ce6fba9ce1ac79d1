//! Scalar abstractions shared by the exact and floating-point code paths.
//!
//! The classical formulas and the first-passage solver are written against
//! [`Field`], which is implemented for `f32`, `f64` and [`BigRational`].
//! Quantum amplitudes use [`Real`] (`f32`/`f64`) inside `Complex<R>`.

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};

/// A field the exact/approximate classical machinery can run over.
pub trait Field:
    Clone + Debug + PartialOrd + Num + Neg<Output = Self> + Send + Sync + 'static
{
    fn from_bigint(v: &BigInt) -> Self;

    fn from_biguint(v: &BigUint) -> Self {
        Self::from_bigint(&BigInt::from(v.clone()))
    }

    fn from_u64(v: u64) -> Self {
        Self::from_bigint(&BigInt::from(v))
    }

    /// `true` when the value cannot serve as an elimination pivot.
    fn is_negligible(&self) -> bool;

    fn to_f64_lossy(&self) -> f64;
}

impl Field for f64 {
    fn from_bigint(v: &BigInt) -> Self {
        v.to_f64().unwrap_or(f64::INFINITY)
    }

    fn is_negligible(&self) -> bool {
        self.abs() <= f64::MIN_POSITIVE
    }

    fn to_f64_lossy(&self) -> f64 {
        *self
    }
}

impl Field for f32 {
    fn from_bigint(v: &BigInt) -> Self {
        v.to_f32().unwrap_or(f32::INFINITY)
    }

    fn is_negligible(&self) -> bool {
        self.abs() <= f32::MIN_POSITIVE
    }

    fn to_f64_lossy(&self) -> f64 {
        *self as f64
    }
}

impl Field for BigRational {
    fn from_bigint(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }

    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn to_f64_lossy(&self) -> f64 {
        rational_to_f64(self)
    }
}

/// Floating-point type used for quantum amplitudes.
pub trait Real:
    num_traits::Float + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("finite literal")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Converts an exact rational to the nearest `f64`, including values far
/// outside the range where `numer / denom` would overflow each side.
pub fn rational_to_f64(v: &BigRational) -> f64 {
    if let Some(f) = v.to_f64() {
        if f.is_finite() {
            return f;
        }
    }
    let sign = if v.is_negative() { -1.0 } else { 1.0 };
    let num = v.numer().abs();
    let den = v.denom().clone();
    let shift = num.bits() as i64 - den.bits() as i64;
    // Rescale so the quotient lands near 1, then restore the exponent.
    let (n, d) = if shift > 0 {
        (num, den << (shift as usize))
    } else {
        (num << ((-shift) as usize), den)
    };
    let q = BigRational::new(n, d).to_f64().unwrap_or(f64::NAN);
    sign * q * 2f64.powi(shift as i32)
}
