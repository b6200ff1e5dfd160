//! Floating-point scalars for the kernel and normed-space layers.
//!
//! Chains stay exact ([`Rational`](crate::Rational)); everything downstream of
//! the kernel is generic over [`Scalar`], implemented for `f32` and `f64`.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, ToPrimitive};

use crate::Rational;

pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + nalgebra::RealField + Debug + Display + Send + Sync + 'static
{
    fn lit(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("f64 literal representable")
    }

    fn from_rational(r: &Rational) -> Self {
        Self::lit(*r.numer() as f64) / Self::lit(*r.denom() as f64)
    }

    fn as_f64(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Square root of a quadratic-form value, clamping float noise in
/// `(-hard_tol, 0)` to zero.
pub(crate) fn clamped_sqrt<T: Scalar>(value: T, hard_tol: f64) -> crate::Result<T> {
    if value < T::lit(-hard_tol) {
        return Err(crate::Error::NotConditionallyNegative {
            value: value.as_f64(),
            tolerance: hard_tol,
        });
    }
    Ok(Float::sqrt(Float::max(value, T::zero())))
}
