use std::fmt;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Floating-point scalar the crate is generic over: `f32` or `f64`.
///
/// All thresholds in this crate are written as `f64` literals and converted
/// through [`FromPrimitive`], so custom scalar types only need the listed
/// bounds.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + NumAssign + fmt::Debug + fmt::Display + 'static
{
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Bring an `f64` literal into the working scalar type.
pub(crate) fn lit<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal must be representable in the scalar type")
}
