//! Floating-point abstraction shared by the metrics and the aggregation code.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};
use serde::Serialize;

/// Real scalar type the metric and aggregation arithmetic runs in.
///
/// Implemented for `f32` and `f64`. Reports and the CLI use `f64`.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Serialize + Send + Sync + 'static
{
    fn from_count(n: u128) -> Self {
        <Self as FromPrimitive>::from_u128(n).expect("count representable as a float")
    }

    fn to_f64_lossy(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl<T> Scalar for T where
    T: Float
        + FromPrimitive
        + ToPrimitive
        + Sum
        + Debug
        + Display
        + Serialize
        + Send
        + Sync
        + 'static
{
}
