//! Floating-point abstraction for the numeric parts of the crate.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, ToPrimitive};
use serde::{de::DeserializeOwned, Serialize};

/// Trait bound for scalars the models and metrics operate on.
///
/// Implemented for `f32` and `f64`. Random draws and special functions are
/// evaluated in `f64` and converted, so both instantiations see the same
/// underlying sample streams.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Default
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
    /// Converts from `f64`, the type most intermediate computation uses.
    fn from64(value: f64) -> Self {
        Self::from_f64(value).expect("f64 is convertible to any Scalar")
    }

    /// Widens to `f64`.
    fn into64(self) -> f64 {
        self.to_f64().expect("any Scalar is convertible to f64")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
