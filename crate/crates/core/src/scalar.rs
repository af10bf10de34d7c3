use std::fmt;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar used by the spectral and geometric layers.
///
/// The combinatorial layer (words, factor sets, occurrence counts) is exact
/// integer arithmetic and takes no scalar parameter. Everything that measures
/// lengths, frequencies, offsets, or eigenvalues is generic over `Scalar`;
/// the crate-root aliases fix `f64`, which is what the pinned tolerances
/// assume. `f32` satisfies the bound and is exercised in tests at looser
/// tolerances.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + fmt::Debug
    + fmt::Display
    + fmt::LowerExp
    + Send
    + Sync
    + 'static
{
}

impl<T> Scalar for T where
    T: Float
        + FromPrimitive
        + ToPrimitive
        + fmt::Debug
        + fmt::Display
        + fmt::LowerExp
        + Send
        + Sync
        + 'static
{
}

/// Converts a finite `f64` constant into the working scalar.
pub(crate) fn s<S: Scalar>(x: f64) -> S {
    S::from_f64(x).expect("finite f64 constant")
}

pub(crate) fn s_usize<S: Scalar>(n: usize) -> S {
    S::from_usize(n).unwrap_or_else(|| s(n as f64))
}

pub(crate) fn s_u64<S: Scalar>(n: u64) -> S {
    S::from_u64(n).unwrap_or_else(|| s(n as f64))
}
