//! Scalar abstraction shared by every module.
//!
//! All physics and numerics are written against [`Real`], which `f32` and
//! `f64` both satisfy. SI-unit beam quantities span roughly 1e-54..1e42 in
//! intermediate products, so formulas are arranged to stay inside the `f32`
//! exponent range where that is cheap; `f64` remains the supported working
//! precision for quantitative results.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

use crate::error::{Error, Result};

/// Floating point scalar usable throughout the crate.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Default
    + Debug
    + Display
    + LowerExp
    + Sum
    + Send
    + Sync
    + 'static
{
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + ToPrimitive
        + Default
        + Debug
        + Display
        + LowerExp
        + Sum
        + Send
        + Sync
        + 'static
{
}

/// Converts an `f64` literal into the working scalar.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal must be representable in the scalar type")
}

/// Lossy conversion used for error payloads and heap ordering.
#[inline]
pub(crate) fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Hyperbolic secant. Saturates to zero instead of producing NaN once
/// `cosh` overflows.
#[inline]
pub fn sech<T: Real>(x: T) -> T {
    x.cosh().recip()
}

/// `n` uniformly spaced samples covering `[start, stop]`, endpoints exact.
pub fn linspace<T: Real>(start: T, stop: T, n: usize) -> Result<Vec<T>> {
    if n < 2 {
        return Err(Error::domain("n_points", format!("need at least 2 points, got {n}")));
    }
    if !(start.is_finite() && stop.is_finite()) {
        return Err(Error::domain("range", "endpoints must be finite"));
    }
    if stop < start {
        return Err(Error::domain(
            "range",
            format!("inverted range [{start}, {stop}]"),
        ));
    }
    let last = n - 1;
    let denom = lit::<T>(last as f64);
    let span = stop - start;
    Ok((0..n)
        .map(|j| {
            if j == last {
                stop
            } else {
                start + span * lit::<T>(j as f64) / denom
            }
        })
        .collect())
}
