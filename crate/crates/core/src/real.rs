//! Scalar abstraction shared by the exact information-theoretic code.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar the probability engine is generic over.
///
/// The associated tolerances scale with the precision of the type: probability
/// tables must sum to one within `NORM_TOL`, and information quantities that
/// come out below zero by no more than `INFO_TOL` are treated as rounding noise.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    const NORM_TOL: f64;
    const INFO_TOL: f64;
    /// Tolerance for exact information identities (sums of many entropies).
    const IDENTITY_TOL: f64;
    /// Slack allowed on the favorable side of an inequality check.
    const INEQUALITY_SLACK: f64;

    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar representable as f64")
    }
}

impl Real for f64 {
    const NORM_TOL: f64 = 1e-12;
    const INFO_TOL: f64 = 1e-12;
    const IDENTITY_TOL: f64 = 1e-10;
    const INEQUALITY_SLACK: f64 = 1e-12;
}

impl Real for f32 {
    const NORM_TOL: f64 = 1e-5;
    const INFO_TOL: f64 = 1e-5;
    const IDENTITY_TOL: f64 = 1e-4;
    const INEQUALITY_SLACK: f64 = 1e-5;
}

/// `-p log2 p` with the `0 log 0 = 0` convention.
#[inline]
pub(crate) fn surprisal_term<F: Real>(p: F) -> F {
    if p > F::zero() {
        -p * p.log2()
    } else {
        F::zero()
    }
}
