//! Exact scalar types used for value-group coordinates, rational field
//! elements and phase angles.
//!
//! Everything in this crate is generic over [`Scalar`]. Floating point types
//! are deliberately not scalars: comparisons in value groups and the
//! open/closed distinction in the phase null test must be exact.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, Signed};

/// An exact, totally ordered field of characteristic zero (in practice a
/// ratio of integers).
pub trait Scalar: Clone + Ord + Hash + Debug + Display + FromStr + Num + Signed + Send + Sync + 'static {
    /// `n / d`; panics if `d == 0`.
    fn from_ratio(n: i64, d: i64) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    /// Lossless conversion to an arbitrary-precision rational.
    fn to_big(&self) -> BigRational;

    /// Fractional part in `[0, 1)`.
    fn fract_part(&self) -> Self;

    fn is_integral(&self) -> bool;
}

impl<T> Scalar for Ratio<T>
where
    T: Clone + Integer + Signed + Hash + Debug + Display + FromStr + From<i64> + Into<BigInt> + Send + Sync + 'static,
{
    fn from_ratio(n: i64, d: i64) -> Self {
        Ratio::new(T::from(n), T::from(d))
    }

    fn to_big(&self) -> BigRational {
        BigRational::new(self.numer().clone().into(), self.denom().clone().into())
    }

    fn fract_part(&self) -> Self {
        self - self.floor()
    }

    fn is_integral(&self) -> bool {
        self.is_integer()
    }
}
