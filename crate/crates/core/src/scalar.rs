use std::fmt::Debug;

use num_traits::{FromPrimitive, Num, Signed};

/// Values a step function may take.
///
/// Any signed numeric type works; norm comparisons are only exact for exact
/// types such as [`crate::Rational`].
pub trait Scalar:
    Clone + Debug + PartialOrd + Num + Signed + FromPrimitive + Send + Sync + 'static
{
    /// `2^n`.
    fn pow2(n: u32) -> Self {
        let two = Self::one() + Self::one();
        num_traits::pow(two, n as usize)
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num).expect("representable numerator")
            / Self::from_i64(den).expect("representable denominator")
    }
}

impl<T> Scalar for T where
    T: Clone + Debug + PartialOrd + Num + Signed + FromPrimitive + Send + Sync + 'static
{
}
