//! Scalar abstractions for the moment computations.
//!
//! The combinatorial engine only needs commutative ring arithmetic, so it
//! is written against [`Ring`]. Table construction additionally divides
//! by integer factorials and converts small integers, which is what
//! [`Scalar`] adds. Both traits carry blanket implementations: any type
//! with the right `num-traits` bounds qualifies, in particular `f32`,
//! `f64`, and arbitrary-precision rationals.

use num_traits::{FromPrimitive, One, Zero};
use std::fmt::Debug;
use std::ops::{Div, Neg, Sub};

/// Commutative ring scalar: closed under addition, subtraction,
/// multiplication, and negation, with exact equality.
pub trait Ring:
    Clone + PartialEq + Debug + Zero + One + Neg<Output = Self> + Sub<Output = Self>
{
}

impl<T> Ring for T where
    T: Clone + PartialEq + Debug + Zero + One + Neg<Output = Self> + Sub<Output = Self>
{
}

/// Ring scalar that can also divide and embed small integers, enough to
/// normalize Taylor coefficients and build multinomial weights.
pub trait Scalar: Ring + Div<Output = Self> + FromPrimitive {}

impl<T> Scalar for T where T: Ring + Div<Output = Self> + FromPrimitive {}

/// Embeds `n` into the scalar type.
pub fn from_usize<S: Scalar>(n: usize) -> S {
    S::from_usize(n).expect("small integer must embed into the scalar type")
}

/// `n!` as a scalar, computed by repeated multiplication so that no
/// intermediate overflows a machine integer.
pub fn factorial<S: Scalar>(n: usize) -> S {
    let mut acc = S::one();
    for k in 2..=n {
        acc = acc * from_usize::<S>(k);
    }
    acc
}

/// Multinomial coefficient `m! / (parts[0]! * ... * parts[r-1]!)` where
/// `m` is the sum of the parts. Computed over the integers first so the
/// division is exact for every scalar type.
pub fn multinomial<S: Scalar>(parts: &[usize]) -> S {
    let mut value: u128 = 1;
    let mut seen = 0usize;
    for &part in parts {
        for i in 1..=part {
            seen += 1;
            value = value * seen as u128 / i as u128;
        }
    }
    S::from_u128(value).expect("multinomial coefficient must embed into the scalar type")
}
