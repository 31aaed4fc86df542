//! Mixed moments and infinitesimal derivatives of noncommutative products.
//!
//! This crate computes moments of free, Boolean, and conditionally free
//! products of noncommutative probability spaces whose states carry
//! truncated one-parameter deformations (jets). The central device is the
//! decomposition of a mixed moment over reduced Motzkin words: each word
//! contributes a product of Boolean cumulants taken over the blocks of its
//! level return partition, and derivatives of any order fall out of the
//! same decomposition by the Leibniz rule or by closed formulas for the
//! few path shapes that survive centering.
//!
//! Modules:
//!
//! * [`motzkin`]: reduced Motzkin words, level return partitions,
//!   adaptedness of label tuples, path classification, and counting.
//! * [`ncalg`]: scalars, jets, polynomial elements, moment tables,
//!   Boolean and free cumulants, and evaluation contexts.
//! * [`functionals`]: the per-word functionals attached to a Motzkin
//!   word and their derivatives (Leibniz, closed-form, higher-order).
//! * [`products`]: product-level operations, from full moment jets
//!   through infinitesimal and higher-order moments to the closed
//!   product formulas for the free, Boolean, and conditionally free
//!   cases.
//! * [`oracle`]: independent brute-force evaluators (centering
//!   recursions and a noncrossing-partition sum) used to cross-check the
//!   Motzkin-path implementations.
//! * [`partitions`]: small set-partition enumeration helpers.
//!
//! All arithmetic is generic over a scalar ring; the crate-root aliases
//! fix the exact rational instantiation used by the test suites and the
//! command-line driver.

pub mod error;
pub mod functionals;
pub mod motzkin;
pub mod ncalg;
pub mod oracle;
pub mod partitions;
pub mod products;
pub mod scalar;

pub use error::Error;
pub use scalar::{Ring, Scalar};

use std::fmt;

/// Exact rational scalar used by the command-line driver and the test
/// suites. Arbitrary precision keeps every comparison exact.
pub type Rat = num_rational::BigRational;

/// Jet over exact rationals.
pub type RatJet = ncalg::Jet<Rat>;

/// Polynomial element over exact rationals.
pub type RatElement = ncalg::Element<Rat>;

/// Moment table over exact rationals.
pub type RatTable = ncalg::FunctionalTable<Rat>;

/// Evaluation context over exact rationals.
pub type RatContext = ncalg::SpecContext<Rat>;

/// Identifier of one algebra in a product.
///
/// Labels tell the product machinery which factors live in the same
/// algebra; everything else about them is opaque.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Label(pub String);

impl Label {
    pub fn new(name: impl Into<String>) -> Self {
        Label(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Label {
    fn from(s: &str) -> Self {
        Label(s.to_owned())
    }
}

impl From<String> for Label {
    fn from(s: String) -> Self {
        Label(s)
    }
}
