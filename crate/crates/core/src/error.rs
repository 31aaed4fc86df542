//! Crate-wide error type.
//!
//! A single enum keeps the signatures of the word, algebra, and product
//! operations uniform; each variant records enough position or name
//! information to point at the offending input.

use crate::Label;
use thiserror::Error;

/// Everything that can go wrong while validating words, labels, tables,
/// or product queries. Positions are 1-indexed to match word notation.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A Motzkin word must contain at least one letter.
    #[error("word is empty")]
    EmptyWord,

    /// The first and last letter of a reduced Motzkin word must be 1.
    #[error("letter {letter} at position {position} must be 1 at a word boundary")]
    BadEndpoint { position: usize, letter: u32 },

    /// Consecutive letters may differ by at most one.
    #[error("step into position {position} changes the level by more than one")]
    BadStep { position: usize },

    /// Letters are positive integers.
    #[error("letter at position {position} is not positive")]
    NonPositiveLetter { position: usize },

    /// A label tuple or factor tuple does not match the word length.
    #[error("expected {expected} entries, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    /// Adjacent factors of an alternating tuple must carry distinct labels.
    #[error("labels at positions {position} and {} coincide", position + 1)]
    AdjacentLabels { position: usize },

    /// A tuple of factors or labels must be nonempty.
    #[error("tuple is empty")]
    EmptyTuple,

    /// Jet arithmetic requires operands truncated at the same order.
    #[error("jet orders differ: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    /// A derivative of order beyond the truncation order was requested.
    #[error("derivative order {requested} exceeds truncation order {order}")]
    DerivativeOrder { requested: usize, order: usize },

    /// Elements from different algebras cannot be combined.
    #[error("algebra mismatch: {left} vs {right}")]
    AlgebraMismatch { left: Label, right: Label },

    /// A generator does not belong to the algebra it is used in.
    #[error("generator {generator} is not declared in algebra {label}")]
    UnknownGenerator { label: Label, generator: String },

    /// A moment that the computation needs is not present in the table.
    /// Missing entries are always an error, never an implicit zero.
    #[error("table {functional} for algebra {label} has no entry for {monomial}")]
    MissingMoment {
        label: Label,
        functional: &'static str,
        monomial: String,
    },

    /// Moments of the unit are pinned to one with vanishing derivatives.
    #[error("moments of the unit are fixed by normalization and cannot be overridden")]
    UnitMomentFixed,

    /// A built-in law name was not recognized.
    #[error("unknown law {name:?}")]
    UnknownLaw { name: String },

    /// A law parameter was missing or malformed.
    #[error("law {name:?}: {message}")]
    BadLawParameter { name: String, message: String },

    /// The context has no algebra under the given label.
    #[error("no algebra registered under label {0}")]
    UnknownAlgebra(Label),

    /// A second-state table was requested in a context built without one.
    #[error("algebra {0} carries no second-state table in this context")]
    PsiUnavailable(Label),

    /// A conditionally free context requires a second-state table for
    /// every algebra.
    #[error("conditionally free context requires a second-state table for algebra {0}")]
    PsiRequired(Label),

    /// A factor violates the centering precondition of a closed formula.
    #[error("factor {position} is not centered under {functional}: its moment is nonzero")]
    CenteringViolation {
        position: usize,
        functional: &'static str,
    },

    /// An operation that only applies in one mode was called in the other.
    #[error("operation requires {required} mode, context is in {actual} mode")]
    ModeMismatch {
        required: &'static str,
        actual: &'static str,
    },
}
