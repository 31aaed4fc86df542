//! Noncommutative algebra layer: jets, polynomial elements, moment
//! tables, cumulants, and evaluation contexts.
//!
//! A functional deformed along one parameter is represented by its jet,
//! the truncated Taylor expansion at the base point. Elements are
//! noncommutative polynomials in the generators of a single algebra, and
//! a moment table assigns a jet to every monomial the computation may
//! ask for, either from explicit entries or from a built-in law.

mod context;
mod cumulant;
mod element;
mod jet;
mod table;

pub use context::{AlgebraSpec, Mode, SpecContext};
pub use cumulant::{boolean_cumulant, free_cumulant};
pub use element::{Element, Gen, Monomial};
pub use jet::Jet;
pub use table::{FunctionalKind, FunctionalTable, Law, TableBuilder};
