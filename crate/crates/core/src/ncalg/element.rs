//! Noncommutative polynomial elements of a single algebra.
//!
//! An element is a finite linear combination of monomials, where a
//! monomial is a word in the generators of the algebra and the empty
//! word is the unit. Multiplication concatenates words bilinearly; it is
//! only defined between elements of the same algebra.

use crate::error::Error;
use crate::scalar::Ring;
use crate::Label;
use std::collections::BTreeMap;
use std::fmt;

/// Name of one generator of an algebra.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Gen(pub String);

impl Gen {
    pub fn new(name: impl Into<String>) -> Self {
        Gen(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Gen {
    fn from(s: &str) -> Self {
        Gen(s.to_owned())
    }
}

/// A word in the generators; the empty word is the unit monomial.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Monomial {
    gens: Vec<Gen>,
}

impl Monomial {
    pub fn unit() -> Self {
        Monomial { gens: Vec::new() }
    }

    pub fn new(gens: Vec<Gen>) -> Self {
        Monomial { gens }
    }

    /// Single-letter word.
    pub fn generator(g: Gen) -> Self {
        Monomial { gens: vec![g] }
    }

    /// `g` repeated `k` times.
    pub fn power(g: Gen, k: usize) -> Self {
        Monomial { gens: vec![g; k] }
    }

    pub fn is_unit(&self) -> bool {
        self.gens.is_empty()
    }

    /// Word length, the degree of the monomial.
    pub fn degree(&self) -> usize {
        self.gens.len()
    }

    pub fn gens(&self) -> &[Gen] {
        &self.gens
    }

    /// Concatenation.
    pub fn concat(&self, other: &Monomial) -> Monomial {
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Monomial { gens }
    }
}

impl fmt::Display for Monomial {
    /// Generators joined with dots; the unit renders as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.gens.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<&str> = self.gens.iter().map(|g| g.as_str()).collect();
        f.write_str(&parts.join("."))
    }
}

/// A polynomial in the generators of one algebra. The term map never
/// stores zero coefficients, so structural equality is semantic
/// equality.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Element<S> {
    label: Label,
    terms: BTreeMap<Monomial, S>,
}

impl<S: Ring> Element<S> {
    /// The zero element of the algebra `label`.
    pub fn zero(label: Label) -> Self {
        Element {
            label,
            terms: BTreeMap::new(),
        }
    }

    /// The unit of the algebra `label`.
    pub fn unit(label: Label) -> Self {
        Element::from_terms(label, vec![(Monomial::unit(), S::one())])
    }

    /// A single generator with coefficient one.
    pub fn generator(label: Label, g: Gen) -> Self {
        Element::from_terms(label, vec![(Monomial::generator(g), S::one())])
    }

    /// Builds an element from (monomial, coefficient) pairs, merging
    /// repeats and dropping zeros.
    pub fn from_terms(label: Label, terms: Vec<(Monomial, S)>) -> Self {
        let mut map: BTreeMap<Monomial, S> = BTreeMap::new();
        for (m, c) in terms {
            let entry = map.entry(m).or_insert_with(S::zero);
            *entry = entry.clone() + c;
        }
        map.retain(|_, c| !c.is_zero());
        Element { label, terms: map }
    }

    pub fn label(&self) -> &Label {
        &self.label
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &S)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of the unit monomial, if present.
    pub fn unit_coefficient(&self) -> Option<&S> {
        self.terms.get(&Monomial::unit())
    }

    /// Largest monomial degree, zero for the zero element.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    fn check_label(&self, other: &Self) -> Result<(), Error> {
        if self.label == other.label {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch {
                left: self.label.clone(),
                right: other.label.clone(),
            })
        }
    }

    /// Sum; both operands must live in the same algebra.
    pub fn add(&self, other: &Self) -> Result<Self, Error> {
        self.check_label(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let entry = terms.entry(m.clone()).or_insert_with(S::zero);
            *entry = entry.clone() + c.clone();
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(Element {
            label: self.label.clone(),
            terms,
        })
    }

    /// Difference; both operands must live in the same algebra.
    pub fn sub(&self, other: &Self) -> Result<Self, Error> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Element {
            label: self.label.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Element::zero(self.label.clone());
        }
        Element {
            label: self.label.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, x)| (m.clone(), c.clone() * x.clone()))
                .collect(),
        }
    }

    /// Adds `c` times the unit monomial.
    pub fn add_scalar(&self, c: &S) -> Self {
        let mut terms = self.terms.clone();
        let entry = terms.entry(Monomial::unit()).or_insert_with(S::zero);
        *entry = entry.clone() + c.clone();
        terms.retain(|_, x| !x.is_zero());
        Element {
            label: self.label.clone(),
            terms,
        }
    }

    /// Bilinear product by word concatenation; both operands must live
    /// in the same algebra.
    pub fn mul(&self, other: &Self) -> Result<Self, Error> {
        self.check_label(other)?;
        let mut terms: BTreeMap<Monomial, S> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.concat(mb);
                let entry = terms.entry(m).or_insert_with(S::zero);
                *entry = entry.clone() + ca.clone() * cb.clone();
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(Element {
            label: self.label.clone(),
            terms,
        })
    }
}
