//! Moment tables: the data of a deformed functional on one algebra.
//!
//! A table assigns to each monomial a jet, the truncated expansion of
//! the monomial's moment along the deformation parameter. Entries come
//! from an explicit map, from a built-in law for powers of a single
//! generator, or from both (law moments with explicitly supplied
//! derivative coefficients). Whatever the source, a monomial without an
//! entry is a hard error: moments are never invented as zero.
//!
//! Normalization fixes the unit: its moment is constantly one, so its
//! jet is `(1, 0, ..., 0)` and cannot be overridden.

use crate::error::Error;
use crate::ncalg::element::{Element, Gen, Monomial};
use crate::ncalg::jet::Jet;
use crate::scalar::Scalar;
use crate::Label;
use std::collections::BTreeMap;
use std::fmt;

/// Which functional of a two-state pair a table describes. Contexts in
/// free mode only use `Phi`; conditionally free contexts use both.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FunctionalKind {
    Phi,
    Psi,
}

impl FunctionalKind {
    pub fn name(self) -> &'static str {
        match self {
            FunctionalKind::Phi => "phi",
            FunctionalKind::Psi => "psi",
        }
    }
}

impl fmt::Display for FunctionalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Built-in moment sequences for powers of one generator. Higher jet
/// coefficients of a law are zero unless supplied explicitly.
#[derive(Clone, PartialEq, Debug)]
pub enum Law<S> {
    /// Even moments are Catalan numbers scaled by powers of the
    /// variance; odd moments vanish.
    Semicircle { variance: S },
    /// Symmetric two-point mass at plus and minus one: moments
    /// alternate 1, 0, 1, 0, ...
    BernoulliSymmetric,
    /// Point mass at `value`: the `k`-th moment is `value^k`.
    PointMass { value: S },
    /// Every moment of positive degree vanishes.
    ZeroDerivatives,
}

impl<S: Scalar> Law<S> {
    /// Resolves a law by name. `semicircle` and `point_mass` require a
    /// parameter; the other names reject one.
    pub fn by_name(name: &str, param: Option<S>) -> Result<Law<S>, Error> {
        if !matches!(
            name,
            "semicircle" | "point_mass" | "bernoulli_symmetric" | "zero_derivatives"
        ) {
            return Err(Error::UnknownLaw {
                name: name.to_owned(),
            });
        }
        let wants_param = matches!(name, "semicircle" | "point_mass");
        if wants_param != param.is_some() {
            return Err(Error::BadLawParameter {
                name: name.to_owned(),
                message: if wants_param {
                    "a parameter is required".to_owned()
                } else {
                    "no parameter is accepted".to_owned()
                },
            });
        }
        match name {
            "semicircle" => Ok(Law::Semicircle {
                variance: param.expect("checked above"),
            }),
            "point_mass" => Ok(Law::PointMass {
                value: param.expect("checked above"),
            }),
            "bernoulli_symmetric" => Ok(Law::BernoulliSymmetric),
            "zero_derivatives" => Ok(Law::ZeroDerivatives),
            _ => unreachable!("name was checked against the known laws"),
        }
    }

    /// The `k`-th moment of the law.
    pub fn moment(&self, k: usize) -> S {
        match self {
            Law::Semicircle { variance } => {
                if k % 2 == 1 {
                    S::zero()
                } else {
                    let mut value = S::from_u128(catalan(k / 2))
                        .expect("catalan number embeds into the scalar type");
                    for _ in 0..k / 2 {
                        value = value * variance.clone();
                    }
                    value
                }
            }
            Law::BernoulliSymmetric => {
                if k % 2 == 1 {
                    S::zero()
                } else {
                    S::one()
                }
            }
            Law::PointMass { value } => {
                let mut acc = S::one();
                for _ in 0..k {
                    acc = acc * value.clone();
                }
                acc
            }
            Law::ZeroDerivatives => {
                if k == 0 {
                    S::one()
                } else {
                    S::zero()
                }
            }
        }
    }
}

fn catalan(m: usize) -> u128 {
    let mut c = vec![1u128; m + 1];
    for k in 1..=m {
        c[k] = (0..k).map(|i| c[i] * c[k - 1 - i]).sum();
    }
    c[m]
}

/// Jet-valued moments of one functional on one algebra.
#[derive(Clone, PartialEq, Debug)]
pub struct FunctionalTable<S> {
    label: Label,
    kind: FunctionalKind,
    order: usize,
    law: Option<(Gen, Law<S>)>,
    entries: BTreeMap<Monomial, Jet<S>>,
}

impl<S: Scalar> FunctionalTable<S> {
    pub fn label(&self) -> &Label {
        &self.label
    }

    pub fn kind(&self) -> FunctionalKind {
        self.kind
    }

    /// Truncation order of every jet the table produces.
    pub fn order(&self) -> usize {
        self.order
    }

    /// The jet of one monomial. The unit is fixed by normalization;
    /// explicit entries win over the law; the law covers powers of its
    /// generator. Anything else is a [`Error::MissingMoment`].
    pub fn lookup(&self, monomial: &Monomial) -> Result<Jet<S>, Error> {
        if monomial.is_unit() {
            return Ok(Jet::one(self.order));
        }
        if let Some(jet) = self.entries.get(monomial) {
            return Ok(jet.clone());
        }
        if let Some((gen, law)) = &self.law {
            if monomial.gens().iter().all(|g| g == gen) {
                return Ok(Jet::constant(law.moment(monomial.degree()), self.order));
            }
        }
        Err(Error::MissingMoment {
            label: self.label.clone(),
            functional: self.kind.name(),
            monomial: monomial.to_string(),
        })
    }

    /// Extends the table linearly to polynomial elements.
    pub fn evaluate(&self, element: &Element<S>) -> Result<Jet<S>, Error> {
        if element.label() != &self.label {
            return Err(Error::AlgebraMismatch {
                left: element.label().clone(),
                right: self.label.clone(),
            });
        }
        let mut acc = Jet::zero(self.order);
        for (monomial, coeff) in element.terms() {
            acc = acc.add(&self.lookup(monomial)?.scale(coeff))?;
        }
        Ok(acc)
    }

    /// Whether the element's undeformed moment (order-0 coefficient)
    /// vanishes.
    pub fn is_centered(&self, element: &Element<S>) -> Result<bool, Error> {
        Ok(self.evaluate(element)?.value().is_zero())
    }

    /// Subtracts the undeformed moment times the unit, so the result has
    /// a vanishing order-0 moment. Centering the unit gives zero.
    pub fn center(&self, element: &Element<S>) -> Result<Element<S>, Error> {
        let value = self.evaluate(element)?.value().clone();
        Ok(element.add_scalar(&(-value)))
    }
}

/// Accumulates moments and derivative values, validates them, and
/// produces a [`FunctionalTable`].
pub struct TableBuilder<S> {
    label: Label,
    kind: FunctionalKind,
    order: usize,
    law: Option<(Gen, Law<S>)>,
    moments: BTreeMap<Monomial, S>,
    derivatives: BTreeMap<(Monomial, usize), S>,
}

impl<S: Scalar> TableBuilder<S> {
    pub fn new(label: Label, kind: FunctionalKind, order: usize) -> Self {
        TableBuilder {
            label,
            kind,
            order,
            law: None,
            moments: BTreeMap::new(),
            derivatives: BTreeMap::new(),
        }
    }

    /// Backs the table with a law for powers of `gen`.
    pub fn law(mut self, gen: Gen, law: Law<S>) -> Self {
        self.law = Some((gen, law));
        self
    }

    /// Sets the undeformed moment of a monomial.
    pub fn moment(mut self, monomial: Monomial, value: S) -> Self {
        self.moments.insert(monomial, value);
        self
    }

    /// Sets the `k`-th derivative of a monomial's moment at the base
    /// point; `k = 0` is the moment itself.
    pub fn derivative(mut self, monomial: Monomial, k: usize, value: S) -> Self {
        if k == 0 {
            self.moments.insert(monomial, value);
        } else {
            self.derivatives.insert((monomial, k), value);
        }
        self
    }

    /// Validates and assembles the table. A monomial with derivative
    /// entries needs an order-0 moment from the explicit map or the law,
    /// derivative orders must stay within the truncation order, and the
    /// unit cannot be overridden.
    pub fn build(self) -> Result<FunctionalTable<S>, Error> {
        let TableBuilder {
            label,
            kind,
            order,
            law,
            moments,
            derivatives,
        } = self;
        let explicit: std::collections::BTreeSet<Monomial> = moments.keys().cloned().collect();
        let mut jets: BTreeMap<Monomial, Vec<S>> = BTreeMap::new();
        for (monomial, value) in moments {
            if monomial.is_unit() {
                return Err(Error::UnitMomentFixed);
            }
            jets.entry(monomial)
                .or_insert_with(|| vec![S::zero(); order + 1])[0] = value;
        }
        for ((monomial, k), value) in derivatives {
            if monomial.is_unit() {
                return Err(Error::UnitMomentFixed);
            }
            if k > order {
                return Err(Error::DerivativeOrder {
                    requested: k,
                    order,
                });
            }
            // A derivative without an order-0 moment must be completed by
            // the law; otherwise the entry would be unusable.
            let law_value = if explicit.contains(&monomial) {
                None
            } else {
                match &law {
                    Some((gen, law)) if monomial.gens().iter().all(|g| g == gen) => {
                        Some(law.moment(monomial.degree()))
                    }
                    _ => {
                        return Err(Error::MissingMoment {
                            label,
                            functional: kind.name(),
                            monomial: monomial.to_string(),
                        })
                    }
                }
            };
            let entry = jets
                .entry(monomial)
                .or_insert_with(|| vec![S::zero(); order + 1]);
            // Taylor convention: the stored coefficient is value / k!.
            entry[k] = value / crate::scalar::factorial::<S>(k);
            if let Some(moment) = law_value {
                entry[0] = moment;
            }
        }
        Ok(FunctionalTable {
            label,
            kind,
            order,
            law,
            entries: jets
                .into_iter()
                .map(|(m, coeffs)| (m, Jet::from_coeffs(coeffs)))
                .collect(),
        })
    }
}
