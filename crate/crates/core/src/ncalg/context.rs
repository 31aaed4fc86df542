//! Evaluation contexts: which algebras exist, which functionals they
//! carry, and which product is being formed.
//!
//! A context in free mode holds one functional per algebra. A context in
//! conditionally free mode holds two: the conditioning functional used
//! at the level-1 blocks of a path and the second state used above them.
//! The mode also gates access, so free-mode code can never accidentally
//! consult a second state.

use crate::error::Error;
use crate::ncalg::element::Gen;
use crate::ncalg::table::FunctionalTable;
use crate::scalar::Scalar;
use crate::Label;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Which product the context describes.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Mode {
    /// One state per algebra; the moments decompose over adapted words
    /// with the single functional everywhere.
    Free,
    /// Two states per algebra; level-1 blocks take the first functional
    /// and deeper blocks take the second.
    CFree,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Free => "free",
            Mode::CFree => "cfree",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One algebra of the product: its generators and its functional(s).
#[derive(Clone, Debug)]
pub struct AlgebraSpec<S> {
    generators: BTreeSet<Gen>,
    phi: FunctionalTable<S>,
    psi: Option<FunctionalTable<S>>,
}

impl<S: Scalar> AlgebraSpec<S> {
    pub fn new(
        generators: impl IntoIterator<Item = Gen>,
        phi: FunctionalTable<S>,
        psi: Option<FunctionalTable<S>>,
    ) -> Self {
        AlgebraSpec {
            generators: generators.into_iter().collect(),
            phi,
            psi,
        }
    }

    pub fn generators(&self) -> &BTreeSet<Gen> {
        &self.generators
    }
}

/// The full setup of a product computation: mode, jet truncation order,
/// and the participating algebras.
#[derive(Clone, Debug)]
pub struct SpecContext<S> {
    mode: Mode,
    order: usize,
    algebras: BTreeMap<Label, AlgebraSpec<S>>,
}

impl<S: Scalar> SpecContext<S> {
    /// Builds and validates a context. Conditionally free mode requires
    /// a second-state table for every algebra, and every table must be
    /// truncated at the context's order and registered under its own
    /// label.
    pub fn new(
        mode: Mode,
        order: usize,
        algebras: Vec<(Label, AlgebraSpec<S>)>,
    ) -> Result<Self, Error> {
        let mut map = BTreeMap::new();
        for (label, spec) in algebras {
            if spec.phi.label() != &label {
                return Err(Error::AlgebraMismatch {
                    left: spec.phi.label().clone(),
                    right: label.clone(),
                });
            }
            if spec.phi.order() != order {
                return Err(Error::OrderMismatch {
                    left: spec.phi.order(),
                    right: order,
                });
            }
            match (&spec.psi, mode) {
                (None, Mode::CFree) => return Err(Error::PsiRequired(label.clone())),
                (Some(psi), _) => {
                    if psi.label() != &label {
                        return Err(Error::AlgebraMismatch {
                            left: psi.label().clone(),
                            right: label.clone(),
                        });
                    }
                    if psi.order() != order {
                        return Err(Error::OrderMismatch {
                            left: psi.order(),
                            right: order,
                        });
                    }
                }
                (None, Mode::Free) => {}
            }
            map.insert(label, spec);
        }
        Ok(SpecContext {
            mode,
            order,
            algebras: map,
        })
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Jet truncation order of every table in the context.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn labels(&self) -> impl Iterator<Item = &Label> {
        self.algebras.keys()
    }

    pub fn algebra(&self, label: &Label) -> Result<&AlgebraSpec<S>, Error> {
        self.algebras
            .get(label)
            .ok_or_else(|| Error::UnknownAlgebra(label.clone()))
    }

    /// The conditioning functional of an algebra.
    pub fn phi(&self, label: &Label) -> Result<&FunctionalTable<S>, Error> {
        Ok(&self.algebra(label)?.phi)
    }

    /// The second state of an algebra. Free mode forbids the query
    /// outright: nothing in a free product may depend on a second state.
    pub fn psi(&self, label: &Label) -> Result<&FunctionalTable<S>, Error> {
        if self.mode == Mode::Free {
            return Err(Error::ModeMismatch {
                required: "cfree",
                actual: "free",
            });
        }
        self.algebra(label)?
            .psi
            .as_ref()
            .ok_or_else(|| Error::PsiUnavailable(label.clone()))
    }

    /// A free-mode context whose functionals are the second states of
    /// this one. The second half of a conditionally free computation is
    /// exactly a free computation over these tables.
    pub fn psi_projection(&self) -> Result<SpecContext<S>, Error> {
        if self.mode == Mode::Free {
            return Err(Error::ModeMismatch {
                required: "cfree",
                actual: "free",
            });
        }
        let mut algebras = BTreeMap::new();
        for (label, spec) in &self.algebras {
            let psi = spec
                .psi
                .as_ref()
                .ok_or_else(|| Error::PsiUnavailable(label.clone()))?;
            algebras.insert(
                label.clone(),
                AlgebraSpec {
                    generators: spec.generators.clone(),
                    phi: psi.clone(),
                    psi: None,
                },
            );
        }
        Ok(SpecContext {
            mode: Mode::Free,
            order: self.order,
            algebras,
        })
    }
}
