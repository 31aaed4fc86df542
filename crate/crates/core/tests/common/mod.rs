//! Seeded random instances shared by the integration suites.
#![allow(dead_code)]

use infmot::functionals::FactorTuple;
use infmot::ncalg::{
    AlgebraSpec, Element, FunctionalKind, Gen, Mode, Monomial, SpecContext, TableBuilder,
};
use infmot::{Label, Rat};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// How factor tuples are centered before use.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Centering {
    /// Raw random factors.
    None,
    /// Every factor centered under its conditioning functional.
    Phi,
    /// First factor centered under the conditioning functional, the rest
    /// under the second state.
    Pattern,
}

pub struct InstanceGen {
    rng: ChaCha8Rng,
}

impl InstanceGen {
    pub fn new(seed: u64) -> Self {
        InstanceGen {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn pick(&mut self, bound: usize) -> usize {
        self.rng.gen_range(0..bound)
    }

    pub fn rat(&mut self) -> Rat {
        let numer = self.rng.gen_range(-3i64..=3);
        let denom = self.rng.gen_range(1i64..=2);
        Rat::new(numer.into(), denom.into())
    }

    pub fn nonzero_rat(&mut self) -> Rat {
        loop {
            let r = self.rat();
            if !r.is_zero() {
                return r;
            }
        }
    }

    fn table(
        &mut self,
        label: &Label,
        kind: FunctionalKind,
        order: usize,
        max_degree: usize,
    ) -> TableBuilder<Rat> {
        let mut builder = TableBuilder::new(label.clone(), kind, order);
        for degree in 1..=max_degree {
            builder = builder.moment(Monomial::power(Gen::from("x"), degree), self.rat());
            for k in 1..=order {
                builder =
                    builder.derivative(Monomial::power(Gen::from("x"), degree), k, self.rat());
            }
        }
        builder
    }

    /// A context over single-generator algebras with random moment and
    /// derivative tables, dense up to `max_degree`.
    pub fn context(
        &mut self,
        mode: Mode,
        order: usize,
        names: &[&str],
        max_degree: usize,
    ) -> SpecContext<Rat> {
        let algebras = names
            .iter()
            .map(|&name| {
                let label = Label::from(name);
                let phi = self
                    .table(&label, FunctionalKind::Phi, order, max_degree)
                    .build()
                    .unwrap();
                let psi = match mode {
                    Mode::Free => None,
                    Mode::CFree => Some(
                        self.table(&label, FunctionalKind::Psi, order, max_degree)
                            .build()
                            .unwrap(),
                    ),
                };
                (label.clone(), AlgebraSpec::new([Gen::from("x")], phi, psi))
            })
            .collect();
        SpecContext::new(mode, order, algebras).unwrap()
    }

    /// A degenerate conditionally free context whose second state equals
    /// the conditioning functional.
    pub fn context_psi_equals_phi(
        &mut self,
        order: usize,
        names: &[&str],
        max_degree: usize,
    ) -> SpecContext<Rat> {
        let algebras = names
            .iter()
            .map(|&name| {
                let label = Label::from(name);
                let phi = self.table(&label, FunctionalKind::Phi, order, max_degree);
                let phi_table = phi.build().unwrap();
                let mut psi = TableBuilder::new(label.clone(), FunctionalKind::Psi, order);
                for degree in 1..=max_degree {
                    let monomial = Monomial::power(Gen::from("x"), degree);
                    let jet = phi_table.lookup(&monomial).unwrap();
                    psi = psi.moment(monomial.clone(), jet.value().clone());
                    for k in 1..=order {
                        psi = psi.derivative(monomial.clone(), k, jet.derivative(k).unwrap());
                    }
                }
                (
                    label.clone(),
                    AlgebraSpec::new([Gen::from("x")], phi_table, Some(psi.build().unwrap())),
                )
            })
            .collect();
        SpecContext::new(Mode::CFree, order, algebras).unwrap()
    }

    pub fn alternating_labels(&mut self, names: &[&str], n: usize) -> Vec<Label> {
        let mut labels = Vec::with_capacity(n);
        let mut prev = usize::MAX;
        for _ in 0..n {
            let next = loop {
                let i = self.pick(names.len());
                if i != prev {
                    break i;
                }
            };
            labels.push(Label::from(names[next]));
            prev = next;
        }
        labels
    }

    fn element(&mut self, label: &Label) -> Element<Rat> {
        let degree = self.rng.gen_range(1..=2usize);
        let mut terms = vec![(Monomial::power(Gen::from("x"), degree), self.nonzero_rat())];
        if self.rng.gen_bool(0.5) {
            terms.push((Monomial::generator(Gen::from("x")), self.rat()));
        }
        Element::from_terms(label.clone(), terms)
    }

    /// A random alternating factor tuple over the context's algebras.
    pub fn tuple(
        &mut self,
        ctx: &SpecContext<Rat>,
        names: &[&str],
        n: usize,
        centering: Centering,
    ) -> FactorTuple<Rat> {
        let labels = self.alternating_labels(names, n);
        self.tuple_with_labels(ctx, &labels, centering)
    }

    /// A random factor tuple over a prescribed label sequence.
    pub fn tuple_with_labels(
        &mut self,
        ctx: &SpecContext<Rat>,
        labels: &[Label],
        centering: Centering,
    ) -> FactorTuple<Rat> {
        let factors = labels
            .iter()
            .enumerate()
            .map(|(index, label)| {
                let raw = self.element(label);
                match centering {
                    Centering::None => raw,
                    Centering::Phi => ctx.phi(label).unwrap().center(&raw).unwrap(),
                    Centering::Pattern => {
                        if index == 0 {
                            ctx.phi(label).unwrap().center(&raw).unwrap()
                        } else {
                            ctx.psi(label).unwrap().center(&raw).unwrap()
                        }
                    }
                }
            })
            .collect();
        FactorTuple::new(factors).unwrap()
    }
}
