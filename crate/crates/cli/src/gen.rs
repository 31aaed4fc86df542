//! Seeded random instances for the verification suites.
//!
//! All randomness flows from one ChaCha stream per suite, so a fixed
//! seed reproduces the exact same cases and the resulting report.

use infmot::functionals::FactorTuple;
use infmot::motzkin::MotzkinWord;
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
                let phi_table = self
                    .table(&label, FunctionalKind::Phi, order, max_degree)
                    .build()
                    .unwrap();
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

    /// A label tuple adapted to `word`, sampled uniformly over the
    /// greedy choices. Labels are constant on the blocks of the level
    /// return partition, adjacent positions differ, and each block
    /// differs from the block it is nested in. Needs at least three
    /// names.
    pub fn adapted_labels(&mut self, word: &MotzkinWord, names: &[&str]) -> Vec<Label> {
        assert!(names.len() >= 3, "adapted sampling needs three names");
        let partition = word.level_return_partition();
        let blocks = partition.blocks();
        let parents = parent_blocks(blocks);
        let mut block_of = vec![usize::MAX; word.len() + 1];
        for (b, block) in blocks.iter().enumerate() {
            for &p in &block.positions {
                block_of[p] = b;
            }
        }
        let mut block_label: Vec<Option<usize>> = vec![None; blocks.len()];
        let mut labels = Vec::with_capacity(word.len());
        for p in 1..=word.len() {
            let b = block_of[p];
            let chosen = match block_label[b] {
                Some(i) => i,
                None => {
                    let prev = if p > 1 {
                        block_label[block_of[p - 1]]
                    } else {
                        None
                    };
                    let parent = parents[b].map(|pb| block_label[pb].unwrap());
                    let allowed: Vec<usize> = (0..names.len())
                        .filter(|i| Some(*i) != prev && Some(*i) != parent)
                        .collect();
                    let i = allowed[self.pick(allowed.len())];
                    block_label[b] = Some(i);
                    i
                }
            };
            labels.push(Label::from(names[chosen]));
        }
        labels
    }

    /// A random element of the labelled algebra: a degree-one or
    /// degree-two monomial with a nonzero coefficient, sometimes with a
    /// degree-one term added.
    pub fn element(&mut self, label: &Label) -> Element<Rat> {
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

/// For each block, the index of the block it is directly nested in: the
/// unique block one level down with consecutive positions `q < first < r`.
/// Blocks at level one have no parent.
fn parent_blocks(blocks: &[infmot::motzkin::Block]) -> Vec<Option<usize>> {
    blocks
        .iter()
        .map(|block| {
            if block.level <= 1 {
                return None;
            }
            let first = block.positions[0];
            blocks.iter().position(|candidate| {
                candidate.level + 1 == block.level
                    && candidate
                        .positions
                        .windows(2)
                        .any(|pair| pair[0] < first && first < pair[1])
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use infmot::motzkin::{enumerate_words, LabelTuple};

    #[test]
    fn sampled_labels_are_adapted() {
        let names = ["A", "B", "C"];
        let mut gen = InstanceGen::new(7);
        for n in 1..=9 {
            for word in enumerate_words(n).unwrap() {
                let labels = gen.adapted_labels(&word, &names);
                let tuple = LabelTuple::new(labels.clone()).unwrap();
                let report = word.is_adapted(&tuple).unwrap();
                assert!(
                    report.is_adapted(),
                    "word {word} got labels {labels:?}: {:?}",
                    report.violation()
                );
            }
        }
    }

    #[test]
    fn fixed_seeds_reproduce_tuples() {
        let names = ["A", "B"];
        let mut first = InstanceGen::new(11);
        let mut second = InstanceGen::new(11);
        let ctx = first.context(Mode::Free, 1, &names, 4);
        let _ = second.context(Mode::Free, 1, &names, 4);
        let t1 = first.tuple(&ctx, &names, 5, Centering::Phi);
        let t2 = second.tuple(&ctx, &names, 5, Centering::Phi);
        for k in 1..=5 {
            assert_eq!(t1.factor(k), t2.factor(k));
            assert_eq!(t1.label(k), t2.label(k));
        }
    }
}
