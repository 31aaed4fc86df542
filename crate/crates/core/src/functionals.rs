//! The functional attached to one Motzkin word and its derivatives.
//!
//! A word `w` of length `n` pairs with an alternating tuple of factors
//! through the level return partition: when the factor labels are
//! adapted to `w`, the word's functional is the product over blocks of
//! Boolean cumulants, each taken under the functional selected for the
//! block's level, and it vanishes otherwise. Summing over all words of
//! length `n` recovers the product moment, which is what
//! [`crate::products`] does.
//!
//! In free mode every block selects the algebra's single functional. In
//! conditionally free mode blocks at level 1 select the conditioning
//! functional and deeper blocks the second state.
//!
//! Derivatives of a word's functional come in three independent styles:
//! term-by-term Leibniz over the blocks, closed forms for the path
//! shapes that survive centering, and a multinomial expansion for
//! arbitrary order.

use crate::error::Error;
use crate::motzkin::{LabelTuple, MotzkinWord, PathKind};
use crate::ncalg::{boolean_cumulant, Element, FunctionalTable, Jet, Mode, SpecContext};
use crate::scalar::{multinomial, Scalar};
use crate::Label;

/// Nonempty tuple of polynomial factors with pairwise distinct adjacent
/// labels, the argument of every product-level operation.
#[derive(Clone, PartialEq, Debug)]
pub struct FactorTuple<S> {
    factors: Vec<Element<S>>,
}

impl<S: Scalar> FactorTuple<S> {
    /// Wraps a factor list, rejecting empty input and adjacent repeats.
    pub fn new(factors: Vec<Element<S>>) -> Result<Self, Error> {
        if factors.is_empty() {
            return Err(Error::EmptyTuple);
        }
        for (idx, pair) in factors.windows(2).enumerate() {
            if pair[0].label() == pair[1].label() {
                return Err(Error::AdjacentLabels { position: idx + 1 });
            }
        }
        Ok(FactorTuple { factors })
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Factor at 1-indexed position `k`.
    pub fn factor(&self, k: usize) -> &Element<S> {
        &self.factors[k - 1]
    }

    pub fn factors(&self) -> &[Element<S>] {
        &self.factors
    }

    /// Label at 1-indexed position `k`.
    pub fn label(&self, k: usize) -> &Label {
        self.factors[k - 1].label()
    }

    pub fn labels(&self) -> LabelTuple {
        LabelTuple::new(self.factors.iter().map(|f| f.label().clone()).collect())
            .expect("factor tuple invariants imply label tuple invariants")
    }

    /// The factors with 1-indexed position `k` removed.
    pub fn without(&self, k: usize) -> Vec<Element<S>> {
        let mut rest = self.factors.clone();
        rest.remove(k - 1);
        rest
    }
}

/// The functional the block selection rules pick for a block at `level`
/// in an algebra `label`.
pub fn block_table<'a, S: Scalar>(
    ctx: &'a SpecContext<S>,
    label: &Label,
    level: u32,
) -> Result<&'a FunctionalTable<S>, Error> {
    match ctx.mode() {
        Mode::Free => ctx.phi(label),
        Mode::CFree => {
            if level == 1 {
                ctx.phi(label)
            } else {
                ctx.psi(label)
            }
        }
    }
}

/// Checks that every factor has a vanishing undeformed moment under its
/// algebra's conditioning functional.
pub fn verify_free_centering<S: Scalar>(
    ctx: &SpecContext<S>,
    factors: &FactorTuple<S>,
) -> Result<(), Error> {
    for k in 1..=factors.len() {
        let table = ctx.phi(factors.label(k))?;
        if !table.is_centered(factors.factor(k))? {
            return Err(Error::CenteringViolation {
                position: k,
                functional: "phi",
            });
        }
    }
    Ok(())
}

/// Checks the conditionally free centering pattern: the first factor is
/// centered under the conditioning functional, all others under the
/// second state.
pub fn verify_pattern_centering<S: Scalar>(
    ctx: &SpecContext<S>,
    factors: &FactorTuple<S>,
) -> Result<(), Error> {
    for k in 1..=factors.len() {
        let (table, name) = if k == 1 {
            (ctx.phi(factors.label(k))?, "phi")
        } else {
            (ctx.psi(factors.label(k))?, "psi")
        };
        if !table.is_centered(factors.factor(k))? {
            return Err(Error::CenteringViolation {
                position: k,
                functional: name,
            });
        }
    }
    Ok(())
}

fn check_length<S: Scalar>(word: &MotzkinWord, factors: &FactorTuple<S>) -> Result<(), Error> {
    if word.len() != factors.len() {
        return Err(Error::LengthMismatch {
            expected: word.len(),
            got: factors.len(),
        });
    }
    Ok(())
}

/// Jets of the block cumulants of `word`, in block order, or `None` when
/// the labels are not adapted to the word.
fn block_jets<S: Scalar>(
    ctx: &SpecContext<S>,
    word: &MotzkinWord,
    factors: &FactorTuple<S>,
) -> Result<Option<Vec<Jet<S>>>, Error> {
    check_length(word, factors)?;
    let labels = factors.labels();
    if !word.is_adapted(&labels)?.is_adapted() {
        return Ok(None);
    }
    let partition = word.level_return_partition();
    let mut jets = Vec::with_capacity(partition.blocks().len());
    for block in partition.blocks() {
        let label = factors.label(block.positions[0]);
        let table = block_table(ctx, label, block.level)?;
        let args: Vec<Element<S>> = block
            .positions
            .iter()
            .map(|&k| factors.factor(k).clone())
            .collect();
        jets.push(boolean_cumulant(table, &args)?);
    }
    Ok(Some(jets))
}

/// The word's functional: the product of the block cumulant jets when
/// the labels are adapted to the word, and zero otherwise.
pub fn motzkin_functional<S: Scalar>(
    ctx: &SpecContext<S>,
    word: &MotzkinWord,
    factors: &FactorTuple<S>,
) -> Result<Jet<S>, Error> {
    match block_jets(ctx, word, factors)? {
        None => Ok(Jet::zero(ctx.order())),
        Some(jets) => {
            let mut product = Jet::one(ctx.order());
            for jet in &jets {
                product = product.mul(jet)?;
            }
            Ok(product)
        }
    }
}

/// First derivative of the word's functional by the Leibniz rule over
/// blocks: differentiate one block cumulant, freeze the rest at their
/// undeformed values, and sum. Works for arbitrary factors.
pub fn motzkin_derivative_leibniz<S: Scalar>(
    ctx: &SpecContext<S>,
    word: &MotzkinWord,
    factors: &FactorTuple<S>,
) -> Result<S, Error> {
    let jets = match block_jets(ctx, word, factors)? {
        None => return Ok(S::zero()),
        Some(jets) => jets,
    };
    let mut total = S::zero();
    for (v, jet_v) in jets.iter().enumerate() {
        let mut term = jet_v.derivative(1)?;
        for (u, jet_u) in jets.iter().enumerate() {
            if u != v {
                term = term * jet_u.value().clone();
            }
        }
        total = total + term;
    }
    Ok(total)
}

/// First derivative of the word's functional by the closed centered
/// formulas. Requires the centering pattern of the context's mode and
/// returns an error when a factor violates it.
///
/// In free mode only adapted pyramids survive: the value is the product
/// of the paired undeformed moments times the derivative at the apex.
/// In conditionally free mode flat words and adapted pyramids followed
/// by flat runs survive, with the second state carrying the inner pairs
/// and the apex derivative.
pub fn motzkin_derivative_closed<S: Scalar>(
    ctx: &SpecContext<S>,
    word: &MotzkinWord,
    factors: &FactorTuple<S>,
) -> Result<S, Error> {
    check_length(word, factors)?;
    match ctx.mode() {
        Mode::Free => verify_free_centering(ctx, factors)?,
        Mode::CFree => verify_pattern_centering(ctx, factors)?,
    }
    motzkin_derivative_closed_unchecked(ctx, word, factors)
}

/// [`motzkin_derivative_closed`] without the centering check. The
/// closed formulas are only meaningful under the centering hypotheses;
/// skipping the check leaves that responsibility with the caller.
pub fn motzkin_derivative_closed_unchecked<S: Scalar>(
    ctx: &SpecContext<S>,
    word: &MotzkinWord,
    factors: &FactorTuple<S>,
) -> Result<S, Error> {
    check_length(word, factors)?;
    if ctx.order() < 1 {
        return Err(Error::DerivativeOrder {
            requested: 1,
            order: ctx.order(),
        });
    }
    match ctx.mode() {
        Mode::Free => closed_free(ctx, word, factors),
        Mode::CFree => closed_cfree(ctx, word, factors),
    }
}

fn closed_free<S: Scalar>(
    ctx: &SpecContext<S>,
    word: &MotzkinWord,
    factors: &FactorTuple<S>,
) -> Result<S, Error> {
    let class = word.classify();
    if !class.pyramid_compatible() {
        return Ok(S::zero());
    }
    if !word.is_adapted(&factors.labels())?.is_adapted() {
        return Ok(S::zero());
    }
    let n = word.len();
    let m = class.middle.expect("pyramids have an apex");
    let mut value = ctx
        .phi(factors.label(m))?
        .evaluate(factors.factor(m))?
        .derivative(1)?;
    for k in 1..m {
        let pair = factors.factor(k).mul(factors.factor(n + 1 - k))?;
        value = value * ctx.phi(factors.label(k))?.evaluate(&pair)?.value().clone();
    }
    Ok(value)
}

fn closed_cfree<S: Scalar>(
    ctx: &SpecContext<S>,
    word: &MotzkinWord,
    factors: &FactorTuple<S>,
) -> Result<S, Error> {
    let n = word.len();
    let class = word.classify();
    match class.kind {
        PathKind::Flat => {
            // Includes the single-letter word: derivative at the first
            // position, undeformed moments elsewhere.
            let mut value = ctx
                .phi(factors.label(1))?
                .evaluate(factors.factor(1))?
                .derivative(1)?;
            for k in 2..=n {
                value = value
                    * ctx
                        .phi(factors.label(k))?
                        .evaluate(factors.factor(k))?
                        .value()
                        .clone();
            }
            Ok(value)
        }
        PathKind::Pyramid | PathKind::PyramidThenFlat => {
            if !word.is_adapted(&factors.labels())?.is_adapted() {
                return Ok(S::zero());
            }
            let m = class.middle.expect("pyramids have an apex");
            let pyramid_end = 2 * m - 1;
            let mut value = ctx
                .psi(factors.label(m))?
                .evaluate(factors.factor(m))?
                .derivative(1)?;
            let outer = factors.factor(1).mul(factors.factor(pyramid_end))?;
            value = value * ctx.phi(factors.label(1))?.evaluate(&outer)?.value().clone();
            for k in 2..m {
                let pair = factors.factor(k).mul(factors.factor(pyramid_end + 1 - k))?;
                value = value * ctx.psi(factors.label(k))?.evaluate(&pair)?.value().clone();
            }
            for k in pyramid_end + 1..=n {
                value = value
                    * ctx
                        .phi(factors.label(k))?
                        .evaluate(factors.factor(k))?
                        .value()
                        .clone();
            }
            Ok(value)
        }
        PathKind::Other => Ok(S::zero()),
    }
}

/// Derivative of arbitrary order `m` of the word's functional by the
/// multinomial expansion over blocks: distribute `m` among the blocks,
/// forcing at least first order onto every singleton that the centering
/// pattern makes vanish at order zero, and weight each distribution by
/// its multinomial coefficient. Requires centered factors.
pub fn motzkin_higher<S: Scalar>(
    ctx: &SpecContext<S>,
    word: &MotzkinWord,
    factors: &FactorTuple<S>,
    m: usize,
) -> Result<S, Error> {
    check_length(word, factors)?;
    match ctx.mode() {
        Mode::Free => verify_free_centering(ctx, factors)?,
        Mode::CFree => verify_pattern_centering(ctx, factors)?,
    }
    motzkin_higher_unchecked(ctx, word, factors, m)
}

/// [`motzkin_higher`] without the centering check.
pub fn motzkin_higher_unchecked<S: Scalar>(
    ctx: &SpecContext<S>,
    word: &MotzkinWord,
    factors: &FactorTuple<S>,
    m: usize,
) -> Result<S, Error> {
    check_length(word, factors)?;
    if m > ctx.order() {
        return Err(Error::DerivativeOrder {
            requested: m,
            order: ctx.order(),
        });
    }
    let jets = match block_jets(ctx, word, factors)? {
        None => return Ok(S::zero()),
        Some(jets) => jets,
    };
    let partition = word.level_return_partition();
    let forced: Vec<bool> = partition
        .blocks()
        .iter()
        .map(|block| {
            if !block.is_singleton() {
                return false;
            }
            match ctx.mode() {
                // Centering kills every singleton moment at order zero.
                Mode::Free => true,
                // Only the second state centers the factors past the
                // first position, so level-1 singletons there keep their
                // undeformed moments.
                Mode::CFree => block.level > 1 || block.positions[0] == 1,
            }
        })
        .collect();
    if forced.iter().filter(|&&f| f).count() > m {
        return Ok(S::zero());
    }
    let mut total = S::zero();
    let mut parts = vec![0usize; jets.len()];
    distribute(&jets, &forced, &mut parts, 0, m, &mut total)?;
    Ok(total)
}

fn distribute<S: Scalar>(
    jets: &[Jet<S>],
    forced: &[bool],
    parts: &mut Vec<usize>,
    index: usize,
    remaining: usize,
    total: &mut S,
) -> Result<(), Error> {
    if index == jets.len() {
        if remaining != 0 {
            return Ok(());
        }
        let mut term = multinomial::<S>(parts);
        for (jet, &part) in jets.iter().zip(parts.iter()) {
            term = term * jet.derivative(part)?;
        }
        *total = total.clone() + term;
        return Ok(());
    }
    let low = usize::from(forced[index]);
    let still_forced = forced[index + 1..].iter().filter(|&&f| f).count();
    for part in low..=remaining.saturating_sub(still_forced) {
        parts[index] = part;
        distribute(jets, forced, parts, index + 1, remaining - part, total)?;
        parts[index] = 0;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::motzkin::enumerate_words;
    use crate::ncalg::{AlgebraSpec, FunctionalKind, Gen, Monomial, TableBuilder};
    use crate::Rat;

    fn rat(n: i64) -> Rat {
        Rat::from_integer(n.into())
    }

    /// One-generator algebras A, B, C with distinct explicit moments up
    /// to degree four and first derivatives, at jet order 2.
    fn free_ctx() -> SpecContext<Rat> {
        let algebras = [("A", 2), ("B", 3), ("C", 5)]
            .iter()
            .map(|&(name, scale)| {
                let x = Gen::from("x");
                let mut builder = TableBuilder::new(Label::from(name), FunctionalKind::Phi, 2);
                for degree in 1..=4usize {
                    builder = builder
                        .moment(
                            Monomial::power(x.clone(), degree),
                            Rat::new((scale as i64 + degree as i64).into(), 7.into()),
                        )
                        .derivative(
                            Monomial::power(x.clone(), degree),
                            1,
                            Rat::new((2 * scale as i64 - degree as i64).into(), 3.into()),
                        );
                }
                (
                    Label::from(name),
                    AlgebraSpec::new([x], builder.build().unwrap(), None),
                )
            })
            .collect();
        SpecContext::new(Mode::Free, 2, algebras).unwrap()
    }

    fn gen_of(name: &str) -> Element<Rat> {
        Element::generator(Label::from(name), Gen::from("x"))
    }

    fn word(letters: &[u32]) -> MotzkinWord {
        MotzkinWord::new(letters.to_vec()).unwrap()
    }

    #[test]
    fn functional_of_one_two_one_is_a_cumulant_times_a_moment() {
        let ctx = free_ctx();
        let factors = FactorTuple::new(vec![gen_of("A"), gen_of("B"), gen_of("A")]).unwrap();
        let got = motzkin_functional(&ctx, &word(&[1, 2, 1]), &factors).unwrap();
        let outer = boolean_cumulant(
            ctx.phi(&Label::from("A")).unwrap(),
            &[gen_of("A"), gen_of("A")],
        )
        .unwrap();
        let inner = ctx
            .phi(&Label::from("B"))
            .unwrap()
            .evaluate(&gen_of("B"))
            .unwrap();
        assert_eq!(got, outer.mul(&inner).unwrap());
    }

    #[test]
    fn functional_of_a_longer_zigzag() {
        // 1 2 1 2 1 pairs the outer cumulant over positions 1, 3, 5 with
        // moments at 2 and 4.
        let ctx = free_ctx();
        let factors = FactorTuple::new(vec![
            gen_of("A"),
            gen_of("B"),
            gen_of("A"),
            gen_of("C"),
            gen_of("A"),
        ])
        .unwrap();
        let got = motzkin_functional(&ctx, &word(&[1, 2, 1, 2, 1]), &factors).unwrap();
        let outer = boolean_cumulant(
            ctx.phi(&Label::from("A")).unwrap(),
            &[gen_of("A"), gen_of("A"), gen_of("A")],
        )
        .unwrap();
        let b = ctx
            .phi(&Label::from("B"))
            .unwrap()
            .evaluate(&gen_of("B"))
            .unwrap();
        let c = ctx
            .phi(&Label::from("C"))
            .unwrap()
            .evaluate(&gen_of("C"))
            .unwrap();
        assert_eq!(got, outer.mul(&b).unwrap().mul(&c).unwrap());
    }

    #[test]
    fn non_adapted_labels_give_zero() {
        let ctx = free_ctx();
        let factors = FactorTuple::new(vec![gen_of("A"), gen_of("B"), gen_of("C")]).unwrap();
        let jet = motzkin_functional(&ctx, &word(&[1, 2, 1]), &factors).unwrap();
        assert!(jet.is_zero());
        assert_eq!(
            motzkin_derivative_leibniz(&ctx, &word(&[1, 2, 1]), &factors).unwrap(),
            rat(0)
        );
    }

    #[test]
    fn length_mismatch_is_reported() {
        let ctx = free_ctx();
        let factors = FactorTuple::new(vec![gen_of("A"), gen_of("B")]).unwrap();
        assert_eq!(
            motzkin_functional(&ctx, &word(&[1, 2, 1]), &factors).unwrap_err(),
            Error::LengthMismatch {
                expected: 3,
                got: 2
            }
        );
    }

    #[test]
    fn leibniz_matches_jet_derivative_on_all_small_words() {
        let ctx = free_ctx();
        let names = ["A", "B", "A", "C", "A", "B"];
        for n in 1..=6 {
            let factors =
                FactorTuple::new(names[..n].iter().map(|&s| gen_of(s)).collect()).unwrap();
            for w in enumerate_words(n).unwrap() {
                let jet = motzkin_functional(&ctx, &w, &factors).unwrap();
                let leibniz = motzkin_derivative_leibniz(&ctx, &w, &factors).unwrap();
                assert_eq!(leibniz, jet.derivative(1).unwrap(), "word {w}");
            }
        }
    }

    #[test]
    fn closed_form_requires_centering() {
        let ctx = free_ctx();
        let factors = FactorTuple::new(vec![gen_of("A"), gen_of("B"), gen_of("A")]).unwrap();
        let err = motzkin_derivative_closed(&ctx, &word(&[1, 2, 1]), &factors).unwrap_err();
        assert_eq!(
            err,
            Error::CenteringViolation {
                position: 1,
                functional: "phi"
            }
        );
    }

    fn centered(ctx: &SpecContext<Rat>, name: &str) -> Element<Rat> {
        ctx.phi(&Label::from(name))
            .unwrap()
            .center(&gen_of(name))
            .unwrap()
    }

    #[test]
    fn closed_form_matches_leibniz_on_centered_pyramids() {
        let ctx = free_ctx();
        let factors = FactorTuple::new(vec![
            centered(&ctx, "A"),
            centered(&ctx, "B"),
            centered(&ctx, "C"),
            centered(&ctx, "B"),
            centered(&ctx, "A"),
        ])
        .unwrap();
        for w in enumerate_words(5).unwrap() {
            let closed = motzkin_derivative_closed(&ctx, &w, &factors).unwrap();
            let leibniz = motzkin_derivative_leibniz(&ctx, &w, &factors).unwrap();
            assert_eq!(closed, leibniz, "word {w}");
        }
    }

    #[test]
    fn higher_derivative_matches_jet_route() {
        let ctx = free_ctx();
        let factors = FactorTuple::new(vec![
            centered(&ctx, "A"),
            centered(&ctx, "B"),
            centered(&ctx, "A"),
            centered(&ctx, "B"),
        ])
        .unwrap();
        for w in enumerate_words(4).unwrap() {
            let jet = motzkin_functional(&ctx, &w, &factors).unwrap();
            for m in 0..=2 {
                let multi = motzkin_higher(&ctx, &w, &factors, m).unwrap();
                assert_eq!(multi, jet.derivative(m).unwrap(), "word {w} order {m}");
            }
        }
    }

    #[test]
    fn higher_derivative_respects_truncation_order() {
        let ctx = free_ctx();
        let factors = FactorTuple::new(vec![centered(&ctx, "A")]).unwrap();
        assert!(matches!(
            motzkin_higher(&ctx, &word(&[1]), &factors, 3),
            Err(Error::DerivativeOrder { .. })
        ));
    }
}
