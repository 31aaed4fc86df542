//! Product-level moment and derivative operations.
//!
//! Everything here sums the per-word functionals of [`crate::functionals`]
//! over all reduced Motzkin words of the tuple length, or applies one of
//! the closed product formulas:
//!
//! * [`product_moment`]: the full moment jet (and, in conditionally
//!   free mode, the second-state jet alongside).
//! * [`infinitesimal_moment`] and [`higher_moment`]: derivatives of the
//!   moment at the base point, word by word, for arbitrary factors.
//! * [`higher_moment_centered`]: the centered variant that skips every
//!   word with more forced singletons than the derivative order.
//! * [`leibniz_free`], [`characteristic_free`]: the two first-order
//!   closed forms for centered free products.
//! * [`boolean_moment`]: the Boolean product, a plain product of jets.
//! * [`cfree_leibniz`], [`cfree_closed`]: the two first-order closed
//!   forms for pattern-centered conditionally free products.
//!
//! Operations with centering hypotheses verify them by evaluation and
//! offer `_unchecked` variants that skip the verification, for
//! exploration outside those hypotheses.

use crate::error::Error;
use crate::functionals::{
    motzkin_derivative_leibniz, motzkin_functional, motzkin_higher_unchecked,
    verify_free_centering, verify_pattern_centering, FactorTuple,
};
use crate::motzkin::enumerate_words;
use crate::ncalg::{Element, Jet, Mode, SpecContext};
use crate::scalar::Scalar;

/// Merges adjacent factors with equal labels into single factors,
/// producing an alternating tuple. Unit factors are absorbed by the
/// merge when a neighbour shares their label and kept otherwise.
pub fn normalize_alternating<S: Scalar>(factors: Vec<Element<S>>) -> Result<FactorTuple<S>, Error> {
    if factors.is_empty() {
        return Err(Error::EmptyTuple);
    }
    let mut merged: Vec<Element<S>> = Vec::with_capacity(factors.len());
    for factor in factors {
        match merged.last_mut() {
            Some(last) if last.label() == factor.label() => {
                *last = last.mul(&factor)?;
            }
            _ => merged.push(factor),
        }
    }
    FactorTuple::new(merged)
}

/// Moment jets of an alternating product. The conditioning side is
/// always present; the second-state side accompanies it in conditionally
/// free mode.
#[derive(Clone, PartialEq, Debug)]
pub struct ProductMoment<S> {
    pub phi: Jet<S>,
    pub psi: Option<Jet<S>>,
}

fn phi_side_moment<S: Scalar>(
    ctx: &SpecContext<S>,
    factors: &FactorTuple<S>,
) -> Result<Jet<S>, Error> {
    let mut total = Jet::zero(ctx.order());
    for word in enumerate_words(factors.len())? {
        total = total.add(&motzkin_functional(ctx, &word, factors)?)?;
    }
    Ok(total)
}

/// The moment jet(s) of the product, summed over all reduced Motzkin
/// words of the tuple length.
pub fn product_moment<S: Scalar>(
    ctx: &SpecContext<S>,
    factors: &FactorTuple<S>,
) -> Result<ProductMoment<S>, Error> {
    let phi = phi_side_moment(ctx, factors)?;
    let psi = match ctx.mode() {
        Mode::Free => None,
        Mode::CFree => Some(phi_side_moment(&ctx.psi_projection()?, factors)?),
    };
    Ok(ProductMoment { phi, psi })
}

/// Moment of a possibly empty, possibly non-alternating factor list:
/// the convention for a fully absorbed product is the unit jet.
fn companion_moment<S: Scalar>(
    ctx: &SpecContext<S>,
    factors: &[Element<S>],
) -> Result<Jet<S>, Error> {
    if factors.is_empty() {
        return Ok(Jet::one(ctx.order()));
    }
    let tuple = normalize_alternating(factors.to_vec())?;
    phi_side_moment(ctx, &tuple)
}

/// First derivative of the product moment at the base point: the sum
/// over words of the Leibniz derivative of each word's functional.
/// Holds for arbitrary factors in either mode.
pub fn infinitesimal_moment<S: Scalar>(
    ctx: &SpecContext<S>,
    factors: &FactorTuple<S>,
) -> Result<S, Error> {
    let mut total = S::zero();
    for word in enumerate_words(factors.len())? {
        total = total + motzkin_derivative_leibniz(ctx, &word, factors)?;
    }
    Ok(total)
}

/// Derivative of order `m` of the product moment at the base point: the
/// sum over words of the order-`m` multinomial derivative with no
/// forcing, valid for arbitrary factors in either mode.
pub fn higher_moment<S: Scalar>(
    ctx: &SpecContext<S>,
    factors: &FactorTuple<S>,
    m: usize,
) -> Result<S, Error> {
    let mut total = S::zero();
    for word in enumerate_words(factors.len())? {
        total = total + word_derivative_general(ctx, &word, factors, m)?;
    }
    Ok(total)
}

/// Order-`m` derivative of one word's functional by the unconstrained
/// Leibniz expansion over blocks.
fn word_derivative_general<S: Scalar>(
    ctx: &SpecContext<S>,
    word: &crate::motzkin::MotzkinWord,
    factors: &FactorTuple<S>,
    m: usize,
) -> Result<S, Error> {
    if m > ctx.order() {
        return Err(Error::DerivativeOrder {
            requested: m,
            order: ctx.order(),
        });
    }
    // The jet of the word's functional already truncates at the context
    // order, so its coefficient extraction is the unconstrained Leibniz
    // sum evaluated with every cancellation in place.
    motzkin_functional(ctx, word, factors)?.derivative(m)
}

/// Derivative of order `m` for verified centered factors, skipping every
/// word whose forced singleton count exceeds `m` and expanding the rest
/// by the constrained multinomial formula.
pub fn higher_moment_centered<S: Scalar>(
    ctx: &SpecContext<S>,
    factors: &FactorTuple<S>,
    m: usize,
) -> Result<S, Error> {
    match ctx.mode() {
        Mode::Free => verify_free_centering(ctx, factors)?,
        Mode::CFree => verify_pattern_centering(ctx, factors)?,
    }
    higher_moment_centered_unchecked(ctx, factors, m)
}

/// [`higher_moment_centered`] without the centering check.
pub fn higher_moment_centered_unchecked<S: Scalar>(
    ctx: &SpecContext<S>,
    factors: &FactorTuple<S>,
    m: usize,
) -> Result<S, Error> {
    let mut total = S::zero();
    for word in enumerate_words(factors.len())? {
        let singletons = word.level_return_partition().singletons();
        let forced = match ctx.mode() {
            Mode::Free => singletons.len(),
            Mode::CFree => {
                let partition = word.level_return_partition();
                partition
                    .blocks()
                    .iter()
                    .filter(|b| b.is_singleton() && (b.level > 1 || b.positions[0] == 1))
                    .count()
            }
        };
        if forced > m {
            continue;
        }
        total = total + motzkin_higher_unchecked(ctx, &word, factors, m)?;
    }
    Ok(total)
}

/// First derivative of a centered free product by the product-level
/// Leibniz rule: differentiate one slot, take the undeformed moment of
/// the remaining product.
pub fn leibniz_free<S: Scalar>(ctx: &SpecContext<S>, factors: &FactorTuple<S>) -> Result<S, Error> {
    require_mode(ctx, Mode::Free)?;
    verify_free_centering(ctx, factors)?;
    leibniz_free_unchecked(ctx, factors)
}

/// [`leibniz_free`] without the centering check.
pub fn leibniz_free_unchecked<S: Scalar>(
    ctx: &SpecContext<S>,
    factors: &FactorTuple<S>,
) -> Result<S, Error> {
    require_mode(ctx, Mode::Free)?;
    let mut total = S::zero();
    for k in 1..=factors.len() {
        let slot = ctx
            .phi(factors.label(k))?
            .evaluate(factors.factor(k))?
            .derivative(1)?;
        if slot.is_zero() {
            continue;
        }
        let rest = companion_moment(ctx, &factors.without(k))?;
        total = total + slot * rest.value().clone();
    }
    Ok(total)
}

/// First derivative of a centered free product by the characteristic
/// pairing formula: zero unless the tuple has odd length and mirrored
/// labels, in which case the paired undeformed moments multiply the
/// derivative at the middle slot.
pub fn characteristic_free<S: Scalar>(
    ctx: &SpecContext<S>,
    factors: &FactorTuple<S>,
) -> Result<S, Error> {
    require_mode(ctx, Mode::Free)?;
    verify_free_centering(ctx, factors)?;
    characteristic_free_unchecked(ctx, factors)
}

/// [`characteristic_free`] without the centering check.
pub fn characteristic_free_unchecked<S: Scalar>(
    ctx: &SpecContext<S>,
    factors: &FactorTuple<S>,
) -> Result<S, Error> {
    require_mode(ctx, Mode::Free)?;
    let n = factors.len();
    if n.is_multiple_of(2) {
        return Ok(S::zero());
    }
    let m = n.div_ceil(2);
    for k in 1..m {
        if factors.label(k) != factors.label(n + 1 - k) {
            return Ok(S::zero());
        }
    }
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

/// Moment jet of the Boolean product: the product of the per-factor
/// moment jets.
pub fn boolean_moment<S: Scalar>(
    ctx: &SpecContext<S>,
    factors: &FactorTuple<S>,
) -> Result<Jet<S>, Error> {
    let mut total = Jet::one(ctx.order());
    for k in 1..=factors.len() {
        total = total.mul(&ctx.phi(factors.label(k))?.evaluate(factors.factor(k))?)?;
    }
    Ok(total)
}

/// First derivative of a pattern-centered conditionally free product by
/// the product-level Leibniz rule: the conditioning derivative at the
/// first slot, the second-state derivative at the rest, each against the
/// conditioning moment of the remaining product.
pub fn cfree_leibniz<S: Scalar>(
    ctx: &SpecContext<S>,
    factors: &FactorTuple<S>,
) -> Result<S, Error> {
    require_mode(ctx, Mode::CFree)?;
    verify_pattern_centering(ctx, factors)?;
    cfree_leibniz_unchecked(ctx, factors)
}

/// [`cfree_leibniz`] without the centering check.
pub fn cfree_leibniz_unchecked<S: Scalar>(
    ctx: &SpecContext<S>,
    factors: &FactorTuple<S>,
) -> Result<S, Error> {
    require_mode(ctx, Mode::CFree)?;
    let mut total = S::zero();
    for k in 1..=factors.len() {
        let table = if k == 1 {
            ctx.phi(factors.label(k))?
        } else {
            ctx.psi(factors.label(k))?
        };
        let slot = table.evaluate(factors.factor(k))?.derivative(1)?;
        if slot.is_zero() {
            continue;
        }
        let rest = companion_moment(ctx, &factors.without(k))?;
        total = total + slot * rest.value().clone();
    }
    Ok(total)
}

/// First derivative of a pattern-centered conditionally free product by
/// the closed pairing formula: a flat term plus one term per mirrored
/// window of odd width.
pub fn cfree_closed<S: Scalar>(ctx: &SpecContext<S>, factors: &FactorTuple<S>) -> Result<S, Error> {
    require_mode(ctx, Mode::CFree)?;
    verify_pattern_centering(ctx, factors)?;
    cfree_closed_unchecked(ctx, factors)
}

/// [`cfree_closed`] without the centering check.
pub fn cfree_closed_unchecked<S: Scalar>(
    ctx: &SpecContext<S>,
    factors: &FactorTuple<S>,
) -> Result<S, Error> {
    require_mode(ctx, Mode::CFree)?;
    let n = factors.len();
    // Flat term: conditioning derivative at the first slot, undeformed
    // conditioning moments elsewhere.
    let mut total = ctx
        .phi(factors.label(1))?
        .evaluate(factors.factor(1))?
        .derivative(1)?;
    for k in 2..=n {
        total = total
            * ctx
                .phi(factors.label(k))?
                .evaluate(factors.factor(k))?
                .value()
                .clone();
    }
    // Pyramid windows: positions 1..=2m-1 mirrored, flat tail after.
    'window: for m in 2..=n.div_ceil(2) {
        let end = 2 * m - 1;
        for k in 1..m {
            if factors.label(k) != factors.label(end - k + 1) {
                continue 'window;
            }
        }
        let mut term = ctx
            .psi(factors.label(m))?
            .evaluate(factors.factor(m))?
            .derivative(1)?;
        let outer = factors.factor(1).mul(factors.factor(end))?;
        term = term * ctx.phi(factors.label(1))?.evaluate(&outer)?.value().clone();
        for k in 2..m {
            let pair = factors.factor(k).mul(factors.factor(end - k + 1))?;
            term = term * ctx.psi(factors.label(k))?.evaluate(&pair)?.value().clone();
        }
        for k in end + 1..=n {
            term = term
                * ctx
                    .phi(factors.label(k))?
                    .evaluate(factors.factor(k))?
                    .value()
                    .clone();
        }
        total = total + term;
    }
    Ok(total)
}

fn require_mode<S: Scalar>(ctx: &SpecContext<S>, required: Mode) -> Result<(), Error> {
    if ctx.mode() == required {
        Ok(())
    } else {
        Err(Error::ModeMismatch {
            required: required.name(),
            actual: ctx.mode().name(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncalg::{AlgebraSpec, FunctionalKind, Gen, Law, Monomial, TableBuilder};
    use crate::{Label, Rat};

    fn rat(n: i64) -> Rat {
        Rat::from_integer(n.into())
    }

    fn semicircle_ctx() -> SpecContext<Rat> {
        let algebras = ["A", "B"]
            .iter()
            .map(|&name| {
                let table = TableBuilder::new(Label::from(name), FunctionalKind::Phi, 0)
                    .law(Gen::from("x"), Law::Semicircle { variance: rat(1) })
                    .build()
                    .unwrap();
                (
                    Label::from(name),
                    AlgebraSpec::new([Gen::from("x")], table, None),
                )
            })
            .collect();
        SpecContext::new(Mode::Free, 0, algebras).unwrap()
    }

    fn gen_of(name: &str) -> Element<Rat> {
        Element::generator(Label::from(name), Gen::from("x"))
    }

    fn square_of(name: &str) -> Element<Rat> {
        gen_of(name).mul(&gen_of(name)).unwrap()
    }

    #[test]
    fn normalization_merges_adjacent_labels() {
        let tuple = normalize_alternating(vec![gen_of("A"), gen_of("A"), gen_of("B")]).unwrap();
        assert_eq!(tuple.len(), 2);
        assert_eq!(tuple.factor(1), &square_of("A"));
    }

    #[test]
    fn normalization_absorbs_units() {
        let tuple =
            normalize_alternating(vec![gen_of("A"), Element::unit(Label::from("A"))]).unwrap();
        assert_eq!(tuple.len(), 1);
        assert_eq!(tuple.factor(1), &gen_of("A"));
    }

    #[test]
    fn normalization_rejects_empty_input() {
        assert_eq!(
            normalize_alternating::<Rat>(vec![]).unwrap_err(),
            Error::EmptyTuple
        );
    }

    #[test]
    fn free_semicircle_product_moments() {
        let ctx = semicircle_ctx();
        // s t^2 s: the only contributing word is 1 2 1.
        let tuple = FactorTuple::new(vec![gen_of("A"), square_of("B"), gen_of("A")]).unwrap();
        assert_eq!(product_moment(&ctx, &tuple).unwrap().phi.value(), &rat(1));
        // s t s t vanishes by label crossing.
        let tuple =
            FactorTuple::new(vec![gen_of("A"), gen_of("B"), gen_of("A"), gen_of("B")]).unwrap();
        assert_eq!(product_moment(&ctx, &tuple).unwrap().phi.value(), &rat(0));
    }

    #[test]
    fn boolean_moment_multiplies_jets() {
        let ctx = semicircle_ctx();
        let tuple = FactorTuple::new(vec![square_of("A"), square_of("B")]).unwrap();
        assert_eq!(boolean_moment(&ctx, &tuple).unwrap().value(), &rat(1));
    }

    #[test]
    fn closed_free_ops_reject_wrong_mode() {
        let phi = TableBuilder::new(Label::from("A"), FunctionalKind::Phi, 1)
            .moment(Monomial::generator(Gen::from("x")), rat(0))
            .build()
            .unwrap();
        let psi = TableBuilder::new(Label::from("A"), FunctionalKind::Psi, 1)
            .moment(Monomial::generator(Gen::from("x")), rat(0))
            .build()
            .unwrap();
        let ctx = SpecContext::new(
            Mode::CFree,
            1,
            vec![(
                Label::from("A"),
                AlgebraSpec::new([Gen::from("x")], phi, Some(psi)),
            )],
        )
        .unwrap();
        let tuple = FactorTuple::new(vec![gen_of("A")]).unwrap();
        assert!(matches!(
            leibniz_free(&ctx, &tuple),
            Err(Error::ModeMismatch { .. })
        ));
        assert!(matches!(
            characteristic_free(&ctx, &tuple),
            Err(Error::ModeMismatch { .. })
        ));
    }

    #[test]
    fn single_factor_derivative_is_the_slot_derivative() {
        // phi(x) = 0 with phi'(x) = 4: every first-order formula gives 4.
        let table = TableBuilder::new(Label::from("A"), FunctionalKind::Phi, 1)
            .moment(Monomial::generator(Gen::from("x")), rat(0))
            .derivative(Monomial::generator(Gen::from("x")), 1, rat(4))
            .build()
            .unwrap();
        let ctx = SpecContext::new(
            Mode::Free,
            1,
            vec![(
                Label::from("A"),
                AlgebraSpec::new([Gen::from("x")], table, None),
            )],
        )
        .unwrap();
        let tuple = FactorTuple::new(vec![gen_of("A")]).unwrap();
        assert_eq!(leibniz_free(&ctx, &tuple).unwrap(), rat(4));
        assert_eq!(characteristic_free(&ctx, &tuple).unwrap(), rat(4));
        assert_eq!(infinitesimal_moment(&ctx, &tuple).unwrap(), rat(4));
    }
}
