//! Boolean and free cumulants of a deformed functional.
//!
//! Both cumulants are multilinear functionals defined by moment
//! recursions. The Boolean cumulant peels the leftmost interval block:
//!
//! ```text
//! b_n(a_1, ..., a_n) = phi(a_1 ... a_n)
//!     - sum over k < n of b_k(a_1, ..., a_k) phi(a_{k+1} ... a_n)
//! ```
//!
//! The free cumulant subtracts every proper noncrossing partition:
//!
//! ```text
//! k_n(a_1, ..., a_n) = phi(a_1 ... a_n)
//!     - sum over nc partitions p except the full block of
//!       the product of k over the blocks of p
//! ```
//!
//! Since the functional is jet-valued, so are the cumulants.

use crate::error::Error;
use crate::ncalg::element::Element;
use crate::ncalg::jet::Jet;
use crate::ncalg::table::FunctionalTable;
use crate::partitions::noncrossing_partitions;
use crate::scalar::Scalar;

fn product_moment_of_run<S: Scalar>(
    table: &FunctionalTable<S>,
    args: &[Element<S>],
) -> Result<Jet<S>, Error> {
    let mut product = args[0].clone();
    for a in &args[1..] {
        product = product.mul(a)?;
    }
    table.evaluate(&product)
}

/// Boolean cumulant of the argument tuple under the table's functional.
/// All arguments must live in the table's algebra.
pub fn boolean_cumulant<S: Scalar>(
    table: &FunctionalTable<S>,
    args: &[Element<S>],
) -> Result<Jet<S>, Error> {
    if args.is_empty() {
        return Err(Error::EmptyTuple);
    }
    let moment = product_moment_of_run(table, args)?;
    let mut acc = moment;
    for k in 1..args.len() {
        let head = boolean_cumulant(table, &args[..k])?;
        let tail = product_moment_of_run(table, &args[k..])?;
        acc = acc.sub(&head.mul(&tail)?)?;
    }
    Ok(acc)
}

/// Free cumulant of the argument tuple under the table's functional.
/// All arguments must live in the table's algebra.
pub fn free_cumulant<S: Scalar>(
    table: &FunctionalTable<S>,
    args: &[Element<S>],
) -> Result<Jet<S>, Error> {
    if args.is_empty() {
        return Err(Error::EmptyTuple);
    }
    let n = args.len();
    let mut acc = product_moment_of_run(table, args)?;
    for partition in noncrossing_partitions(n) {
        if partition.len() == 1 {
            continue;
        }
        let mut term = Jet::one(table.order());
        for block in &partition {
            let block_args: Vec<Element<S>> = block.iter().map(|&i| args[i].clone()).collect();
            term = term.mul(&free_cumulant(table, &block_args)?)?;
        }
        acc = acc.sub(&term)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncalg::element::{Gen, Monomial};
    use crate::ncalg::table::{FunctionalKind, Law, TableBuilder};
    use crate::partitions::interval_partitions;
    use crate::{Label, Rat};

    fn rat(n: i64) -> Rat {
        Rat::from_integer(n.into())
    }

    fn semicircle_table() -> FunctionalTable<Rat> {
        TableBuilder::new(Label::from("A"), FunctionalKind::Phi, 0)
            .law(Gen::from("x"), Law::Semicircle { variance: rat(1) })
            .build()
            .unwrap()
    }

    fn bernoulli_table() -> FunctionalTable<Rat> {
        TableBuilder::new(Label::from("A"), FunctionalKind::Phi, 0)
            .law(Gen::from("x"), Law::BernoulliSymmetric)
            .build()
            .unwrap()
    }

    fn x() -> Element<Rat> {
        Element::generator(Label::from("A"), Gen::from("x"))
    }

    /// Independent route: the Boolean cumulant as the signed sum over
    /// interval partitions of products of moments.
    fn boolean_by_moebius(table: &FunctionalTable<Rat>, args: &[Element<Rat>]) -> Jet<Rat> {
        let mut acc = Jet::zero(table.order());
        for partition in interval_partitions(args.len()) {
            let mut term = Jet::one(table.order());
            for block in &partition {
                let block_args: Vec<Element<Rat>> =
                    block.iter().map(|&i| args[i].clone()).collect();
                term = term
                    .mul(&product_moment_of_run(table, &block_args).unwrap())
                    .unwrap();
            }
            if partition.len() % 2 == 0 {
                term = term.neg();
            }
            acc = acc.add(&term).unwrap();
        }
        acc
    }

    #[test]
    fn boolean_recursion_matches_moebius_sum() {
        let table = semicircle_table();
        for n in 1..=6 {
            let args = vec![x(); n];
            assert_eq!(
                boolean_cumulant(&table, &args).unwrap(),
                boolean_by_moebius(&table, &args),
                "n = {n}"
            );
        }
    }

    #[test]
    fn boolean_cumulants_start_with_moment_and_variance() {
        let table = semicircle_table();
        // b_1 = phi(x) = 0, b_2 = phi(x^2) - phi(x)^2 = 1.
        assert!(boolean_cumulant(&table, &[x()]).unwrap().is_zero());
        assert_eq!(
            boolean_cumulant(&table, &[x(), x()]).unwrap().value(),
            &rat(1)
        );
    }

    #[test]
    fn free_cumulants_of_the_semicircle_vanish_beyond_two() {
        let table = semicircle_table();
        let expected = [rat(0), rat(1), rat(0), rat(0), rat(0)];
        for (idx, want) in expected.iter().enumerate() {
            let args = vec![x(); idx + 1];
            assert_eq!(
                free_cumulant(&table, &args).unwrap().value(),
                want,
                "order {}",
                idx + 1
            );
        }
    }

    #[test]
    fn free_cumulants_of_symmetric_bernoulli() {
        let table = bernoulli_table();
        // k_2 = 1 and k_4 = -1: the two noncrossing pairings of four
        // points overshoot the fourth moment by one.
        assert_eq!(
            free_cumulant(&table, &vec![x(); 2]).unwrap().value(),
            &rat(1)
        );
        assert_eq!(
            free_cumulant(&table, &vec![x(); 3]).unwrap().value(),
            &rat(0)
        );
        assert_eq!(
            free_cumulant(&table, &vec![x(); 4]).unwrap().value(),
            &rat(-1)
        );
    }

    #[test]
    fn moments_reconstruct_from_free_cumulants() {
        // Sum over all noncrossing partitions of cumulant products must
        // return the moment.
        let table = bernoulli_table();
        for n in 1..=6 {
            let args = vec![x(); n];
            let mut acc = Jet::zero(table.order());
            for partition in crate::partitions::noncrossing_partitions(n) {
                let mut term = Jet::one(table.order());
                for block in &partition {
                    let block_args: Vec<Element<Rat>> =
                        block.iter().map(|&i| args[i].clone()).collect();
                    term = term
                        .mul(&free_cumulant(&table, &block_args).unwrap())
                        .unwrap();
                }
                acc = acc.add(&term).unwrap();
            }
            let monomial = Monomial::power(Gen::from("x"), n);
            assert_eq!(
                &acc.value().clone(),
                table.lookup(&monomial).unwrap().value(),
                "n = {n}"
            );
        }
    }

    #[test]
    fn cumulants_of_jet_valued_moments() {
        // One generator with phi(x) = 0 + t and phi(x^2) = 1: the second
        // Boolean cumulant is 1 - t^2.
        let xg = Gen::from("x");
        let table: FunctionalTable<Rat> =
            TableBuilder::new(Label::from("A"), FunctionalKind::Phi, 2)
                .moment(Monomial::generator(xg.clone()), rat(0))
                .derivative(Monomial::generator(xg.clone()), 1, rat(1))
                .moment(Monomial::power(xg.clone(), 2), rat(1))
                .build()
                .unwrap();
        let b2 = boolean_cumulant(&table, &[x(), x()]).unwrap();
        assert_eq!(b2.coeffs(), &[rat(1), rat(0), rat(-1)]);
    }

    #[test]
    fn empty_argument_tuples_are_rejected() {
        let table = semicircle_table();
        assert_eq!(
            boolean_cumulant(&table, &[]).unwrap_err(),
            Error::EmptyTuple
        );
        assert_eq!(free_cumulant(&table, &[]).unwrap_err(), Error::EmptyTuple);
    }
}
