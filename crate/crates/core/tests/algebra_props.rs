//! Ring and cumulant properties of jets, elements, and moment tables.

mod common;

use common::InstanceGen;
use infmot::ncalg::{
    boolean_cumulant, free_cumulant, Element, FunctionalKind, Gen, Jet, Mode, Monomial,
};
use infmot::partitions::{interval_partitions, noncrossing_partitions};
use infmot::{Label, Rat};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn rat_strategy() -> impl Strategy<Value = Rat> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Rat::new(n.into(), d.into()))
}

fn jet_strategy(order: usize) -> impl Strategy<Value = Jet<Rat>> {
    prop::collection::vec(rat_strategy(), order + 1).prop_map(Jet::from_coeffs)
}

proptest! {
    #[test]
    fn prop_jet_addition_is_commutative_and_associative(
        a in jet_strategy(3), b in jet_strategy(3), c in jet_strategy(3)
    ) {
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert_eq!(
            a.add(&b).unwrap().add(&c).unwrap(),
            a.add(&b.add(&c).unwrap()).unwrap()
        );
    }

    #[test]
    fn prop_jet_multiplication_distributes(
        a in jet_strategy(3), b in jet_strategy(3), c in jet_strategy(3)
    ) {
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(
            a.mul(&b.add(&c).unwrap()).unwrap(),
            a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
        );
        prop_assert_eq!(
            a.mul(&b).unwrap().mul(&c).unwrap(),
            a.mul(&b.mul(&c).unwrap()).unwrap()
        );
    }

    #[test]
    fn prop_jet_units_behave(a in jet_strategy(3)) {
        prop_assert_eq!(a.add(&Jet::zero(3)).unwrap(), a.clone());
        prop_assert_eq!(a.mul(&Jet::one(3)).unwrap(), a.clone());
        prop_assert!(a.sub(&a).unwrap().is_zero());
    }

    #[test]
    fn prop_truncation_is_multiplicative(a in jet_strategy(4), b in jet_strategy(4)) {
        for order in 0..=4usize {
            prop_assert_eq!(
                a.mul(&b).unwrap().truncate(order),
                a.truncate(order).mul(&b.truncate(order)).unwrap()
            );
        }
    }

    #[test]
    fn prop_derivatives_recover_coefficients(a in jet_strategy(4)) {
        let derivatives: Vec<Rat> = (0..=4).map(|k| a.derivative(k).unwrap()).collect();
        prop_assert_eq!(Jet::from_derivatives(derivatives), a);
    }
}

fn monomial_strategy() -> impl Strategy<Value = Monomial> {
    prop::collection::vec(prop::sample::select(vec!["x", "y"]), 0..4)
        .prop_map(|names| Monomial::new(names.into_iter().map(Gen::from).collect()))
}

fn element_strategy(label: &'static str) -> impl Strategy<Value = Element<Rat>> {
    prop::collection::vec((monomial_strategy(), rat_strategy()), 0..4)
        .prop_map(move |terms| Element::from_terms(Label::from(label), terms))
}

proptest! {
    #[test]
    fn prop_element_ring_laws(
        a in element_strategy("A"), b in element_strategy("A"), c in element_strategy("A")
    ) {
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert_eq!(
            a.mul(&b).unwrap().mul(&c).unwrap(),
            a.mul(&b.mul(&c).unwrap()).unwrap()
        );
        prop_assert_eq!(
            a.mul(&b.add(&c).unwrap()).unwrap(),
            a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
        );
        let unit = Element::unit(Label::from("A"));
        prop_assert_eq!(a.mul(&unit).unwrap(), a.clone());
        prop_assert_eq!(unit.mul(&a).unwrap(), a.clone());
    }

    #[test]
    fn prop_element_multiplication_concatenates_words(
        a in element_strategy("A"), b in element_strategy("A")
    ) {
        let product = a.mul(&b).unwrap();
        if !a.is_zero() && !b.is_zero() {
            // The free algebra has no zero divisors, so degrees add.
            prop_assert_eq!(product.degree(), a.degree() + b.degree());
        } else {
            prop_assert!(product.is_zero());
        }
    }
}

/// Boolean cumulants by interval-partition Moebius inversion, written
/// against the partition generator rather than the recursion.
fn boolean_by_moebius(
    table: &infmot::ncalg::FunctionalTable<Rat>,
    factors: &[Element<Rat>],
) -> Jet<Rat> {
    let n = factors.len();
    let order = table.order();
    let mut total = Jet::zero(order);
    for partition in interval_partitions(n) {
        let sign = if (partition.len() - 1) % 2 == 0 {
            Rat::one()
        } else {
            -Rat::one()
        };
        let mut term = Jet::one(order);
        for block in &partition {
            let mut product = factors[block[0]].clone();
            for &k in &block[1..] {
                product = product.mul(&factors[k]).unwrap();
            }
            term = term.mul(&table.evaluate(&product).unwrap()).unwrap();
        }
        total = total.add(&term.scale(&sign)).unwrap();
    }
    total
}

#[test]
fn boolean_cumulants_match_moebius_inversion() {
    let mut gen = InstanceGen::new(61);
    for _ in 0..25 {
        let ctx = gen.context(Mode::Free, 2, &["A"], 10);
        let label = Label::from("A");
        let table = ctx.phi(&label).unwrap();
        let n = 1 + gen.pick(4);
        let factors: Vec<Element<Rat>> = (0..n)
            .map(|_| {
                let degree = 1 + gen.pick(2);
                Element::from_terms(
                    label.clone(),
                    vec![
                        (Monomial::power(Gen::from("x"), degree), gen.nonzero_rat()),
                        (Monomial::unit(), gen.rat()),
                    ],
                )
            })
            .collect();
        assert_eq!(
            boolean_cumulant(table, &factors).unwrap(),
            boolean_by_moebius(table, &factors)
        );
    }
}

#[test]
fn free_cumulants_reconstruct_moments() {
    let mut gen = InstanceGen::new(62);
    for _ in 0..20 {
        let ctx = gen.context(Mode::Free, 2, &["A"], 10);
        let label = Label::from("A");
        let table = ctx.phi(&label).unwrap();
        let n = 1 + gen.pick(4);
        let factors: Vec<Element<Rat>> = (0..n)
            .map(|_| {
                let degree = 1 + gen.pick(2);
                Element::from_terms(
                    label.clone(),
                    vec![(Monomial::power(Gen::from("x"), degree), gen.nonzero_rat())],
                )
            })
            .collect();
        let mut reconstructed = Jet::zero(table.order());
        for partition in noncrossing_partitions(n) {
            let mut term = Jet::one(table.order());
            for block in &partition {
                let args: Vec<Element<Rat>> = block.iter().map(|&k| factors[k].clone()).collect();
                term = term.mul(&free_cumulant(table, &args).unwrap()).unwrap();
            }
            reconstructed = reconstructed.add(&term).unwrap();
        }
        let mut product = factors[0].clone();
        for factor in &factors[1..] {
            product = product.mul(factor).unwrap();
        }
        assert_eq!(reconstructed, table.evaluate(&product).unwrap());
    }
}

#[test]
fn centering_kills_the_value_and_keeps_derivatives() {
    let mut gen = InstanceGen::new(63);
    let ctx = gen.context(Mode::Free, 2, &["A"], 6);
    let label = Label::from("A");
    let table = ctx.phi(&label).unwrap();
    let a = Element::from_terms(
        label.clone(),
        vec![(Monomial::power(Gen::from("x"), 2), Rat::one())],
    );
    let centered = table.center(&a).unwrap();
    let jet = table.evaluate(&centered).unwrap();
    assert!(jet.value().is_zero());
    assert_eq!(
        jet.derivative(1).unwrap(),
        table.evaluate(&a).unwrap().derivative(1).unwrap()
    );
    assert!(table.is_centered(&centered).unwrap());
}

#[test]
fn law_tables_reject_unknown_names() {
    assert!(matches!(
        infmot::ncalg::Law::<Rat>::by_name("cauchy", None),
        Err(infmot::Error::UnknownLaw { .. })
    ));
}

#[test]
fn kind_names_are_stable() {
    assert_eq!(FunctionalKind::Phi.name(), "phi");
    assert_eq!(FunctionalKind::Psi.name(), "psi");
}
