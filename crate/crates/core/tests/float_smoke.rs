//! The engine is generic over the scalar; this runs it on f64 and
//! compares against the exact rational result.

use infmot::functionals::FactorTuple;
use infmot::ncalg::{
    AlgebraSpec, Element, FunctionalKind, Gen, Mode, Monomial, SpecContext, TableBuilder,
};
use infmot::products::{infinitesimal_moment, product_moment};
use infmot::{Label, Rat};
use num_traits::ToPrimitive;

fn context<S, F>(mut lift: F) -> SpecContext<S>
where
    S: infmot::Scalar,
    F: FnMut(i64, i64) -> S,
{
    let algebras = ["A", "B"]
        .iter()
        .enumerate()
        .map(|(index, &name)| {
            let label = Label::from(name);
            let mut builder = TableBuilder::new(label.clone(), FunctionalKind::Phi, 2);
            for degree in 1..=6usize {
                let offset = (index as i64 + 2) * degree as i64;
                builder =
                    builder.moment(Monomial::power(Gen::from("x"), degree), lift(offset - 4, 3));
                builder = builder.derivative(
                    Monomial::power(Gen::from("x"), degree),
                    1,
                    lift(2 * offset - 7, 2),
                );
                builder =
                    builder.derivative(Monomial::power(Gen::from("x"), degree), 2, lift(offset, 5));
            }
            (
                label,
                AlgebraSpec::new([Gen::from("x")], builder.build().unwrap(), None),
            )
        })
        .collect();
    SpecContext::new(Mode::Free, 2, algebras).unwrap()
}

fn tuple<S: infmot::Scalar, F: FnMut(i64, i64) -> S>(mut lift: F) -> FactorTuple<S> {
    let factors = [("A", 1usize, 2i64), ("B", 2, -1), ("A", 2, 3), ("B", 1, 1)]
        .iter()
        .map(|&(name, degree, coeff)| {
            Element::from_terms(
                Label::from(name),
                vec![
                    (Monomial::power(Gen::from("x"), degree), lift(coeff, 1)),
                    (Monomial::unit(), lift(-coeff, 2)),
                ],
            )
        })
        .collect();
    FactorTuple::new(factors).unwrap()
}

#[test]
fn float_engine_tracks_the_exact_engine() {
    let exact_ctx = context::<Rat, _>(|n, d| Rat::new(n.into(), d.into()));
    let float_ctx = context::<f64, _>(|n, d| n as f64 / d as f64);
    let exact_tuple = tuple::<Rat, _>(|n, d| Rat::new(n.into(), d.into()));
    let float_tuple = tuple::<f64, _>(|n, d| n as f64 / d as f64);

    let exact = product_moment(&exact_ctx, &exact_tuple).unwrap().phi;
    let float = product_moment(&float_ctx, &float_tuple).unwrap().phi;
    for k in 0..=2 {
        let reference = exact.coeff(k).to_f64().unwrap();
        assert!(
            (float.coeff(k) - reference).abs() < 1e-9,
            "coefficient {k}: {} vs {reference}",
            float.coeff(k)
        );
    }

    let exact_d = infinitesimal_moment(&exact_ctx, &exact_tuple).unwrap();
    let float_d = infinitesimal_moment(&float_ctx, &float_tuple).unwrap();
    assert!((float_d - exact_d.to_f64().unwrap()).abs() < 1e-9);
}
