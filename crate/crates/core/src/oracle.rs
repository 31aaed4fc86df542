//! Independent brute-force evaluators for product moments.
//!
//! These oracles share no code with the Motzkin-path machinery in
//! [`crate::functionals`] and [`crate::products`]; agreement between the
//! two routes is the correctness argument for both.
//!
//! * [`free_oracle`] computes the moment jet of an alternating product
//!   under the free product of the per-algebra functionals, by the
//!   centering recursion: write each factor as its centered part plus a
//!   jet multiple of the unit, expand multilinearly, kill the
//!   all-centered term, merge adjacent factors with equal labels, and
//!   recurse. Every expansion strictly shortens the tuple, so the
//!   recursion terminates.
//! * [`cfree_oracle`] runs the analogous recursion for the conditionally
//!   free product, where the first factor is centered with respect to
//!   the conditioning functional and all later factors with respect to
//!   the second state; the factor occupying position one is re-centered
//!   accordingly in every sub-expansion. Its second component is the
//!   free-product recursion over the second states.
//! * [`nc_oracle`] sums products of free cumulants over label-constant
//!   noncrossing partitions.
//! * [`boolean_oracle`] multiplies the per-factor moment jets, the whole
//!   content of the Boolean product.
//!
//! Centering multiplies factors by jets, so the recursion works with
//! jet-coefficient polynomials. Memoization keys canonicalize those
//! polynomials, which is why the oracles require an ordered scalar; the
//! intended instantiation is exact rationals.

use crate::error::Error;
use crate::ncalg::{free_cumulant, Element, FunctionalTable, Gen, Jet, Monomial, SpecContext};
use crate::partitions::noncrossing_partitions;
use crate::scalar::Scalar;
use crate::Label;
use std::collections::BTreeMap;

/// Statistics of one oracle run, for debugging and for checking that
/// memoization does not change results.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct RecursionTrace {
    /// Number of expansion steps (recursive calls past the base cases).
    pub expansions: u64,
    /// Deepest recursion reached.
    pub max_depth: usize,
    /// Sub-tuples answered from the memo table.
    pub memo_hits: u64,
}

/// A polynomial with jet coefficients, the working currency of the
/// centering recursions.
#[derive(Clone, PartialEq, Debug)]
struct JetElement<S> {
    label: Label,
    terms: BTreeMap<Monomial, Jet<S>>,
}

impl<S: Scalar> JetElement<S> {
    fn from_element(e: &Element<S>, order: usize) -> Self {
        JetElement {
            label: e.label().clone(),
            terms: e
                .terms()
                .map(|(m, c)| (m.clone(), Jet::constant(c.clone(), order)))
                .collect(),
        }
    }

    fn is_zero(&self) -> bool {
        self.terms.values().all(Jet::is_zero)
    }

    /// Subtracts `c` times the unit monomial.
    fn sub_scalar(&self, c: &Jet<S>) -> Result<Self, Error> {
        let mut terms = self.terms.clone();
        let entry = terms
            .entry(Monomial::unit())
            .or_insert_with(|| Jet::zero(c.order()));
        *entry = entry.sub(c)?;
        terms.retain(|_, jet| !jet.is_zero());
        Ok(JetElement {
            label: self.label.clone(),
            terms,
        })
    }

    /// Product by word concatenation; both operands must share a label.
    fn mul(&self, other: &Self) -> Result<Self, Error> {
        let mut terms: BTreeMap<Monomial, Jet<S>> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.concat(mb);
                let product = ca.mul(cb)?;
                match terms.get_mut(&m) {
                    Some(entry) => *entry = entry.add(&product)?,
                    None => {
                        terms.insert(m, product);
                    }
                }
            }
        }
        terms.retain(|_, jet| !jet.is_zero());
        Ok(JetElement {
            label: self.label.clone(),
            terms,
        })
    }

    /// Jet-linear extension of the table to jet-coefficient polynomials.
    fn evaluate(&self, table: &FunctionalTable<S>) -> Result<Jet<S>, Error> {
        let mut acc = Jet::zero(table.order());
        for (monomial, coeff) in &self.terms {
            acc = acc.add(&coeff.mul(&table.lookup(monomial)?)?)?;
        }
        Ok(acc)
    }

    /// Canonical form used as a memo key.
    fn key(&self) -> FactorKey<S> {
        (
            self.label.clone(),
            self.terms
                .iter()
                .map(|(m, jet)| (m.gens().to_vec(), jet.coeffs().to_vec()))
                .collect(),
        )
    }
}

type FactorKey<S> = (Label, Vec<(Vec<Gen>, Vec<S>)>);
type TupleKey<S> = Vec<FactorKey<S>>;

/// How a recursion picks the jet a factor is centered by.
#[derive(Clone, Copy, PartialEq, Eq)]
enum CenteringRule {
    /// Every factor is centered under its algebra's conditioning
    /// functional.
    AllPhi,
    /// The first factor is centered under the conditioning functional,
    /// all later factors under the second state.
    FirstPhiRestPsi,
}

struct Recursion<'a, S: Scalar + Ord> {
    ctx: &'a SpecContext<S>,
    rule: CenteringRule,
    memo: Option<BTreeMap<TupleKey<S>, Jet<S>>>,
    trace: RecursionTrace,
}

impl<'a, S: Scalar + Ord> Recursion<'a, S> {
    fn centering_table(
        &self,
        position: usize,
        label: &Label,
    ) -> Result<&'a FunctionalTable<S>, Error> {
        match self.rule {
            CenteringRule::AllPhi => self.ctx.phi(label),
            CenteringRule::FirstPhiRestPsi => {
                if position == 0 {
                    self.ctx.phi(label)
                } else {
                    self.ctx.psi(label)
                }
            }
        }
    }

    fn run(&mut self, factors: &[JetElement<S>], depth: usize) -> Result<Jet<S>, Error> {
        let order = self.ctx.order();
        self.trace.max_depth = self.trace.max_depth.max(depth);
        if factors.is_empty() {
            return Ok(Jet::one(order));
        }
        if factors.len() == 1 {
            return factors[0].evaluate(self.ctx.phi(&factors[0].label)?);
        }
        let key: Option<TupleKey<S>> = self
            .memo
            .as_ref()
            .map(|_| factors.iter().map(JetElement::key).collect());
        if let (Some(memo), Some(k)) = (self.memo.as_ref(), key.as_ref()) {
            if let Some(hit) = memo.get(k) {
                self.trace.memo_hits += 1;
                return Ok(hit.clone());
            }
        }
        self.trace.expansions += 1;

        let n = factors.len();
        let mut scalars = Vec::with_capacity(n);
        let mut centered = Vec::with_capacity(n);
        for (position, factor) in factors.iter().enumerate() {
            let table = self.centering_table(position, &factor.label)?;
            let c = factor.evaluate(table)?;
            centered.push(factor.sub_scalar(&c)?);
            scalars.push(c);
        }

        // Sum over proper subsets: factors inside the subset stay as
        // their centered parts, the rest contribute their scalar jets.
        // The full subset is the all-centered alternating term, which
        // vanishes identically.
        let mut total = Jet::zero(order);
        for subset in 0..(1u64 << n) - 1 {
            let mut coefficient = Jet::one(order);
            let mut kept: Vec<JetElement<S>> = Vec::new();
            let mut zero_term = false;
            for k in 0..n {
                if subset & (1 << k) != 0 {
                    if centered[k].is_zero() {
                        zero_term = true;
                        break;
                    }
                    match kept.last_mut() {
                        Some(last) if last.label == centered[k].label => {
                            *last = last.mul(&centered[k])?;
                        }
                        _ => kept.push(centered[k].clone()),
                    }
                } else {
                    if scalars[k].is_zero() {
                        zero_term = true;
                        break;
                    }
                    coefficient = coefficient.mul(&scalars[k])?;
                }
            }
            if zero_term {
                continue;
            }
            let inner = self.run(&kept, depth + 1)?;
            total = total.add(&coefficient.mul(&inner)?)?;
        }

        if let (Some(memo), Some(k)) = (self.memo.as_mut(), key) {
            memo.insert(k, total.clone());
        }
        Ok(total)
    }
}

fn check_alternating<S: Scalar>(factors: &[Element<S>]) -> Result<(), Error> {
    if factors.is_empty() {
        return Err(Error::EmptyTuple);
    }
    for (idx, pair) in factors.windows(2).enumerate() {
        if pair[0].label() == pair[1].label() {
            return Err(Error::AdjacentLabels { position: idx + 1 });
        }
    }
    Ok(())
}

fn lift<S: Scalar>(factors: &[Element<S>], order: usize) -> Vec<JetElement<S>> {
    factors
        .iter()
        .map(|f| JetElement::from_element(f, order))
        .collect()
}

fn run_free<S: Scalar + Ord>(
    ctx: &SpecContext<S>,
    factors: &[Element<S>],
    memoize: bool,
) -> Result<(Jet<S>, RecursionTrace), Error> {
    check_alternating(factors)?;
    let mut recursion = Recursion {
        ctx,
        rule: CenteringRule::AllPhi,
        memo: memoize.then(BTreeMap::new),
        trace: RecursionTrace::default(),
    };
    let jet = recursion.run(&lift(factors, ctx.order()), 0)?;
    Ok((jet, recursion.trace))
}

/// Moment jet of the alternating tuple under the free product of the
/// conditioning functionals, by the centering recursion.
pub fn free_oracle<S: Scalar + Ord>(
    ctx: &SpecContext<S>,
    factors: &[Element<S>],
) -> Result<Jet<S>, Error> {
    Ok(run_free(ctx, factors, true)?.0)
}

/// [`free_oracle`] without memoization, for checking that caching never
/// changes a value.
pub fn free_oracle_unmemoized<S: Scalar + Ord>(
    ctx: &SpecContext<S>,
    factors: &[Element<S>],
) -> Result<Jet<S>, Error> {
    Ok(run_free(ctx, factors, false)?.0)
}

/// [`free_oracle`] with expansion statistics.
pub fn free_oracle_traced<S: Scalar + Ord>(
    ctx: &SpecContext<S>,
    factors: &[Element<S>],
) -> Result<(Jet<S>, RecursionTrace), Error> {
    run_free(ctx, factors, true)
}

/// Moment jets `(phi side, psi side)` of the alternating tuple under the
/// conditionally free product, by the pattern-centering recursion. The
/// psi side is the free-product recursion over the second states.
pub fn cfree_oracle<S: Scalar + Ord>(
    ctx: &SpecContext<S>,
    factors: &[Element<S>],
) -> Result<(Jet<S>, Jet<S>), Error> {
    check_alternating(factors)?;
    let mut recursion = Recursion {
        ctx,
        rule: CenteringRule::FirstPhiRestPsi,
        memo: Some(BTreeMap::new()),
        trace: RecursionTrace::default(),
    };
    let phi_side = recursion.run(&lift(factors, ctx.order()), 0)?;
    let psi_ctx = ctx.psi_projection()?;
    let psi_side = free_oracle(&psi_ctx, factors)?;
    Ok((phi_side, psi_side))
}

/// Moment jet of the alternating tuple by summing free-cumulant products
/// over label-constant noncrossing partitions.
pub fn nc_oracle<S: Scalar>(ctx: &SpecContext<S>, factors: &[Element<S>]) -> Result<Jet<S>, Error> {
    check_alternating(factors)?;
    let n = factors.len();
    let order = ctx.order();
    let mut total = Jet::zero(order);
    'partition: for partition in noncrossing_partitions(n) {
        let mut term = Jet::one(order);
        for block in &partition {
            let label = factors[block[0]].label();
            if block.iter().any(|&k| factors[k].label() != label) {
                continue 'partition;
            }
            let args: Vec<Element<S>> = block.iter().map(|&k| factors[k].clone()).collect();
            term = term.mul(&free_cumulant(ctx.phi(label)?, &args)?)?;
        }
        total = total.add(&term)?;
    }
    Ok(total)
}

/// Moment jet of the alternating tuple under the Boolean product: the
/// product of the per-factor moment jets.
pub fn boolean_oracle<S: Scalar>(
    ctx: &SpecContext<S>,
    factors: &[Element<S>],
) -> Result<Jet<S>, Error> {
    check_alternating(factors)?;
    let mut total = Jet::one(ctx.order());
    for factor in factors {
        total = total.mul(&ctx.phi(factor.label())?.evaluate(factor)?)?;
    }
    Ok(total)
}
