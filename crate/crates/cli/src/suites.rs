//! The verification suites behind `infmot verify`.
//!
//! Each suite replays a family of identities on seeded random
//! instances, or on fixed worked examples, and reports the number of
//! cases it ran together with the first counterexample if one shows
//! up. Suites are deterministic for a fixed seed and option set.

use infmot::functionals::{
    motzkin_derivative_closed, motzkin_derivative_leibniz, motzkin_functional, motzkin_higher,
    FactorTuple,
};
use infmot::motzkin::{count_by_local_maxima, enumerate_words, LabelTuple, MotzkinWord, PathKind};
use infmot::ncalg::{
    AlgebraSpec, Element, FunctionalKind, Gen, Law, Mode, SpecContext, TableBuilder,
};
use infmot::oracle::{
    boolean_oracle, cfree_oracle, free_oracle, free_oracle_unmemoized, nc_oracle,
};
use infmot::products::{
    boolean_moment, cfree_closed, cfree_leibniz, characteristic_free, higher_moment,
    higher_moment_centered, infinitesimal_moment, leibniz_free, normalize_alternating,
    product_moment,
};
use infmot::{Error, Label, Rat};
use num_traits::{One, Zero};

use crate::error::CliError;
use crate::gen::{Centering, InstanceGen};
use crate::report::SuiteOutcome;

/// The individual suites, in the order `verify --suite all` runs them.
pub const SUITE_NAMES: [&str; 9] = [
    "partitions",
    "counting",
    "oracle-free",
    "pyramid",
    "higher",
    "boolean",
    "cfree-class",
    "cfree-leibniz",
    "paper-examples",
];

const NAMES: [&str; 3] = ["A", "B", "C"];

#[derive(Clone, Copy, Debug)]
pub struct SuiteOptions {
    pub n_max: Option<usize>,
    pub cases: Option<u64>,
    pub seed: u64,
}

impl SuiteOptions {
    fn n_max(&self, default: usize) -> usize {
        self.n_max.unwrap_or(default).max(1)
    }

    fn cases(&self, default: u64) -> u64 {
        self.cases.unwrap_or(default)
    }
}

/// Runs one suite by name, or every suite for `all`.
pub fn run_suite(name: &str, opts: &SuiteOptions) -> Result<Vec<SuiteOutcome>, CliError> {
    if name == "all" {
        return SUITE_NAMES.iter().map(|&s| run_one(s, opts)).collect();
    }
    Ok(vec![run_one(name, opts)?])
}

fn run_one(name: &str, opts: &SuiteOptions) -> Result<SuiteOutcome, CliError> {
    match name {
        "partitions" => Ok(partitions_suite(opts)),
        "counting" => Ok(counting_suite(opts)),
        "oracle-free" => Ok(oracle_free_suite(opts)),
        "pyramid" => Ok(pyramid_suite(opts)),
        "higher" => Ok(higher_suite(opts)),
        "boolean" => Ok(boolean_suite(opts)),
        "cfree-class" => Ok(cfree_class_suite(opts)),
        "cfree-leibniz" => Ok(cfree_leibniz_suite(opts)),
        "paper-examples" => Ok(paper_examples_suite(opts)),
        other => Err(CliError::Usage(format!(
            "unknown suite '{other}'; expected one of {} or all",
            SUITE_NAMES.join(", ")
        ))),
    }
}

/// Accumulates cases until the first counterexample.
struct Run {
    name: &'static str,
    cases: u64,
    failure: Option<String>,
}

impl Run {
    fn new(name: &'static str) -> Self {
        Run {
            name,
            cases: 0,
            failure: None,
        }
    }

    fn failed(&self) -> bool {
        self.failure.is_some()
    }

    fn fail(&mut self, message: String) {
        if self.failure.is_none() {
            self.cases += 1;
            self.failure = Some(message);
        }
    }

    fn case<F>(&mut self, f: F)
    where
        F: FnOnce() -> Result<Option<String>, Error>,
    {
        if self.failure.is_some() {
            return;
        }
        self.cases += 1;
        match f() {
            Ok(None) => {}
            Ok(Some(message)) => self.failure = Some(message),
            Err(e) => self.failure = Some(format!("unexpected error: {e}")),
        }
    }

    fn finish(self) -> SuiteOutcome {
        SuiteOutcome {
            suite: self.name.to_owned(),
            cases: self.cases,
            passed: self.failure.is_none(),
            counterexample: self.failure,
        }
    }
}

fn words_of(run: &mut Run, n: usize) -> Vec<MotzkinWord> {
    match enumerate_words(n) {
        Ok(words) => words,
        Err(e) => {
            run.fail(format!("enumerating words of length {n}: {e}"));
            Vec::new()
        }
    }
}

fn word(letters: &[u32]) -> MotzkinWord {
    MotzkinWord::new(letters.to_vec()).expect("fixture word is valid")
}

fn rat(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

/// Motzkin numbers `M_0 ..= M_{len - 1}` by the standard recurrence.
fn motzkin_numbers(len: usize) -> Vec<u64> {
    let mut m = Vec::with_capacity(len);
    m.push(1u64);
    for k in 1..len {
        let mut next = m[k - 1];
        for i in 0..k.saturating_sub(1) {
            next += m[i] * m[k - 2 - i];
        }
        m.push(next);
    }
    m
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let mut out = 1u64;
    for i in 0..k {
        out = out * (n - i) / (i + 1);
    }
    out
}

/// The level return partition recomputed straight from its definition,
/// independently of the library's scan.
fn partition_by_definition(w: &MotzkinWord) -> Vec<Vec<usize>> {
    let n = w.len();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for level in 1..=w.height() {
        let mut current: Vec<usize> = Vec::new();
        for p in (1..=n).filter(|&p| w.letter(p) == level) {
            if let Some(&prev) = current.last() {
                let linked = p > prev + 1 && ((prev + 1)..p).all(|r| w.letter(r) > level);
                if !linked {
                    blocks.push(std::mem::take(&mut current));
                }
            }
            current.push(p);
        }
        if !current.is_empty() {
            blocks.push(current);
        }
    }
    blocks.sort();
    blocks
}

fn phi_val(ctx: &SpecContext<Rat>, e: &Element<Rat>) -> Result<Rat, Error> {
    Ok(ctx.phi(e.label())?.evaluate(e)?.value().clone())
}

fn phi_der(ctx: &SpecContext<Rat>, e: &Element<Rat>) -> Result<Rat, Error> {
    ctx.phi(e.label())?.evaluate(e)?.derivative(1)
}

fn psi_val(ctx: &SpecContext<Rat>, e: &Element<Rat>) -> Result<Rat, Error> {
    Ok(ctx.psi(e.label())?.evaluate(e)?.value().clone())
}

fn psi_der(ctx: &SpecContext<Rat>, e: &Element<Rat>) -> Result<Rat, Error> {
    ctx.psi(e.label())?.evaluate(e)?.derivative(1)
}

/// `phi(a_p a_q)` for two positions of the tuple in the same algebra.
fn pair_phi(
    ctx: &SpecContext<Rat>,
    t: &FactorTuple<Rat>,
    p: usize,
    q: usize,
) -> Result<Rat, Error> {
    let prod = t.factor(p).mul(t.factor(q))?;
    phi_val(ctx, &prod)
}

/// `psi(a_p a_q)` for two positions of the tuple in the same algebra.
fn pair_psi(
    ctx: &SpecContext<Rat>,
    t: &FactorTuple<Rat>,
    p: usize,
    q: usize,
) -> Result<Rat, Error> {
    let prod = t.factor(p).mul(t.factor(q))?;
    psi_val(ctx, &prod)
}

// ---------------------------------------------------------------------
// partitions
// ---------------------------------------------------------------------

fn partitions_suite(opts: &SuiteOptions) -> SuiteOutcome {
    let n_max = opts.n_max(9);
    let mut run = Run::new("partitions");
    let mut gen = InstanceGen::new(opts.seed);
    fixture_worked_partitions(&mut run);
    fixture_local_maxima(&mut run);
    fixture_adaptedness(&mut run);
    for n in 1..=n_max {
        if run.failed() {
            break;
        }
        let words = words_of(&mut run, n);
        for w in &words {
            run.case(|| {
                let partition = w.level_return_partition();
                let mut seen = vec![false; n + 1];
                for block in partition.blocks() {
                    for &p in &block.positions {
                        if seen[p] {
                            return Ok(Some(format!("word {w}: position {p} appears twice")));
                        }
                        seen[p] = true;
                        if w.letter(p) != block.level {
                            return Ok(Some(format!(
                                "word {w}: position {p} has letter {} in a level {} block",
                                w.letter(p),
                                block.level
                            )));
                        }
                    }
                }
                if let Some(p) = (1..=n).find(|&p| !seen[p]) {
                    return Ok(Some(format!("word {w}: position {p} not covered")));
                }
                let mut got = partition.position_sets();
                got.sort();
                let want = partition_by_definition(w);
                if got != want {
                    return Ok(Some(format!(
                        "word {w}: partition {got:?} disagrees with the definition {want:?}"
                    )));
                }
                if partition.singletons() != w.local_maxima() {
                    return Ok(Some(format!(
                        "word {w}: singletons {:?} are not the weak local maxima {:?}",
                        partition.singletons(),
                        w.local_maxima()
                    )));
                }
                Ok(None)
            });
        }
        if n <= 8 {
            for w in &words {
                run.case(|| {
                    let labels = gen.adapted_labels(w, &NAMES);
                    let tuple = LabelTuple::new(labels)?;
                    let report = w.is_adapted(&tuple)?;
                    if report.is_adapted() {
                        Ok(None)
                    } else {
                        Ok(Some(format!(
                            "word {w}: sampled labels rejected with {:?}",
                            report.violation()
                        )))
                    }
                });
            }
        }
    }
    run.finish()
}

fn fixture_worked_partitions(run: &mut Run) {
    let fixtures: [(&[u32], &[&[usize]]); 3] = [
        (
            &[1, 2, 3, 3, 3, 2, 1, 1, 2, 1, 2, 1],
            &[
                &[1, 7],
                &[2, 6],
                &[3],
                &[4],
                &[5],
                &[8, 10, 12],
                &[9],
                &[11],
            ],
        ),
        (
            &[1, 1, 2, 3, 2, 3, 2, 2, 3, 2, 1, 1],
            &[
                &[1],
                &[2, 11],
                &[3, 5, 7],
                &[4],
                &[6],
                &[8, 10],
                &[9],
                &[12],
            ],
        ),
        (
            &[1, 2, 3, 4, 3, 2, 3, 3, 4, 3, 2, 1],
            &[&[1, 12], &[2, 6, 11], &[3, 5], &[4], &[7], &[8, 10], &[9]],
        ),
    ];
    for (letters, expected) in fixtures {
        run.case(|| {
            let w = MotzkinWord::new(letters.to_vec())?;
            let mut got = w.level_return_partition().position_sets();
            got.sort();
            let mut want: Vec<Vec<usize>> = expected.iter().map(|b| b.to_vec()).collect();
            want.sort();
            if got != want {
                return Ok(Some(format!("word {w}: partition {got:?}, want {want:?}")));
            }
            Ok(None)
        });
    }
}

fn fixture_local_maxima(run: &mut Run) {
    let fixtures: [(&[u32], &[usize]); 3] = [
        (&[1, 2, 3, 3, 3, 2, 1, 1, 2, 1, 2, 1], &[3, 4, 5, 9, 11]),
        (&[1, 1, 2, 3, 2, 3, 2, 2, 3, 2, 1, 1], &[1, 4, 6, 9, 12]),
        (&[1, 2, 3, 4, 3, 2, 3, 3, 4, 3, 2, 1], &[4, 7, 9]),
    ];
    for (letters, expected) in fixtures {
        run.case(|| {
            let w = MotzkinWord::new(letters.to_vec())?;
            let got = w.local_maxima();
            if got != expected {
                return Ok(Some(format!(
                    "word {w}: local maxima {got:?}, want {expected:?}"
                )));
            }
            Ok(None)
        });
    }
}

fn labels_of(names: &[&str]) -> Result<LabelTuple, Error> {
    LabelTuple::new(names.iter().map(|&s| Label::from(s)).collect())
}

fn fixture_adaptedness(run: &mut Run) {
    run.case(|| {
        let w = word(&[1, 2, 1]);
        if !w.is_adapted(&labels_of(&["A", "B", "A"])?)?.is_adapted() {
            return Ok(Some("word 121: A,B,A should be adapted".to_owned()));
        }
        let report = w.is_adapted(&labels_of(&["A", "B", "C"])?)?;
        if report.is_adapted() {
            return Ok(Some(
                "word 121: A,B,C breaks label constancy on {1,3}".to_owned(),
            ));
        }
        Ok(None)
    });
    run.case(|| {
        let w = word(&[1, 2, 3, 3, 3, 2, 1, 1, 2, 1, 2, 1]);
        let good = labels_of(&["A", "B", "C", "A", "C", "B", "A", "B", "A", "B", "A", "B"])?;
        if !w.is_adapted(&good)?.is_adapted() {
            return Ok(Some("worked example labels should be adapted".to_owned()));
        }
        // Position 4 now repeats the label of the enclosing block {2, 6}.
        let bad = labels_of(&["A", "B", "C", "B", "C", "B", "A", "B", "A", "B", "A", "B"])?;
        if w.is_adapted(&bad)?.is_adapted() {
            return Ok(Some(
                "nested repeat of the enclosing label should be rejected".to_owned(),
            ));
        }
        Ok(None)
    });
}

// ---------------------------------------------------------------------
// counting
// ---------------------------------------------------------------------

const TWO_MAXIMA: [u64; 13] = [0, 1, 0, 3, 1, 6, 3, 10, 6, 15, 10, 21, 15];

fn counting_suite(opts: &SuiteOptions) -> SuiteOutcome {
    let n_max = opts.n_max(13);
    let mut run = Run::new("counting");
    let motzkin = motzkin_numbers(n_max);
    for n in 1..=n_max {
        if run.failed() {
            break;
        }
        run.case(|| {
            let words = enumerate_words(n)?;
            if words.len() as u64 != motzkin[n - 1] {
                return Ok(Some(format!(
                    "length {n}: {} words, want Motzkin number {}",
                    words.len(),
                    motzkin[n - 1]
                )));
            }
            for pair in words.windows(2) {
                let a: Vec<u32> = (1..=n).map(|k| pair[0].letter(k)).collect();
                let b: Vec<u32> = (1..=n).map(|k| pair[1].letter(k)).collect();
                if a >= b {
                    return Ok(Some(format!(
                        "length {n}: enumeration not strictly lexicographic at {} >= {}",
                        pair[0], pair[1]
                    )));
                }
            }
            Ok(None)
        });
        run.case(|| {
            let mut total = 0u64;
            for k in 1..=n {
                total += count_by_local_maxima(n, k)?;
            }
            if total != motzkin[n - 1] {
                return Ok(Some(format!(
                    "length {n}: maxima counts sum to {total}, want {}",
                    motzkin[n - 1]
                )));
            }
            Ok(None)
        });
        run.case(|| {
            let got = count_by_local_maxima(n, 1)?;
            let want = u64::from(n % 2 == 1);
            if got != want {
                return Ok(Some(format!(
                    "length {n}: {got} words with one maximum, want {want}"
                )));
            }
            Ok(None)
        });
        run.case(|| {
            let got = count_by_local_maxima(n, 2)?;
            let m = (n as u64) / 2;
            let want = if n % 2 == 1 {
                binomial(m, 2)
            } else {
                binomial(m + 1, 2)
            };
            if got != want {
                return Ok(Some(format!(
                    "length {n}: {got} words with two maxima, want {want} by the closed form"
                )));
            }
            if n <= TWO_MAXIMA.len() && got != TWO_MAXIMA[n - 1] {
                return Ok(Some(format!(
                    "length {n}: {got} words with two maxima, want sequence entry {}",
                    TWO_MAXIMA[n - 1]
                )));
            }
            Ok(None)
        });
    }
    run.finish()
}

fn fixture_counting_sequence(run: &mut Run) {
    for n in 1..=TWO_MAXIMA.len() {
        run.case(|| {
            let got = count_by_local_maxima(n, 2)?;
            if got != TWO_MAXIMA[n - 1] {
                return Ok(Some(format!(
                    "length {n}: {got} words with two maxima, want {}",
                    TWO_MAXIMA[n - 1]
                )));
            }
            let one = count_by_local_maxima(n, 1)?;
            if one != u64::from(n % 2 == 1) {
                return Ok(Some(format!(
                    "length {n}: {one} words with one maximum, want {}",
                    u64::from(n % 2 == 1)
                )));
            }
            Ok(None)
        });
    }
}

// ---------------------------------------------------------------------
// oracle-free
// ---------------------------------------------------------------------

fn oracle_free_suite(opts: &SuiteOptions) -> SuiteOutcome {
    let n_max = opts.n_max(6).max(2);
    let cases = opts.cases(200);
    let mut run = Run::new("oracle-free");
    let mut gen = InstanceGen::new(opts.seed);
    let mut case = 0u64;
    while case < cases && !run.failed() {
        let ctx = gen.context(Mode::Free, 2, &NAMES, 2 * n_max);
        for _ in 0..10.min(cases - case) {
            let n = 2 + gen.pick(n_max - 1);
            let tuple = gen.tuple(&ctx, &NAMES, n, Centering::None);
            let idx = case;
            run.case(|| {
                let engine = product_moment(&ctx, &tuple)?.phi;
                let oracle = free_oracle(&ctx, tuple.factors())?;
                if engine != oracle {
                    return Ok(Some(format!(
                        "case {idx} (n = {n}): engine {engine:?}, recursion oracle {oracle:?}"
                    )));
                }
                let nc = nc_oracle(&ctx, tuple.factors())?;
                if nc != engine {
                    return Ok(Some(format!(
                        "case {idx} (n = {n}): engine {engine:?}, cumulant oracle {nc:?}"
                    )));
                }
                if idx.is_multiple_of(8) && n <= 5 {
                    let plain = free_oracle_unmemoized(&ctx, tuple.factors())?;
                    if plain != oracle {
                        return Ok(Some(format!(
                            "case {idx} (n = {n}): memoized {oracle:?}, unmemoized {plain:?}"
                        )));
                    }
                }
                Ok(None)
            });
            case += 1;
            if run.failed() {
                break;
            }
        }
    }
    run.finish()
}

// ---------------------------------------------------------------------
// pyramid
// ---------------------------------------------------------------------

fn pyramid_suite(opts: &SuiteOptions) -> SuiteOutcome {
    let n_max = opts.n_max(9);
    let cases = opts.cases(30);
    let mut run = Run::new("pyramid");
    let mut gen = InstanceGen::new(opts.seed);
    for idx in 0..cases {
        if run.failed() {
            break;
        }
        let ctx = gen.context(Mode::Free, 1, &NAMES, 2 * n_max);
        let n = 1 + gen.pick(n_max);
        let tuple = gen.tuple(&ctx, &NAMES, n, Centering::Phi);
        for w in &words_of(&mut run, n) {
            run.case(|| {
                let leibniz = motzkin_derivative_leibniz(&ctx, w, &tuple)?;
                let jet = motzkin_functional(&ctx, w, &tuple)?.derivative(1)?;
                let closed = motzkin_derivative_closed(&ctx, w, &tuple)?;
                if leibniz != jet {
                    return Ok(Some(format!(
                        "case {idx} word {w}: Leibniz {leibniz}, jet derivative {jet}"
                    )));
                }
                if leibniz != closed {
                    return Ok(Some(format!(
                        "case {idx} word {w}: Leibniz {leibniz}, closed form {closed}"
                    )));
                }
                if !w.classify().pyramid_compatible() && !leibniz.is_zero() {
                    return Ok(Some(format!(
                        "case {idx} word {w}: non-pyramid word has derivative {leibniz}"
                    )));
                }
                Ok(None)
            });
        }
        run.case(|| {
            let total = infinitesimal_moment(&ctx, &tuple)?;
            let by_leibniz = leibniz_free(&ctx, &tuple)?;
            let by_pairing = characteristic_free(&ctx, &tuple)?;
            if total != by_leibniz {
                return Ok(Some(format!(
                    "case {idx} (n = {n}): word sum {total}, product Leibniz {by_leibniz}"
                )));
            }
            if total != by_pairing {
                return Ok(Some(format!(
                    "case {idx} (n = {n}): word sum {total}, pairing form {by_pairing}"
                )));
            }
            if n <= 7 {
                let by_oracle = free_oracle(&ctx, tuple.factors())?.derivative(1)?;
                if total != by_oracle {
                    return Ok(Some(format!(
                        "case {idx} (n = {n}): word sum {total}, oracle jet {by_oracle}"
                    )));
                }
            }
            Ok(None)
        });
    }
    fixture_free_pyramid(&mut run, &mut gen);
    run.finish()
}

/// The mirrored five-factor pyramid: the derivative of the product
/// moment is `phi(a1 a5) phi(a2 a4) phi'(a3)` for centered factors.
fn fixture_free_pyramid(run: &mut Run, gen: &mut InstanceGen) {
    if run.failed() {
        return;
    }
    let labels: Vec<Label> = ["A", "B", "C", "B", "A"]
        .iter()
        .map(|&s| Label::from(s))
        .collect();
    let mut saw_nonzero = false;
    for _ in 0..50 {
        if run.failed() || saw_nonzero {
            break;
        }
        let ctx = gen.context(Mode::Free, 1, &NAMES, 10);
        let tuple = gen.tuple_with_labels(&ctx, &labels, Centering::Phi);
        let nonzero = &mut saw_nonzero;
        run.case(|| {
            let expected = pair_phi(&ctx, &tuple, 1, 5)?
                * pair_phi(&ctx, &tuple, 2, 4)?
                * phi_der(&ctx, tuple.factor(3))?;
            let total = infinitesimal_moment(&ctx, &tuple)?;
            let pairing = characteristic_free(&ctx, &tuple)?;
            if total != expected {
                return Ok(Some(format!(
                    "mirrored pyramid: word sum {total}, hand form {expected}"
                )));
            }
            if pairing != expected {
                return Ok(Some(format!(
                    "mirrored pyramid: pairing {pairing}, hand form {expected}"
                )));
            }
            if !expected.is_zero() {
                *nonzero = true;
            }
            Ok(None)
        });
    }
    if !saw_nonzero {
        run.fail("mirrored pyramid fixture: value stayed zero for 50 draws".to_owned());
    }
}

// ---------------------------------------------------------------------
// higher
// ---------------------------------------------------------------------

fn higher_suite(opts: &SuiteOptions) -> SuiteOutcome {
    let n_max = opts.n_max(8);
    let cases = opts.cases(24);
    let mut run = Run::new("higher");
    let mut gen = InstanceGen::new(opts.seed);
    for idx in 0..cases {
        if run.failed() {
            break;
        }
        let ctx = gen.context(Mode::Free, 3, &NAMES, 2 * n_max);
        let n = 1 + gen.pick(n_max);
        let m = 2 + gen.pick(2);
        let tuple = gen.tuple(&ctx, &NAMES, n, Centering::Phi);
        for w in &words_of(&mut run, n) {
            run.case(|| {
                let direct = motzkin_higher(&ctx, w, &tuple, m)?;
                let jet = motzkin_functional(&ctx, w, &tuple)?.derivative(m)?;
                if direct != jet {
                    return Ok(Some(format!(
                        "case {idx} word {w} order {m}: multinomial {direct}, jet {jet}"
                    )));
                }
                if w.local_maxima().len() > m && !direct.is_zero() {
                    return Ok(Some(format!(
                        "case {idx} word {w}: {} maxima but nonzero order-{m} derivative {direct}",
                        w.local_maxima().len()
                    )));
                }
                Ok(None)
            });
        }
        run.case(|| {
            let total = higher_moment(&ctx, &tuple, m)?;
            let pruned = higher_moment_centered(&ctx, &tuple, m)?;
            let jet = product_moment(&ctx, &tuple)?.phi.derivative(m)?;
            if total != pruned {
                return Ok(Some(format!(
                    "case {idx} (n = {n}, order {m}): full sum {total}, pruned sum {pruned}"
                )));
            }
            if total != jet {
                return Ok(Some(format!(
                    "case {idx} (n = {n}, order {m}): full sum {total}, product jet {jet}"
                )));
            }
            Ok(None)
        });
    }
    fixture_two_maxima_forms(&mut run, &mut gen);
    run.finish()
}

/// A two-maxima word with its two pair positions and two derivative
/// positions.
type TwoMaximaForm = (&'static [u32], [(usize, usize); 2], [usize; 2]);

/// The six length-six words with exactly two weak local maxima and
/// their second derivatives: twice the product of the two pair moments
/// and the two singleton derivatives.
fn fixture_two_maxima_forms(run: &mut Run, gen: &mut InstanceGen) {
    let forms: [TwoMaximaForm; 6] = [
        (&[1, 2, 3, 3, 2, 1], [(1, 6), (2, 5)], [3, 4]),
        (&[1, 1, 2, 3, 2, 1], [(2, 6), (3, 5)], [1, 4]),
        (&[1, 2, 3, 2, 1, 1], [(1, 5), (2, 4)], [3, 6]),
        (&[1, 2, 2, 3, 2, 1], [(1, 6), (3, 5)], [2, 4]),
        (&[1, 2, 3, 2, 2, 1], [(1, 6), (2, 4)], [3, 5]),
        (&[1, 2, 1, 1, 2, 1], [(1, 3), (4, 6)], [2, 5]),
    ];
    for (letters, pairs, derivs) in forms {
        if run.failed() {
            break;
        }
        let w = word(letters);
        let mut saw_nonzero = false;
        for checks in 0..30u32 {
            if run.failed() || (saw_nonzero && checks >= 3) {
                break;
            }
            let ctx = gen.context(Mode::Free, 2, &NAMES, 8);
            let labels = gen.adapted_labels(&w, &NAMES);
            let tuple = gen.tuple_with_labels(&ctx, &labels, Centering::Phi);
            let nonzero = &mut saw_nonzero;
            run.case(|| {
                let expected = rat(2)
                    * pair_phi(&ctx, &tuple, pairs[0].0, pairs[0].1)?
                    * pair_phi(&ctx, &tuple, pairs[1].0, pairs[1].1)?
                    * phi_der(&ctx, tuple.factor(derivs[0]))?
                    * phi_der(&ctx, tuple.factor(derivs[1]))?;
                let got = motzkin_higher(&ctx, &w, &tuple, 2)?;
                if got != expected {
                    return Ok(Some(format!(
                        "word {w}: second derivative {got}, hand form {expected}"
                    )));
                }
                if !expected.is_zero() {
                    *nonzero = true;
                }
                Ok(None)
            });
        }
        if !saw_nonzero {
            run.fail(format!(
                "two-maxima fixture {w}: value stayed zero for 30 draws"
            ));
        }
    }
}

// ---------------------------------------------------------------------
// boolean
// ---------------------------------------------------------------------

fn boolean_suite(opts: &SuiteOptions) -> SuiteOutcome {
    let n_max = opts.n_max(8);
    let cases = opts.cases(100);
    let mut run = Run::new("boolean");
    let mut gen = InstanceGen::new(opts.seed);
    let mut case = 0u64;
    while case < cases && !run.failed() {
        let ctx = gen.context(Mode::Free, 2, &NAMES, 4);
        for _ in 0..10.min(cases - case) {
            let n = 1 + gen.pick(n_max);
            let tuple = gen.tuple(&ctx, &NAMES, n, Centering::None);
            let idx = case;
            run.case(|| {
                let engine = boolean_moment(&ctx, &tuple)?;
                let oracle = boolean_oracle(&ctx, tuple.factors())?;
                if engine != oracle {
                    return Ok(Some(format!(
                        "case {idx} (n = {n}): engine {engine:?}, oracle {oracle:?}"
                    )));
                }
                let mut values = Vec::with_capacity(n);
                let mut derivs = Vec::with_capacity(n);
                for k in 1..=n {
                    values.push(phi_val(&ctx, tuple.factor(k))?);
                    derivs.push(phi_der(&ctx, tuple.factor(k))?);
                }
                let product: Rat = values.iter().fold(Rat::one(), |acc, v| acc * v.clone());
                if engine.value() != &product {
                    return Ok(Some(format!(
                        "case {idx} (n = {n}): moment {}, factored product {product}",
                        engine.value()
                    )));
                }
                let mut leibniz = Rat::zero();
                for (k, deriv) in derivs.iter().enumerate() {
                    let mut term = deriv.clone();
                    for (j, v) in values.iter().enumerate() {
                        if j != k {
                            term *= v.clone();
                        }
                    }
                    leibniz += term;
                }
                let got = engine.derivative(1)?;
                if got != leibniz {
                    return Ok(Some(format!(
                        "case {idx} (n = {n}): derivative {got}, Leibniz sum {leibniz}"
                    )));
                }
                Ok(None)
            });
            case += 1;
            if run.failed() {
                break;
            }
        }
    }
    fixture_boolean_slots(&mut run, &mut gen);
    run.finish()
}

/// Unit factors leave the product alone: with one centered slot between
/// units the derivative is the slot derivative, with two centered slots
/// it vanishes.
fn fixture_boolean_slots(run: &mut Run, gen: &mut InstanceGen) {
    if run.failed() {
        return;
    }
    let ctx = gen.context(Mode::Free, 1, &NAMES, 4);
    let raw_b = gen.element(&Label::from("B"));
    let raw_a = gen.element(&Label::from("A"));
    run.case(|| {
        let b = ctx.phi(&Label::from("B"))?.center(&raw_b)?;
        let tuple = FactorTuple::new(vec![
            Element::unit(Label::from("A")),
            b.clone(),
            Element::unit(Label::from("C")),
        ])?;
        let jet = boolean_moment(&ctx, &tuple)?;
        if !jet.value().is_zero() {
            return Ok(Some(format!(
                "unit-slot-unit: moment {} should vanish",
                jet.value()
            )));
        }
        let expected = phi_der(&ctx, &b)?;
        let got = jet.derivative(1)?;
        if got != expected {
            return Ok(Some(format!(
                "unit-slot-unit: derivative {got}, slot derivative {expected}"
            )));
        }
        Ok(None)
    });
    run.case(|| {
        let b = ctx.phi(&Label::from("B"))?.center(&raw_b)?;
        let a = ctx.phi(&Label::from("A"))?.center(&raw_a)?;
        let tuple = FactorTuple::new(vec![b, Element::unit(Label::from("C")), a])?;
        let jet = boolean_moment(&ctx, &tuple)?;
        if !jet.value().is_zero() || !jet.derivative(1)?.is_zero() {
            return Ok(Some(format!(
                "two centered slots: moment {} derivative {} should both vanish",
                jet.value(),
                jet.derivative(1)?
            )));
        }
        Ok(None)
    });
}

// ---------------------------------------------------------------------
// cfree-class
// ---------------------------------------------------------------------

fn cfree_class_suite(opts: &SuiteOptions) -> SuiteOutcome {
    let n_max = opts.n_max(8);
    let cases = opts.cases(30);
    let mut run = Run::new("cfree-class");
    let mut gen = InstanceGen::new(opts.seed);
    for idx in 0..cases {
        if run.failed() {
            break;
        }
        let ctx = gen.context(Mode::CFree, 2, &NAMES, 2 * n_max);
        let n = 1 + gen.pick(n_max);
        let tuple = gen.tuple(&ctx, &NAMES, n, Centering::Pattern);
        for w in &words_of(&mut run, n) {
            run.case(|| {
                let leibniz = motzkin_derivative_leibniz(&ctx, w, &tuple)?;
                let closed = motzkin_derivative_closed(&ctx, w, &tuple)?;
                let jet = motzkin_functional(&ctx, w, &tuple)?.derivative(1)?;
                if leibniz != closed {
                    return Ok(Some(format!(
                        "case {idx} word {w}: Leibniz {leibniz}, closed form {closed}"
                    )));
                }
                if leibniz != jet {
                    return Ok(Some(format!(
                        "case {idx} word {w}: Leibniz {leibniz}, jet derivative {jet}"
                    )));
                }
                if w.classify().kind == PathKind::Other && !leibniz.is_zero() {
                    return Ok(Some(format!(
                        "case {idx} word {w}: unclassified word has derivative {leibniz}"
                    )));
                }
                Ok(None)
            });
        }
    }
    fixture_cfree_trio(&mut run, &mut gen);
    run.finish()
}

/// The three five-letter shapes and their derivatives under pattern
/// centering: the flat word, the pyramid-then-flat word, and the full
/// pyramid.
fn fixture_cfree_trio(run: &mut Run, gen: &mut InstanceGen) {
    #[derive(Clone, Copy)]
    enum Shape {
        Flat,
        PyramidFlat,
        Pyramid,
    }
    let fixtures: [(&[u32], Shape); 3] = [
        (&[1, 1, 1, 1, 1], Shape::Flat),
        (&[1, 2, 1, 1, 1], Shape::PyramidFlat),
        (&[1, 2, 3, 2, 1], Shape::Pyramid),
    ];
    for (letters, shape) in fixtures {
        if run.failed() {
            break;
        }
        let w = word(letters);
        let mut saw_nonzero = false;
        for checks in 0..30u32 {
            if run.failed() || (saw_nonzero && checks >= 3) {
                break;
            }
            let ctx = gen.context(Mode::CFree, 2, &NAMES, 10);
            let labels = gen.adapted_labels(&w, &NAMES);
            let tuple = gen.tuple_with_labels(&ctx, &labels, Centering::Pattern);
            let nonzero = &mut saw_nonzero;
            run.case(|| {
                let expected = match shape {
                    Shape::Flat => {
                        let mut out = phi_der(&ctx, tuple.factor(1))?;
                        for k in 2..=5 {
                            out *= phi_val(&ctx, tuple.factor(k))?;
                        }
                        out
                    }
                    Shape::PyramidFlat => {
                        psi_der(&ctx, tuple.factor(2))?
                            * pair_phi(&ctx, &tuple, 1, 3)?
                            * phi_val(&ctx, tuple.factor(4))?
                            * phi_val(&ctx, tuple.factor(5))?
                    }
                    Shape::Pyramid => {
                        psi_der(&ctx, tuple.factor(3))?
                            * pair_phi(&ctx, &tuple, 1, 5)?
                            * pair_psi(&ctx, &tuple, 2, 4)?
                    }
                };
                let leibniz = motzkin_derivative_leibniz(&ctx, &w, &tuple)?;
                let closed = motzkin_derivative_closed(&ctx, &w, &tuple)?;
                if leibniz != expected {
                    return Ok(Some(format!(
                        "word {w}: Leibniz {leibniz}, hand form {expected}"
                    )));
                }
                if closed != expected {
                    return Ok(Some(format!(
                        "word {w}: closed form {closed}, hand form {expected}"
                    )));
                }
                if !expected.is_zero() {
                    *nonzero = true;
                }
                Ok(None)
            });
        }
        if !saw_nonzero {
            run.fail(format!(
                "five-letter fixture {w}: value stayed zero for 30 draws"
            ));
        }
    }
}

// ---------------------------------------------------------------------
// cfree-leibniz
// ---------------------------------------------------------------------

fn cfree_leibniz_suite(opts: &SuiteOptions) -> SuiteOutcome {
    let n_max = opts.n_max(7);
    let cases = opts.cases(30);
    let mut run = Run::new("cfree-leibniz");
    let mut gen = InstanceGen::new(opts.seed);
    for idx in 0..cases {
        if run.failed() {
            break;
        }
        let ctx = gen.context(Mode::CFree, 2, &NAMES, 2 * n_max);
        let n = 1 + gen.pick(n_max);
        let tuple = gen.tuple(&ctx, &NAMES, n, Centering::Pattern);
        run.case(|| {
            let total = infinitesimal_moment(&ctx, &tuple)?;
            let by_leibniz = cfree_leibniz(&ctx, &tuple)?;
            let by_closed = cfree_closed(&ctx, &tuple)?;
            let by_oracle = cfree_oracle(&ctx, tuple.factors())?.0.derivative(1)?;
            if total != by_leibniz {
                return Ok(Some(format!(
                    "case {idx} (n = {n}): word sum {total}, product Leibniz {by_leibniz}"
                )));
            }
            if total != by_closed {
                return Ok(Some(format!(
                    "case {idx} (n = {n}): word sum {total}, closed form {by_closed}"
                )));
            }
            if total != by_oracle {
                return Ok(Some(format!(
                    "case {idx} (n = {n}): word sum {total}, oracle jet {by_oracle}"
                )));
            }
            Ok(None)
        });
    }
    for idx in 0..cases / 3 {
        if run.failed() {
            break;
        }
        let ctx = gen.context_psi_equals_phi(2, &NAMES, 2 * n_max);
        let n = 1 + gen.pick(n_max);
        let tuple = gen.tuple(&ctx, &NAMES, n, Centering::Pattern);
        run.case(|| {
            let free_ctx = ctx.psi_projection()?;
            let moments = product_moment(&ctx, &tuple)?;
            let free_moment = product_moment(&free_ctx, &tuple)?.phi;
            if moments.phi != free_moment {
                return Ok(Some(format!(
                    "collapse case {idx} (n = {n}): conditional moment {:?}, free moment {free_moment:?}",
                    moments.phi
                )));
            }
            let conditional = infinitesimal_moment(&ctx, &tuple)?;
            let free = infinitesimal_moment(&free_ctx, &tuple)?;
            if conditional != free {
                return Ok(Some(format!(
                    "collapse case {idx} (n = {n}): conditional derivative {conditional}, free derivative {free}"
                )));
            }
            Ok(None)
        });
    }
    fixture_cfree_displays(&mut run, &mut gen);
    run.finish()
}

/// The short conditionally free expansions: the flat term plus the
/// label-gated pyramid windows, for three, four and five factors.
fn fixture_cfree_displays(run: &mut Run, gen: &mut InstanceGen) {
    let patterns: [&[&str]; 6] = [
        &["A", "B", "A"],
        &["A", "B", "C"],
        &["A", "B", "A", "B"],
        &["A", "B", "A", "C"],
        &["A", "B", "A", "B", "A"],
        &["A", "B", "C", "B", "A"],
    ];
    for pattern in patterns {
        if run.failed() {
            break;
        }
        let labels: Vec<Label> = pattern.iter().map(|&s| Label::from(s)).collect();
        let mut saw_nonzero = false;
        for checks in 0..30u32 {
            if run.failed() || (saw_nonzero && checks >= 3) {
                break;
            }
            let ctx = gen.context(Mode::CFree, 2, &NAMES, 10);
            let tuple = gen.tuple_with_labels(&ctx, &labels, Centering::Pattern);
            let nonzero = &mut saw_nonzero;
            run.case(|| {
                let expected = display_expansion(&ctx, &tuple)?;
                let total = infinitesimal_moment(&ctx, &tuple)?;
                let closed = cfree_closed(&ctx, &tuple)?;
                if total != expected {
                    return Ok(Some(format!(
                        "labels {pattern:?}: word sum {total}, display expansion {expected}"
                    )));
                }
                if closed != expected {
                    return Ok(Some(format!(
                        "labels {pattern:?}: closed form {closed}, display expansion {expected}"
                    )));
                }
                if !expected.is_zero() {
                    *nonzero = true;
                }
                Ok(None)
            });
        }
        if !saw_nonzero {
            run.fail(format!(
                "display fixture {pattern:?}: value stayed zero for 30 draws"
            ));
        }
    }
}

/// Assembles the expansion by hand: the flat term, then for every
/// window length `2m - 1 <= n` whose labels mirror, the pyramid term
/// followed by the flat tail.
fn display_expansion(ctx: &SpecContext<Rat>, tuple: &FactorTuple<Rat>) -> Result<Rat, Error> {
    let n = tuple.len();
    let mut total = phi_der(ctx, tuple.factor(1))?;
    for k in 2..=n {
        total *= phi_val(ctx, tuple.factor(k))?;
    }
    for m in 2..=n.div_ceil(2) {
        let end = 2 * m - 1;
        if (1..m).any(|k| tuple.label(k) != tuple.label(end + 1 - k)) {
            continue;
        }
        let mut term = psi_der(ctx, tuple.factor(m))? * pair_phi(ctx, tuple, 1, end)?;
        for k in 2..m {
            term *= pair_psi(ctx, tuple, k, end + 1 - k)?;
        }
        for k in end + 1..=n {
            term *= phi_val(ctx, tuple.factor(k))?;
        }
        total += term;
    }
    Ok(total)
}

// ---------------------------------------------------------------------
// paper-examples
// ---------------------------------------------------------------------

fn paper_examples_suite(opts: &SuiteOptions) -> SuiteOutcome {
    let mut run = Run::new("paper-examples");
    let mut gen = InstanceGen::new(opts.seed);
    fixture_worked_partitions(&mut run);
    fixture_local_maxima(&mut run);
    fixture_adaptedness(&mut run);
    fixture_counting_sequence(&mut run);
    fixture_free_pyramid(&mut run, &mut gen);
    fixture_two_maxima_forms(&mut run, &mut gen);
    fixture_cfree_trio(&mut run, &mut gen);
    fixture_cfree_displays(&mut run, &mut gen);
    fixture_semicircle(&mut run);
    run.finish()
}

fn semicircle_ctx() -> Result<SpecContext<Rat>, Error> {
    let mut algebras = Vec::new();
    for name in ["A", "B"] {
        let table = TableBuilder::new(Label::from(name), FunctionalKind::Phi, 0)
            .law(Gen::from("x"), Law::Semicircle { variance: rat(1) })
            .build()?;
        algebras.push((
            Label::from(name),
            AlgebraSpec::new([Gen::from("x")], table, None),
        ));
    }
    SpecContext::new(Mode::Free, 0, algebras)
}

/// Free products of two standard semicircles: mixed moments vanish on
/// alternating odd patterns, and the sum is the semicircle of variance
/// two.
fn fixture_semicircle(run: &mut Run) {
    let s = Element::generator(Label::from("A"), Gen::from("x"));
    let t = Element::generator(Label::from("B"), Gen::from("x"));
    run.case(|| {
        let ctx = semicircle_ctx()?;
        let tuple = normalize_alternating(vec![s.clone(), t.mul(&t)?, s.clone()])?;
        let got = product_moment(&ctx, &tuple)?.phi.value().clone();
        if got != rat(1) {
            return Ok(Some(format!("phi(s t t s) = {got}, want 1")));
        }
        Ok(None)
    });
    run.case(|| {
        let ctx = semicircle_ctx()?;
        let tuple = normalize_alternating(vec![s.clone(), t.clone(), s.clone(), t.clone()])?;
        let got = product_moment(&ctx, &tuple)?.phi.value().clone();
        if !got.is_zero() {
            return Ok(Some(format!("phi(s t s t) = {got}, want 0")));
        }
        Ok(None)
    });
    let sum_moments = [0i64, 2, 0, 8, 0, 40];
    for (k, want) in (1..=sum_moments.len()).zip(sum_moments) {
        run.case(|| {
            let ctx = semicircle_ctx()?;
            let mut total = Rat::zero();
            for mask in 0u32..(1 << k) {
                let factors: Vec<Element<Rat>> = (0..k)
                    .map(|i| {
                        if mask >> i & 1 == 0 {
                            s.clone()
                        } else {
                            t.clone()
                        }
                    })
                    .collect();
                let tuple = normalize_alternating(factors)?;
                total += product_moment(&ctx, &tuple)?.phi.value().clone();
            }
            if total != rat(want) {
                return Ok(Some(format!(
                    "phi((s + t)^{k}) = {total}, want {want} from the variance-two semicircle"
                )));
            }
            Ok(None)
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(n_max: Option<usize>, cases: Option<u64>, seed: u64) -> SuiteOptions {
        SuiteOptions { n_max, cases, seed }
    }

    #[test]
    fn unknown_suites_are_usage_errors() {
        let err = run_suite("nonsense", &opts(None, None, 0)).unwrap_err();
        assert!(matches!(err, CliError::Usage(_)));
    }

    #[test]
    fn counting_passes_on_a_small_range() {
        let outcomes = run_suite("counting", &opts(Some(7), None, 0)).unwrap();
        assert_eq!(outcomes.len(), 1);
        assert!(outcomes[0].passed, "{:?}", outcomes[0].counterexample);
        assert!(outcomes[0].cases > 0);
    }

    #[test]
    fn partitions_pass_on_a_small_range() {
        let outcomes = run_suite("partitions", &opts(Some(6), None, 3)).unwrap();
        assert!(outcomes[0].passed, "{:?}", outcomes[0].counterexample);
    }

    #[test]
    fn oracle_suite_passes_with_few_cases() {
        let outcomes = run_suite("oracle-free", &opts(Some(4), Some(12), 5)).unwrap();
        assert!(outcomes[0].passed, "{:?}", outcomes[0].counterexample);
        assert_eq!(outcomes[0].cases, 12);
    }

    #[test]
    fn motzkin_number_table_is_correct() {
        assert_eq!(
            motzkin_numbers(11),
            vec![1, 1, 2, 4, 9, 21, 51, 127, 323, 835, 2188]
        );
    }

    #[test]
    fn binomials_are_correct() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(4, 0), 1);
        assert_eq!(binomial(3, 4), 0);
    }
}
