//! Problem documents: the JSON input format for `eval` and its
//! validation into a context plus query list.
//!
//! Rationals are strings (`"p/q"` or an integer string), never floats,
//! and are normalized on echo. Moments are keyed by generator words with
//! `.` between generators; the empty string is the unit monomial.

use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;

use infmot::ncalg::{
    AlgebraSpec, Element, FunctionalKind, Gen, Law, Mode, Monomial, SpecContext, TableBuilder,
};
use infmot::{Label, Rat};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDocument {
    pub mode: String,
    pub jet_order: usize,
    pub algebras: Vec<AlgebraDoc>,
    pub queries: Vec<QueryDoc>,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDoc {
    pub label: String,
    pub generators: Vec<String>,
    pub phi: TableDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi: Option<TableDoc>,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub law: Option<LawDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub moments: BTreeMap<String, String>,
    /// Per-monomial jet coefficients above order 0, keyed by the
    /// derivative order as a decimal string.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub derivatives: BTreeMap<String, BTreeMap<String, String>>,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LawDoc {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub param: Option<String>,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QueryDoc {
    pub factors: Vec<FactorDoc>,
    pub compute: Vec<String>,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorDoc {
    pub label: String,
    pub poly: Vec<TermDoc>,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub coeff: String,
    pub word: String,
}

/// One requested output of a query.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ComputeRequest {
    Moment,
    Derivative(usize),
}

#[derive(Clone, Debug)]
pub struct CompiledQuery {
    pub factors: Vec<Element<Rat>>,
    pub compute: Vec<ComputeRequest>,
}

/// A validated problem: the normalized document for echoing, the
/// context, and the compiled queries.
#[derive(Clone, Debug)]
pub struct CompiledProblem {
    pub document: ProblemDocument,
    pub ctx: SpecContext<Rat>,
    pub queries: Vec<CompiledQuery>,
}

pub fn parse_problem(text: &str) -> Result<CompiledProblem, CliError> {
    let document: ProblemDocument = serde_json::from_str(text)?;
    compile(document)
}

fn parse_rat(text: &str, path: &str) -> Result<Rat, CliError> {
    Rat::from_str(text.trim())
        .map_err(|e| CliError::schema(path, format!("bad rational {text:?}: {e}")))
}

fn parse_word(text: &str, generators: &BTreeSet<String>, path: &str) -> Result<Monomial, CliError> {
    if text.is_empty() {
        return Ok(Monomial::unit());
    }
    let mut gens = Vec::new();
    for part in text.split('.') {
        if part.is_empty() {
            return Err(CliError::schema(
                path,
                format!("empty generator in {text:?}"),
            ));
        }
        if !generators.contains(part) {
            return Err(CliError::schema(
                path,
                format!("generator {part:?} is not declared"),
            ));
        }
        gens.push(Gen::from(part));
    }
    Ok(Monomial::new(gens))
}

fn compile_table(
    doc: &TableDoc,
    label: &Label,
    kind: FunctionalKind,
    order: usize,
    generators: &BTreeSet<String>,
    path: &str,
) -> Result<infmot::ncalg::FunctionalTable<Rat>, CliError> {
    let mut builder = TableBuilder::new(label.clone(), kind, order);
    if let Some(law) = &doc.law {
        if generators.len() != 1 {
            return Err(CliError::schema(
                format!("{path}.law"),
                "laws require exactly one generator",
            ));
        }
        let param = law
            .param
            .as_deref()
            .map(|p| parse_rat(p, &format!("{path}.law.param")))
            .transpose()?;
        let gen = generators.iter().next().expect("checked nonempty");
        builder = builder.law(Gen::from(gen.as_str()), Law::by_name(&law.name, param)?);
    } else if doc.moments.is_empty() {
        return Err(CliError::schema(path, "needs a law or explicit moments"));
    }
    for (word, value) in &doc.moments {
        let entry_path = format!("{path}.moments[{word:?}]");
        let monomial = parse_word(word, generators, &entry_path)?;
        builder = builder.moment(monomial, parse_rat(value, &entry_path)?);
    }
    for (word, orders) in &doc.derivatives {
        let entry_path = format!("{path}.derivatives[{word:?}]");
        let monomial = parse_word(word, generators, &entry_path)?;
        for (order_key, value) in orders {
            let k: usize = order_key.parse().map_err(|_| {
                CliError::schema(&entry_path, format!("bad derivative order {order_key:?}"))
            })?;
            builder = builder.derivative(monomial.clone(), k, parse_rat(value, &entry_path)?);
        }
    }
    Ok(builder.build()?)
}

fn normalize_table(doc: &TableDoc, path: &str) -> Result<TableDoc, CliError> {
    let mut normalized = doc.clone();
    if let Some(law) = &mut normalized.law {
        if let Some(param) = &law.param {
            law.param = Some(parse_rat(param, &format!("{path}.law.param"))?.to_string());
        }
    }
    for (word, value) in &doc.moments {
        let entry_path = format!("{path}.moments[{word:?}]");
        normalized
            .moments
            .insert(word.clone(), parse_rat(value, &entry_path)?.to_string());
    }
    for (word, orders) in &doc.derivatives {
        let entry_path = format!("{path}.derivatives[{word:?}]");
        let normalized_orders = normalized
            .derivatives
            .get_mut(word)
            .expect("cloned map has the same keys");
        for (order_key, value) in orders {
            normalized_orders.insert(
                order_key.clone(),
                parse_rat(value, &entry_path)?.to_string(),
            );
        }
    }
    Ok(normalized)
}

pub fn compile(document: ProblemDocument) -> Result<CompiledProblem, CliError> {
    let mode = match document.mode.as_str() {
        "free" => Mode::Free,
        "cfree" => Mode::CFree,
        other => {
            return Err(CliError::schema(
                "mode",
                format!("expected \"free\" or \"cfree\", got {other:?}"),
            ))
        }
    };
    if document.algebras.is_empty() {
        return Err(CliError::schema(
            "algebras",
            "at least one algebra required",
        ));
    }

    let mut normalized = document.clone();
    let mut algebras = Vec::new();
    let mut seen = BTreeSet::new();
    let mut generators_of: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for (index, algebra) in document.algebras.iter().enumerate() {
        let path = format!("algebras[{index}]");
        if !seen.insert(algebra.label.clone()) {
            return Err(CliError::DuplicateLabel(algebra.label.clone()));
        }
        if algebra.generators.is_empty() {
            return Err(CliError::schema(
                format!("{path}.generators"),
                "at least one generator required",
            ));
        }
        let generators: BTreeSet<String> = algebra.generators.iter().cloned().collect();
        if generators.len() != algebra.generators.len() {
            return Err(CliError::schema(
                format!("{path}.generators"),
                "generators must be distinct",
            ));
        }
        let label = Label::from(algebra.label.as_str());
        let phi = compile_table(
            &algebra.phi,
            &label,
            FunctionalKind::Phi,
            document.jet_order,
            &generators,
            &format!("{path}.phi"),
        )?;
        normalized.algebras[index].phi = normalize_table(&algebra.phi, &format!("{path}.phi"))?;
        let psi = match (&algebra.psi, mode) {
            (None, Mode::CFree) => {
                return Err(CliError::schema(
                    format!("{path}.psi"),
                    "required in cfree mode",
                ))
            }
            (None, Mode::Free) => None,
            (Some(psi_doc), _) => {
                normalized.algebras[index].psi =
                    Some(normalize_table(psi_doc, &format!("{path}.psi"))?);
                Some(compile_table(
                    psi_doc,
                    &label,
                    FunctionalKind::Psi,
                    document.jet_order,
                    &generators,
                    &format!("{path}.psi"),
                )?)
            }
        };
        generators_of.insert(algebra.label.clone(), generators.clone());
        algebras.push((
            label,
            AlgebraSpec::new(generators.iter().map(|g| Gen::from(g.as_str())), phi, psi),
        ));
    }

    let ctx = SpecContext::new(mode, document.jet_order, algebras)?;

    let mut queries = Vec::new();
    for (qi, query) in document.queries.iter().enumerate() {
        let path = format!("queries[{qi}]");
        if query.factors.is_empty() {
            return Err(CliError::schema(
                format!("{path}.factors"),
                "at least one factor required",
            ));
        }
        let mut factors = Vec::new();
        for (fi, factor) in query.factors.iter().enumerate() {
            let factor_path = format!("{path}.factors[{fi}]");
            let generators = generators_of.get(&factor.label).ok_or_else(|| {
                CliError::schema(
                    format!("{factor_path}.label"),
                    format!("algebra {:?} is not declared", factor.label),
                )
            })?;
            let mut terms = Vec::new();
            for (ti, term) in factor.poly.iter().enumerate() {
                let term_path = format!("{factor_path}.poly[{ti}]");
                let monomial = parse_word(&term.word, generators, &term_path)?;
                let coeff = parse_rat(&term.coeff, &term_path)?;
                normalized.queries[qi].factors[fi].poly[ti].coeff = coeff.to_string();
                terms.push((monomial, coeff));
            }
            factors.push(Element::from_terms(
                Label::from(factor.label.as_str()),
                terms,
            ));
        }
        let mut compute = Vec::new();
        for (ci, request) in query.compute.iter().enumerate() {
            let request_path = format!("{path}.compute[{ci}]");
            if request == "moment" {
                compute.push(ComputeRequest::Moment);
            } else if let Some(order_text) = request.strip_prefix("derivative:") {
                let m: usize = order_text.parse().map_err(|_| {
                    CliError::schema(
                        &request_path,
                        format!("bad derivative order {order_text:?}"),
                    )
                })?;
                if m == 0 || m > document.jet_order {
                    return Err(CliError::schema(
                        &request_path,
                        format!("derivative order {m} outside 1..={}", document.jet_order),
                    ));
                }
                compute.push(ComputeRequest::Derivative(m));
            } else {
                return Err(CliError::schema(
                    &request_path,
                    format!("expected \"moment\" or \"derivative:m\", got {request:?}"),
                ));
            }
        }
        queries.push(CompiledQuery { factors, compute });
    }

    Ok(CompiledProblem {
        document: normalized,
        ctx,
        queries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal() -> String {
        r#"{
            "mode": "free",
            "jet_order": 1,
            "algebras": [
                {
                    "label": "A",
                    "generators": ["x"],
                    "phi": {"law": {"name": "semicircle", "param": "1"}}
                }
            ],
            "queries": [
                {
                    "factors": [{"label": "A", "poly": [{"coeff": "2/4", "word": "x.x"}]}],
                    "compute": ["moment", "derivative:1"]
                }
            ]
        }"#
        .to_owned()
    }

    #[test]
    fn minimal_document_parses() {
        let problem = parse_problem(&minimal()).unwrap();
        assert_eq!(problem.queries.len(), 1);
        assert_eq!(problem.queries[0].compute.len(), 2);
    }

    #[test]
    fn rationals_normalize_on_echo() {
        let problem = parse_problem(&minimal()).unwrap();
        assert_eq!(problem.document.queries[0].factors[0].poly[0].coeff, "1/2");
    }

    #[test]
    fn cfree_mode_requires_psi() {
        let text = minimal().replace("\"free\"", "\"cfree\"");
        match parse_problem(&text) {
            Err(CliError::Schema { path, .. }) => assert_eq!(path, "algebras[0].psi"),
            other => panic!("expected schema error, got {other:?}"),
        }
    }

    #[test]
    fn undeclared_generators_are_rejected() {
        let text = minimal().replace("x.x", "x.y");
        match parse_problem(&text) {
            Err(CliError::Schema { path, .. }) => {
                assert_eq!(path, "queries[0].factors[0].poly[0]")
            }
            other => panic!("expected schema error, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_labels_are_rejected() {
        let document: ProblemDocument = serde_json::from_str(&minimal()).unwrap();
        let mut duplicated = document.clone();
        duplicated.algebras.push(document.algebras[0].clone());
        assert!(matches!(
            compile(duplicated),
            Err(CliError::DuplicateLabel(_))
        ));
    }

    #[test]
    fn unknown_laws_are_reported() {
        let text = minimal().replace("semicircle", "cauchy");
        assert!(matches!(
            parse_problem(&text),
            Err(CliError::Core(infmot::Error::UnknownLaw { .. }))
        ));
    }

    #[test]
    fn derivative_orders_beyond_the_jet_are_rejected() {
        let text = minimal().replace("derivative:1", "derivative:2");
        match parse_problem(&text) {
            Err(CliError::Schema { path, .. }) => assert_eq!(path, "queries[0].compute[1]"),
            other => panic!("expected schema error, got {other:?}"),
        }
    }

    #[test]
    fn malformed_json_is_a_syntax_error() {
        assert!(matches!(
            parse_problem("{not json"),
            Err(CliError::Syntax(_))
        ));
    }
}
