//! Evaluation of compiled problems and deterministic report rendering.
//!
//! Reports are byte-identical across runs for a fixed document, seed,
//! and flag set: all maps are ordered, and wall-clock timing goes to
//! stderr rather than into the report.

use std::collections::BTreeMap;

use infmot::ncalg::{Jet, Mode};
use infmot::products::{
    higher_moment, infinitesimal_moment, normalize_alternating, product_moment,
};
use infmot::Rat;
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::problem::{CompiledProblem, ComputeRequest, ProblemDocument};

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct MomentReport {
    pub phi: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi: Option<Vec<String>>,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct QueryReport {
    pub query: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moment: Option<MomentReport>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub derivatives: BTreeMap<String, String>,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct EvalReport {
    pub mode: String,
    pub jet_order: usize,
    pub problem: ProblemDocument,
    pub results: Vec<QueryReport>,
}

fn jet_strings(jet: &Jet<Rat>) -> Vec<String> {
    jet.coeffs().iter().map(Rat::to_string).collect()
}

/// Runs every query of the problem and assembles the report.
pub fn evaluate_problem(problem: &CompiledProblem) -> Result<EvalReport, CliError> {
    let mut results = Vec::new();
    for (index, query) in problem.queries.iter().enumerate() {
        let tuple = normalize_alternating(query.factors.clone())?;
        let mut report = QueryReport {
            query: index,
            moment: None,
            derivatives: BTreeMap::new(),
        };
        for request in &query.compute {
            match request {
                ComputeRequest::Moment => {
                    let moment = product_moment(&problem.ctx, &tuple)?;
                    report.moment = Some(MomentReport {
                        phi: jet_strings(&moment.phi),
                        psi: moment.psi.as_ref().map(jet_strings),
                    });
                }
                ComputeRequest::Derivative(m) => {
                    let value = if *m == 1 {
                        infinitesimal_moment(&problem.ctx, &tuple)?
                    } else {
                        higher_moment(&problem.ctx, &tuple, *m)?
                    };
                    report.derivatives.insert(m.to_string(), value.to_string());
                }
            }
        }
        results.push(report);
    }
    Ok(EvalReport {
        mode: problem.ctx.mode().name().to_owned(),
        jet_order: problem.ctx.order(),
        problem: problem.document.clone(),
        results,
    })
}

pub fn render_json<T: Serialize>(report: &T) -> String {
    let mut text = serde_json::to_string_pretty(report).expect("reports serialize");
    text.push('\n');
    text
}

/// Flattens the results to CSV: one row per computed quantity, one
/// column per jet coefficient. Scalar results occupy the first
/// coefficient column.
pub fn render_csv(report: &EvalReport) -> String {
    let order = report.jet_order;
    let mut out = String::from("query,result");
    for k in 0..=order {
        out.push_str(&format!(",c{k}"));
    }
    out.push('\n');
    for result in &report.results {
        if let Some(moment) = &result.moment {
            push_row(&mut out, result.query, "moment_phi", &moment.phi, order);
            if let Some(psi) = &moment.psi {
                push_row(&mut out, result.query, "moment_psi", psi, order);
            }
        }
        for (m, value) in &result.derivatives {
            push_row(
                &mut out,
                result.query,
                &format!("derivative:{m}"),
                std::slice::from_ref(value),
                order,
            );
        }
    }
    out
}

fn push_row(out: &mut String, query: usize, kind: &str, values: &[String], order: usize) {
    out.push_str(&format!("{query},{kind}"));
    for k in 0..=order {
        out.push(',');
        if let Some(value) = values.get(k) {
            out.push_str(value);
        }
    }
    out.push('\n');
}

/// Verdict of one verification suite.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct SuiteOutcome {
    pub suite: String,
    pub cases: u64,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub suites: Vec<SuiteOutcome>,
    pub passed: bool,
}

impl VerifyReport {
    pub fn new(seed: u64, suites: Vec<SuiteOutcome>) -> Self {
        let passed = suites.iter().all(|s| s.passed);
        VerifyReport {
            seed,
            suites,
            passed,
        }
    }
}

/// Whether the problem's mode admits a second-state side in reports.
pub fn has_psi_side(problem: &CompiledProblem) -> bool {
    problem.ctx.mode() == Mode::CFree
}
