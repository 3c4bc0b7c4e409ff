//! `verify-suite`: the randomized law suites on one algebroid.

use std::path::Path;

use defq_core::algebroid::{parse_model_file, AlgebroidModel};
use defq_core::formal::Poly;
use defq_core::suites::{run_all, Fault};
use serde_json::json;

use crate::{read, CliError, Report, EXIT_OK, EXIT_PROPERTY};

/// The tangent algebroid of the plane.
pub fn default_model() -> AlgebroidModel<Poly> {
    AlgebroidModel::tangent(Poly::zero(&["x", "y"]))
}

pub fn run(model: Option<&Path>, trials: usize, seed: u64, order: usize, inject_fault: bool) -> Result<Report, CliError> {
    let algebroid = match model {
        Some(p) => parse_model_file(&read(p)?).map_err(|e| CliError::from(e).in_file(p))?,
        None => default_model(),
    };
    let fault = if inject_fault { Fault::Sign } else { Fault::None };
    let rep = run_all(&algebroid, trials, order, seed, fault);
    let code = if rep.passed() { EXIT_OK } else { EXIT_PROPERTY };
    let mut text = rep.to_string();
    text.push_str(if rep.passed() { "all suites passed\n" } else { "suites FAILED\n" });
    let outcomes: Vec<_> = rep
        .outcomes
        .iter()
        .map(|o| {
            json!({
                "suite": o.suite,
                "model": o.model,
                "trials": o.trials,
                "checks": o.checks,
                "passed": o.passed(),
                "witness": o.failure.as_ref().map(|w| json!({
                    "law": w.law,
                    "trial": w.trial,
                    "inputs": w.inputs.iter().map(|(n, v)| json!({ "name": n, "value": v })).collect::<Vec<_>>(),
                    "detail": w.detail,
                })),
            })
        })
        .collect();
    let fields = json!({
        "seed": seed,
        "order": order,
        "trials": trials,
        "fault": if inject_fault { "sign" } else { "none" },
        "outcomes": outcomes,
    });
    Ok(Report::new("verify-suite", text, fields, code))
}
