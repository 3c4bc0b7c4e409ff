//! `check-mc`: the Maurer-Cartan residual of an element file.
//!
//! ```text
//! model polydiff x y
//! order 3
//! pi : [x | y] h
//! pi : [y | x] -h        # several lines add up
//! ```

use std::path::Path;

use defq_core::dgla::{mc_residual, GradedElement};
use defq_core::error::Error;
use defq_core::formal::{Poly, RatFunc};
use defq_core::notation::{parse_element, ElementNotation};
use defq_core::simplicial::LinearDgla;
use serde_json::json;

use crate::model::{ModelJob, ModelSpec};
use crate::{base_dir, read, CliError, Report, EXIT_OK, EXIT_PROPERTY};

pub const DEFAULT_ORDER: usize = 3;

/// An element file: its model, optional order, and `pi` lines with their
/// line numbers.
pub struct ElementFile {
    pub model: ModelSpec,
    pub order: Option<usize>,
    pub terms: Vec<(usize, String)>,
}

pub fn parse_element_file(src: &str, base: &Path) -> Result<ElementFile, CliError> {
    let mut model = None;
    let mut order = None;
    let mut terms = Vec::new();
    for (k, raw) in src.lines().enumerate() {
        let line = k + 1;
        let text = raw.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        let (kw, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
        match kw {
            "model" => model = Some(ModelSpec::parse(rest, base, line)?),
            "order" => {
                order = Some(rest.trim().parse().map_err(|_| CliError::parse(line, format!("bad order '{rest}'")))?)
            }
            "pi" => {
                let expr = rest
                    .trim()
                    .strip_prefix(':')
                    .ok_or_else(|| CliError::parse(line, "expected 'pi : <element>'"))?;
                terms.push((line, expr.trim().to_string()));
            }
            other => return Err(CliError::parse(line, format!("unknown keyword '{other}'"))),
        }
    }
    let model = model.ok_or_else(|| CliError::parse(0, "missing 'model' line"))?;
    Ok(ElementFile { model, order, terms })
}

pub(crate) fn at_line(e: Error, line: usize) -> Error {
    match e {
        Error::Parse { line: 0, message } => Error::Parse { line, message },
        other => other,
    }
}

/// `[basis] coeff; ..` for one `h`-coefficient, or `0`.
pub(crate) fn coefficient_text<D: ElementNotation>(model: &D, x: &D::Elem) -> String {
    let terms = model.split_terms(x);
    if terms.is_empty() {
        return "0".into();
    }
    terms.iter().map(|(b, c)| format!("[{b}] {c}")).collect::<Vec<_>>().join("; ")
}

pub(crate) fn sum_terms<D: ElementNotation>(
    model: &D,
    terms: &[(usize, String)],
    degree: i32,
    order: usize,
) -> Result<GradedElement<D>, CliError> {
    let mut total = GradedElement::zero(model, degree, order);
    for (line, src) in terms {
        total = total.add(&parse_element(model, src, degree, order).map_err(|e| at_line(e, *line))?);
    }
    Ok(total)
}

struct Residual {
    name: String,
    coefficients: Vec<String>,
    first_nonzero: Option<usize>,
}

struct CheckJob<'a> {
    terms: &'a [(usize, String)],
    order: usize,
}

impl ModelJob for CheckJob<'_> {
    type Output = Residual;
    fn run<D: LinearDgla + ElementNotation>(self, model: &D) -> Result<Residual, CliError> {
        let pi = sum_terms(model, self.terms, 1, self.order)?;
        let r = mc_residual(model, &pi)?;
        Ok(Residual {
            name: model.name(),
            coefficients: (0..=self.order).map(|k| coefficient_text(model, r.coeff(k))).collect(),
            first_nonzero: r.valuation(),
        })
    }
}

fn needs_fractions(e: &CliError) -> bool {
    matches!(e, CliError::Core(Error::Parse { message, .. }) if message.contains("cannot invert"))
}

/// Runs a job over polynomial coefficients, or rational functions when
/// the input has denominators.
pub(crate) fn dispatch_any<J: ModelJob + Clone>(model: &ModelSpec, job: J) -> Result<J::Output, CliError> {
    match model.dispatch::<Poly, J>(job.clone()) {
        Err(e) if needs_fractions(&e) => model.dispatch::<RatFunc, J>(job),
        other => other,
    }
}

impl Clone for CheckJob<'_> {
    fn clone(&self) -> Self {
        CheckJob { terms: self.terms, order: self.order }
    }
}

pub fn run(file: &Path, order: Option<usize>) -> Result<Report, CliError> {
    let src = read(file)?;
    let parsed = parse_element_file(&src, &base_dir(file)).map_err(|e| e.in_file(file))?;
    let order = order.or(parsed.order).unwrap_or(DEFAULT_ORDER);
    let res = dispatch_any(&parsed.model, CheckJob { terms: &parsed.terms, order }).map_err(|e| e.in_file(file))?;

    let mut text = format!("model {}\norder {order}\n", parsed.model.describe());
    for (k, c) in res.coefficients.iter().enumerate() {
        text.push_str(&format!("h^{k}  {c}\n"));
    }
    let code = match res.first_nonzero {
        None => {
            text.push_str(&format!("residual 0 through h^{order}\n"));
            EXIT_OK
        }
        Some(k) => {
            text.push_str(&format!("residual nonzero at h^{k}\n"));
            EXIT_PROPERTY
        }
    };
    let residual: Vec<_> =
        res.coefficients.iter().enumerate().map(|(k, c)| json!({ "order": k, "value": c })).collect();
    let fields = json!({
        "model": parsed.model.describe(),
        "dgla": res.name,
        "order": order,
        "residual": residual,
        "mc": res.first_nonzero.is_none(),
        "first_nonzero": res.first_nonzero,
    });
    Ok(Report::new("check-mc", text, fields, code))
}
