//! `normalize`: a weak Maurer-Cartan triple brought to `(Π', 1, 1)`.

use std::path::Path;

use defq_core::error::{Error, OracleFailure};
use defq_core::notation::ElementNotation;
use defq_core::simplicial::{cech_build, parse_cover_file, CosimplicialCech, Cover, LinearDgla, SplittingOracle};
use defq_core::weak_mc::{
    compose_chain, file_header, format_equivalence, format_weak_mc, normalize_acyclic, parse_weak_mc_file,
    weak_equiv_apply, weak_mc_check, WeakMCReport,
};
use serde_json::{json, Value};

use crate::check::{dispatch_any, DEFAULT_ORDER};
use crate::model::{ModelJob, ModelSpec};
use crate::{base_dir, read, CliError, Report, EXIT_OK, EXIT_ORACLE, EXIT_PROPERTY};

/// Levels kept in the cosimplicial object; the tetrahedron condition lives
/// on 4-fold intersections.
const MAX_LEVEL: usize = 3;

struct Normalized {
    normal: String,
    chain: Vec<String>,
    composite: String,
    reproduces: bool,
    is_normal: bool,
    recheck: WeakMCReport,
}

enum Outcome {
    InputFails(WeakMCReport),
    Oracle(WeakMCReport, OracleFailure),
    Done(WeakMCReport, Normalized),
}

#[derive(Clone)]
struct NormalizeJob<'a> {
    src: &'a str,
    cech: &'a CosimplicialCech,
    oracle: SplittingOracle,
    order: usize,
}

impl ModelJob for NormalizeJob<'_> {
    type Output = Outcome;
    fn run<D: LinearDgla + ElementNotation>(self, model: &D) -> Result<Outcome, CliError> {
        let w = parse_weak_mc_file(model, self.cech.cover().shape(), self.src, self.order)?.triple;
        let input = weak_mc_check(model, self.cech, &w)?;
        if !input.passed() {
            return Ok(Outcome::InputFails(input));
        }
        let n = match normalize_acyclic(model, self.cech, &w, self.oracle) {
            Ok(n) => n,
            Err(Error::Oracle(f)) => return Ok(Outcome::Oracle(input, f)),
            Err(e) => return Err(e.into()),
        };
        let composite = compose_chain(model, &w, &n.chain)?;
        let reproduces = weak_equiv_apply(model, &composite, &w)? == n.normal;
        let recheck = weak_mc_check(model, self.cech, &n.normal)?;
        Ok(Outcome::Done(
            input,
            Normalized {
                normal: format_weak_mc(model, &n.normal),
                chain: n.chain.iter().map(|e| format_equivalence(model, e)).collect(),
                composite: format_equivalence(model, &composite),
                reproduces,
                is_normal: n.normal.is_normal(),
                recheck,
            },
        ))
    }
}

fn conditions_json(r: &WeakMCReport) -> Value {
    r.results
        .iter()
        .map(|c| {
            json!({
                "condition": c.condition.to_string(),
                "checked": c.checked,
                "failure": c.failure.as_ref().map(|f| json!({ "order": f.order, "tuple": f.tuple })),
            })
        })
        .collect()
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn load_cover(file: &Path, flag: Option<&Path>, header: Option<&String>) -> Result<Cover, CliError> {
    let path = match (flag, header) {
        (Some(p), _) => p.to_path_buf(),
        (None, Some(h)) => base_dir(file).join(h),
        (None, None) => {
            return Err(CliError::parse(0, "no cover: pass --cover or add a 'cover' line").in_file(file));
        }
    };
    parse_cover_file(&read(&path)?).map_err(|e| CliError::from(e).in_file(&path))
}

pub fn run(file: &Path, cover: Option<&Path>, oracle: SplittingOracle, order: Option<usize>) -> Result<Report, CliError> {
    let src = read(file)?;
    let header = file_header(&src);
    let model_line = header.get("model").ok_or_else(|| CliError::parse(0, "missing 'model' line").in_file(file))?;
    let model = ModelSpec::parse(model_line, &base_dir(file), 0).map_err(|e| e.in_file(file))?;
    let order = match (order, header.get("order")) {
        (Some(n), _) => n,
        (None, Some(h)) => h.parse().map_err(|_| CliError::parse(0, format!("bad order '{h}'")).in_file(file))?,
        (None, None) => DEFAULT_ORDER,
    };
    let cover = load_cover(file, cover, header.get("cover"))?;
    let has_denominators = cover.shape().tuples().any(|t| !cover.allowed(t).is_empty());
    let model_vars = model.vars()?;
    if has_denominators && cover.vars().as_slice() != model_vars.as_slice() {
        return Err(CliError::Core(Error::VariableMismatch { left: cover.vars().to_vec(), right: model_vars }));
    }
    let opens = cover.shape().count();
    let tuples: Vec<Vec<usize>> = cover.shape().tuples().cloned().collect();
    let cech = cech_build(cover, MAX_LEVEL)?;
    let outcome =
        dispatch_any(&model, NormalizeJob { src: &src, cech: &cech, oracle, order }).map_err(|e| e.in_file(file))?;

    let mut text = format!(
        "model {}\ncover {opens} opens, {} intersections\noracle {oracle}\norder {order}\ninput\n",
        model.describe(),
        tuples.len()
    );
    let mut fields = json!({
        "model": model.describe(),
        "order": order,
        "cover": { "opens": opens, "tuples": tuples },
        "oracle": oracle.to_string(),
        "normal_form": null,
        "chain": [],
        "composite": null,
        "recheck": null,
        "oracle_failure": null,
    });
    let input = match &outcome {
        Outcome::InputFails(r) | Outcome::Oracle(r, _) | Outcome::Done(r, _) => r,
    };
    text.push_str(&input.to_string());
    fields["input_check"] = conditions_json(input);

    let code = match outcome {
        Outcome::InputFails(_) => {
            text.push_str("input is not a weak Maurer-Cartan triple\n");
            EXIT_PROPERTY
        }
        Outcome::Oracle(_, f) => {
            text.push_str(&format!("oracle failure\n{}\n", oracle_summary(&f)));
            text.push_str(&format!("cocycle at level {}\n", f.cochain_level));
            for (t, v) in &f.witness {
                text.push_str(&format!("  {t:?} : {v}\n"));
            }
            fields["oracle_failure"] = json!({
                "oracle": f.oracle,
                "reason": f.reason,
                "hbar_order": f.hbar_order,
                "cochain_level": f.cochain_level,
                "witness": f.witness.iter().map(|(t, v)| json!({ "tuple": t, "value": v })).collect::<Vec<_>>(),
            });
            EXIT_ORACLE
        }
        Outcome::Done(_, n) => {
            text.push_str("normal form\n");
            text.push_str(&n.normal);
            for (k, e) in n.chain.iter().enumerate() {
                text.push_str(&format!("equivalence {}\n{e}", k + 1));
            }
            text.push_str(&format!("composite\n{}", n.composite));
            text.push_str(&format!(
                "recheck\ncomposite reproduces the normal form: {}\ng = 1 and a = 1: {}\n",
                yes(n.reproduces),
                yes(n.is_normal)
            ));
            text.push_str(&n.recheck.to_string());
            let ok = n.reproduces && n.is_normal && n.recheck.passed();
            text.push_str(if ok { "normalized\n" } else { "recheck FAILED\n" });
            fields["normal_form"] = json!(n.normal);
            fields["chain"] = json!(n.chain);
            fields["composite"] = json!(n.composite);
            fields["recheck"] = json!({
                "chain_reproduces": n.reproduces,
                "normal": n.is_normal,
                "conditions": conditions_json(&n.recheck),
            });
            if ok {
                EXIT_OK
            } else {
                EXIT_PROPERTY
            }
        }
    };
    Ok(Report::new("normalize", text, fields, code))
}

fn oracle_summary(f: &OracleFailure) -> String {
    let mut s = format!("{} oracle: {}", f.oracle, f.reason);
    if let Some(n) = f.hbar_order {
        s.push_str(&format!(" at h^{n}"));
    }
    s
}
