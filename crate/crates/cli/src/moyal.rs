//! `moyal`: the Moyal star product of a constant bivector, as an element
//! file for `check-mc`.

use defq_core::algebroid::{moyal_generate, AlgebroidModel, PolyDiffModel, PolyVectorModel};
use defq_core::dgla::is_mc;
use defq_core::formal::Poly;
use defq_core::notation::{format_element, parse_element};
use serde_json::json;

use crate::{CliError, Report, EXIT_OK, EXIT_PROPERTY};

pub fn run(vars: &[String], pi: &str, order: usize) -> Result<Report, CliError> {
    let zero = Poly::zero(vars);
    let pv = PolyVectorModel::new(AlgebroidModel::tangent(zero.clone()));
    let bivector = parse_element(&pv, pi, 1, 0)?.coeff(0).clone();
    let pd = PolyDiffModel::new(zero);
    let star = moyal_generate(&pd, &bivector, order)?;
    let mc = is_mc(&pd, &star)?;
    let element = format_element(&pd, &star);
    let file = format!("model polydiff {}\norder {order}\npi : {element}\n", vars.join(" "));
    let mut text = file.clone();
    if !mc {
        text.push_str("# not a Maurer-Cartan element\n");
    }
    let fields = json!({
        "model": format!("polydiff {}", vars.join(" ")),
        "order": order,
        "pi": element,
        "mc": mc,
        "file": file,
    });
    Ok(Report::new("moyal", text, fields, if mc { EXIT_OK } else { EXIT_PROPERTY }))
}
