//! Text files for triples and equivalences.
//!
//! ```text
//! model polyvector x y       # header lines are kept for the caller
//! cover plane.cover
//! pi 0 : [x, y] h
//! g 0 1 : [x] h
//! a 0 1 2 : [] h^2
//! ```
//!
//! Entries left out default to `Π = 0`, `g = 1`, `a = 1`. Equivalences use
//! `gamma i : ..` and `alpha i j : ..` with the same defaults.

use std::collections::BTreeMap;

use super::{pairs_of, triples_of, WeakEquivalence, WeakMCTriple};
use crate::algebroid::relabel;
use crate::dgla::{GaugeElement, GradedElement};
use crate::error::{Error, Result};
use crate::notation::{format_element, parse_element, ElementNotation};
use crate::simplicial::CoverShape;

const HEADER_KEYS: [&str; 3] = ["model", "cover", "order"];

/// A parsed triple file with its header lines.
pub struct WeakMCFile<D: ElementNotation> {
    pub header: BTreeMap<String, String>,
    pub triple: WeakMCTriple<D>,
}

struct Entry {
    line: usize,
    key: String,
    indices: Vec<usize>,
    expr: String,
}

fn entries(src: &str, allowed: &[&str]) -> Result<(BTreeMap<String, String>, Vec<Entry>)> {
    let mut header = BTreeMap::new();
    let mut out = Vec::new();
    for (k, raw) in src.lines().enumerate() {
        let line = k + 1;
        let text = raw.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        let (kw, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
        if HEADER_KEYS.contains(&kw) {
            header.insert(kw.to_string(), rest.trim().to_string());
            continue;
        }
        if !allowed.contains(&kw) {
            return Err(Error::parse(line, format!("unknown keyword '{kw}'")));
        }
        let (idx, expr) =
            rest.split_once(':').ok_or_else(|| Error::parse(line, format!("expected '{kw} <indices> : <element>'")))?;
        let indices = idx
            .split_whitespace()
            .map(|w| w.parse::<usize>().map_err(|_| Error::parse(line, format!("bad index '{w}'"))))
            .collect::<Result<Vec<_>>>()?;
        out.push(Entry { line, key: kw.to_string(), indices, expr: expr.trim().to_string() });
    }
    Ok((header, out))
}

/// Header lines (`model`, `cover`, `order`) of a triple or equivalence file.
pub fn file_header(src: &str) -> BTreeMap<String, String> {
    src.lines()
        .filter_map(|raw| {
            let text = raw.split('#').next().unwrap_or("").trim();
            let (kw, rest) = text.split_once(char::is_whitespace)?;
            HEADER_KEYS.contains(&kw).then(|| (kw.to_string(), rest.trim().to_string()))
        })
        .collect()
}

fn arity(key: &str) -> usize {
    match key {
        "pi" | "gamma" => 1,
        "g" | "alpha" => 2,
        _ => 3,
    }
}

fn element<D: ElementNotation>(model: &D, e: &Entry, degree: i32, order: usize) -> Result<GradedElement<D>> {
    if e.indices.len() != arity(&e.key) || e.indices.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::parse(e.line, format!("'{}' needs {} increasing indices", e.key, arity(&e.key))));
    }
    parse_element(model, &e.expr, degree, order).map_err(|err| relabel(err, e.line))
}

pub fn parse_weak_mc_file<D: ElementNotation>(
    model: &D,
    shape: &CoverShape,
    src: &str,
    order: usize,
) -> Result<WeakMCFile<D>> {
    let (header, list) = entries(src, &["pi", "g", "a"])?;
    let mut pi: BTreeMap<usize, GradedElement<D>> =
        (0..shape.count()).map(|i| (i, GradedElement::zero(model, 1, order))).collect();
    let mut g: BTreeMap<_, _> = pairs_of(shape).into_iter().map(|p| (p, GaugeElement::identity(model, order))).collect();
    let mut a: BTreeMap<_, _> =
        triples_of(shape).into_iter().map(|t| (t, GradedElement::zero(model, -1, order))).collect();
    for e in &list {
        let missing = || Error::parse(e.line, format!("{:?} is not an intersection of the cover", e.indices));
        match e.key.as_str() {
            "pi" => {
                let x = element(model, e, 1, order)?;
                *pi.get_mut(&e.indices[0]).ok_or_else(missing)? = x;
            }
            "g" => {
                let x = GaugeElement::new(element(model, e, 0, order)?).map_err(|err| relabel(err, e.line))?;
                *g.get_mut(&(e.indices[0], e.indices[1])).ok_or_else(missing)? = x;
            }
            _ => {
                let x = element(model, e, -1, order)?;
                *a.get_mut(&(e.indices[0], e.indices[1], e.indices[2])).ok_or_else(missing)? = x;
            }
        }
    }
    let triple = WeakMCTriple::new(shape, pi, g, a)?;
    Ok(WeakMCFile { header, triple })
}

pub fn format_weak_mc<D: ElementNotation>(model: &D, w: &WeakMCTriple<D>) -> String {
    let mut out = String::new();
    for (i, x) in &w.pi {
        out.push_str(&format!("pi {i} : {}\n", format_element(model, x)));
    }
    for ((i, j), q) in &w.g {
        out.push_str(&format!("g {i} {j} : {}\n", format_element(model, q.log())));
    }
    for ((i, j, k), u) in &w.a {
        out.push_str(&format!("a {i} {j} {k} : {}\n", format_element(model, u)));
    }
    out
}

pub fn parse_equivalence<D: ElementNotation>(
    model: &D,
    shape: &CoverShape,
    src: &str,
    order: usize,
) -> Result<WeakEquivalence<D>> {
    let (_, list) = entries(src, &["gamma", "alpha"])?;
    let mut e = WeakEquivalence::identity(model, shape, order);
    for x in &list {
        let missing = || Error::parse(x.line, format!("{:?} is not an intersection of the cover", x.indices));
        if x.key == "gamma" {
            let q = GaugeElement::new(element(model, x, 0, order)?).map_err(|err| relabel(err, x.line))?;
            *e.gamma.get_mut(&x.indices[0]).ok_or_else(missing)? = q;
        } else {
            let u = element(model, x, -1, order)?;
            *e.alpha.get_mut(&(x.indices[0], x.indices[1])).ok_or_else(missing)? = u;
        }
    }
    Ok(e)
}

pub fn format_equivalence<D: ElementNotation>(model: &D, e: &WeakEquivalence<D>) -> String {
    let mut out = String::new();
    for (i, q) in &e.gamma {
        out.push_str(&format!("gamma {i} : {}\n", format_element(model, q.log())));
    }
    for ((i, j), u) in &e.alpha {
        out.push_str(&format!("alpha {i} {j} : {}\n", format_element(model, u)));
    }
    out
}
