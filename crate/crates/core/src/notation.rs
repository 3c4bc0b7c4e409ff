//! Text notation for graded elements.
//!
//! An element is a `;`-separated list of terms `[basis] coefficient`, where
//! the coefficient is an expression in the model's variables and `h`. A lone
//! `0` is the zero element. Basis tokens depend on the model:
//!
//! ```text
//! polyvector   [x, y]      ∂x ∧ ∂y on the tangent algebroid
//!              [e1, e2]    e_1 ∧ e_2 on any algebroid (1-based)
//!              []          a function
//! polydiff     [x | y^2]   ∂x ⊗ ∂y² (one slot per bar-separated monomial)
//!              [1 | x]     id ⊗ ∂x
//!              []          a function
//! abelian      [1:0]       basis vector 0 in degree 1
//! ```

use std::collections::BTreeMap;

use crate::algebroid::{PolyDiff, PolyDiffModel, PolyVector, PolyVectorModel};
use crate::dgla::{AbelianModel, CochainVector, Dgla, GradedElement};
use crate::error::{Error, Result};
use crate::formal::{parse_series, Additive, CoeffRing, HbarSeries, Poly, RatFunc, Rational};

/// Models whose elements can be written in the element notation.
pub trait ElementNotation: Dgla {
    /// Variable names usable in coefficients.
    fn coefficient_vars(&self) -> Vec<String>;
    /// `coeff` times the basis element named by `basis`.
    fn basis_term(&self, basis: &str, coeff: &RatFunc) -> std::result::Result<Self::Elem, String>;
    /// `(basis, coefficient)` pairs summing to `x`.
    fn split_terms(&self, x: &Self::Elem) -> Vec<(String, String)>;
}

/// Converts a rational function into a coefficient ring element.
pub fn coeff_from_ratfunc<C: CoeffRing>(f: &RatFunc) -> std::result::Result<C, String> {
    let lift = |p: &Poly| C::from_poly(p.clone());
    let num = lift(f.numer());
    if f.denom().is_constant() {
        return Ok(num.scale(&f.denom().constant_term().recip()));
    }
    let inv = lift(f.denom()).try_inverse().ok_or_else(|| format!("the coefficient ring cannot invert {}", f.denom()))?;
    Ok(num.mul(&inv))
}

fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0usize);
    for (i, ch) in s.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

/// Parses an element of the given degree, truncated at `h^order`.
pub fn parse_element<D: ElementNotation>(model: &D, src: &str, degree: i32, order: usize) -> Result<GradedElement<D>> {
    let src = src.trim();
    let mut coeffs: Vec<D::Elem> = (0..=order).map(|_| model.zero(degree)).collect();
    if src != "0" {
        let vars = model.coefficient_vars();
        for term in split_top(src, ';') {
            let term = term.trim();
            let rest = term
                .strip_prefix('[')
                .ok_or_else(|| Error::parse(0, format!("term '{term}' must start with a [basis]")))?;
            let close = rest.find(']').ok_or_else(|| Error::parse(0, format!("unclosed basis in '{term}'")))?;
            let basis = &rest[..close];
            let coeff_src = rest[close + 1..].trim();
            let coeff_src = if coeff_src.is_empty() { "1" } else { coeff_src };
            let series = parse_series(coeff_src, &vars, order)?;
            for (k, c) in series.coeffs().iter().enumerate() {
                if Additive::is_zero(c) {
                    continue;
                }
                let x = model.basis_term(basis, c).map_err(|m| Error::parse(0, m))?;
                let found = model.degree_of(&x);
                if found != degree {
                    return Err(Error::Degree { expected: degree, found });
                }
                coeffs[k] = coeffs[k].add(&x);
            }
        }
    }
    GradedElement::new(model, degree, HbarSeries::from_coeffs(coeffs))
}

fn hbar_power(k: usize) -> String {
    match k {
        0 => String::new(),
        1 => "h".into(),
        k => format!("h^{k}"),
    }
}

/// Formats an element in the notation accepted by [`parse_element`].
pub fn format_element<D: ElementNotation>(model: &D, x: &GradedElement<D>) -> String {
    let mut by_basis: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for k in 0..=x.order() {
        for (basis, c) in model.split_terms(x.coeff(k)) {
            let h = hbar_power(k);
            let piece = match (c.as_str(), h.is_empty()) {
                (_, true) => format!("({c})"),
                ("1", false) => h,
                _ => format!("({c})*{h}"),
            };
            by_basis.entry(basis).or_default().push(piece);
        }
    }
    if by_basis.is_empty() {
        return "0".into();
    }
    by_basis
        .into_iter()
        .map(|(b, pieces)| format!("[{b}] {}", pieces.join(" + ")))
        .collect::<Vec<_>>()
        .join("; ")
}

fn constant(c: &RatFunc) -> std::result::Result<Rational, String> {
    c.as_constant().ok_or_else(|| format!("coefficient {c} is not a rational number"))
}

impl ElementNotation for AbelianModel {
    fn coefficient_vars(&self) -> Vec<String> {
        Vec::new()
    }

    fn basis_term(&self, basis: &str, coeff: &RatFunc) -> std::result::Result<CochainVector, String> {
        let (d, i) = basis.split_once(':').ok_or_else(|| format!("expected [degree:index], got [{basis}]"))?;
        let d: i32 = d.trim().parse().map_err(|_| format!("bad degree in [{basis}]"))?;
        let i: usize = i.trim().parse().map_err(|_| format!("bad index in [{basis}]"))?;
        if i >= self.dim(d) {
            return Err(format!("degree {d} has dimension {}", self.dim(d)));
        }
        let mut v = self.zero(d);
        v.entries[i] = constant(coeff)?;
        Ok(v)
    }

    fn split_terms(&self, x: &CochainVector) -> Vec<(String, String)> {
        x.entries
            .iter()
            .enumerate()
            .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
            .map(|(i, c)| (format!("{}:{i}", x.degree), c.to_string()))
            .collect()
    }
}

impl<C: CoeffRing> PolyVectorModel<C> {
    fn basis_name(&self, a: usize) -> String {
        if self.algebroid.is_tangent() {
            self.algebroid.vars()[a].clone()
        } else {
            format!("e{}", a + 1)
        }
    }

    fn basis_index(&self, name: &str) -> std::result::Result<usize, String> {
        let rank = self.algebroid.rank();
        if self.algebroid.is_tangent() {
            if let Some(i) = self.algebroid.vars().iter().position(|v| v == name) {
                return Ok(i);
            }
        }
        name.strip_prefix('e')
            .and_then(|n| n.parse::<usize>().ok())
            .filter(|&a| (1..=rank).contains(&a))
            .map(|a| a - 1)
            .ok_or_else(|| format!("unknown basis section '{name}'"))
    }
}

impl<C: CoeffRing> ElementNotation for PolyVectorModel<C> {
    fn coefficient_vars(&self) -> Vec<String> {
        self.algebroid.vars().to_vec()
    }

    fn basis_term(&self, basis: &str, coeff: &RatFunc) -> std::result::Result<PolyVector<C>, String> {
        let c = coeff_from_ratfunc(coeff)?;
        let names: Vec<&str> = basis.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        if names.is_empty() {
            return Ok(PolyVector::function(c));
        }
        // sort into increasing order, tracking the sign of the permutation
        let mut idx = names.iter().map(|n| self.basis_index(n)).collect::<std::result::Result<Vec<_>, _>>()?;
        let mut sign = false;
        for i in 0..idx.len() {
            for j in 0..idx.len() - 1 - i {
                if idx[j] > idx[j + 1] {
                    idx.swap(j, j + 1);
                    sign = !sign;
                } else if idx[j] == idx[j + 1] {
                    return Ok(PolyVector::zero(names.len() as i32 - 1));
                }
            }
        }
        if idx.windows(2).any(|w| w[0] == w[1]) {
            return Ok(PolyVector::zero(names.len() as i32 - 1));
        }
        Ok(PolyVector::basis(&idx, if sign { c.neg() } else { c }))
    }

    fn split_terms(&self, x: &PolyVector<C>) -> Vec<(String, String)> {
        x.terms()
            .iter()
            .map(|(k, c)| (k.iter().map(|&a| self.basis_name(a)).collect::<Vec<_>>().join(","), c.to_string()))
            .collect()
    }
}

impl<C: CoeffRing> PolyDiffModel<C> {
    fn parse_slot(&self, s: &str) -> std::result::Result<Vec<u32>, String> {
        let vars = self.vars();
        let mut exps = vec![0u32; vars.len()];
        let s = s.trim();
        if s == "1" {
            return Ok(exps);
        }
        for factor in s.split('*') {
            let factor = factor.trim();
            let (name, e) = match factor.split_once('^') {
                Some((n, e)) => (n.trim(), e.trim().parse::<u32>().map_err(|_| format!("bad exponent in '{factor}'"))?),
                None => (factor, 1),
            };
            let i = vars.iter().position(|v| v == name).ok_or_else(|| format!("unknown variable '{name}' in slot"))?;
            exps[i] += e;
        }
        Ok(exps)
    }

    fn format_slot(&self, exps: &[u32]) -> String {
        let parts: Vec<String> = exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { self.vars()[i].clone() } else { format!("{}^{e}", self.vars()[i]) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

impl<C: CoeffRing> ElementNotation for PolyDiffModel<C> {
    fn coefficient_vars(&self) -> Vec<String> {
        self.vars().to_vec()
    }

    fn basis_term(&self, basis: &str, coeff: &RatFunc) -> std::result::Result<PolyDiff<C>, String> {
        let c = coeff_from_ratfunc(coeff)?;
        if basis.trim().is_empty() {
            return Ok(PolyDiff::function(c));
        }
        let slots = basis.split('|').map(|s| self.parse_slot(s)).collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(PolyDiff::term(slots, c))
    }

    fn split_terms(&self, x: &PolyDiff<C>) -> Vec<(String, String)> {
        x.terms()
            .iter()
            .map(|(k, c)| (k.iter().map(|s| self.format_slot(s)).collect::<Vec<_>>().join("|"), c.to_string()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebroid::{moyal_generate, AlgebroidModel};
    use crate::formal::{int, parse_poly};

    fn p(s: &str) -> Poly {
        parse_poly(s, &["x", "y"]).unwrap()
    }

    #[test]
    fn polyvector_round_trip() {
        let m = PolyVectorModel::new(AlgebroidModel::tangent(p("0")));
        let e = parse_element(&m, "[y, x] h*x; [x,y] h^2/3", 1, 3).unwrap();
        assert_eq!(e.coeff(1), &PolyVector::basis(&[0, 1], p("-x")));
        let again = parse_element(&m, &format_element(&m, &e), 1, 3).unwrap();
        assert_eq!(again, e);
    }

    #[test]
    fn polydiff_moyal_round_trip() {
        let m = PolyDiffModel::new(p("0"));
        let pi = moyal_generate(&m, &PolyVector::basis(&[0, 1], p("1")), 3).unwrap();
        let text = format_element(&m, &pi);
        assert!(text.contains("[x|y] h"), "{text}");
        assert_eq!(parse_element(&m, &text, 1, 3).unwrap(), pi);
    }

    #[test]
    fn rational_coefficients() {
        let zero = RatFunc::from_poly_value(p("0"));
        let m = PolyVectorModel::new(AlgebroidModel::tangent(zero));
        let e = parse_element(&m, "[x] h/(x*y)", 0, 1).unwrap();
        assert_eq!(parse_element(&m, &format_element(&m, &e), 0, 1).unwrap(), e);
    }

    #[test]
    fn abelian_and_errors() {
        let m = AbelianModel::koszul(vec![int(1), int(0), int(0)]);
        let e = parse_element(&m, "[1:2] h/2", 1, 2).unwrap();
        assert_eq!(parse_element(&m, &format_element(&m, &e), 1, 2).unwrap(), e);
        assert!(matches!(parse_element(&m, "[0:1] h", 1, 2), Err(Error::Degree { .. })));
        assert!(matches!(parse_element(&m, "[1:7] h", 1, 2), Err(Error::Parse { .. })));
        assert!(parse_element(&m, "0", 1, 2).unwrap().is_zero());
    }
}
