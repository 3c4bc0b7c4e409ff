use crate::algebroid::{PolyDiff, PolyVector};
use crate::dgla::{CochainVector, Dgla, GradedElement};
use crate::formal::{Additive, CoeffRing, Poly};

/// Candidates strictly smaller than `self`, each with one term or one
/// monomial of a coefficient removed.
pub trait Shrink: Sized {
    fn shrink(&self) -> Vec<Self>;
}

fn coefficient_shrinks<C: CoeffRing>(c: &C) -> Vec<C> {
    let Some(p) = c.as_poly() else { return Vec::new() };
    if p.len() < 2 {
        return Vec::new();
    }
    p.terms()
        .keys()
        .map(|drop| {
            let rest = p.terms().iter().filter(|(m, _)| *m != drop).map(|(m, r)| (m.clone(), r.clone()));
            C::from_poly(Poly::from_terms(p.shared_vars().clone(), rest))
        })
        .collect()
}

fn keyed_shrinks<K: Clone + Ord, C: CoeffRing, T>(
    terms: &std::collections::BTreeMap<K, C>,
    build: impl Fn(Vec<(K, C)>) -> T,
) -> Vec<T> {
    let all: Vec<(K, C)> = terms.iter().map(|(k, c)| (k.clone(), c.clone())).collect();
    let mut out = Vec::new();
    for i in 0..all.len() {
        let mut v = all.clone();
        v.remove(i);
        out.push(build(v));
    }
    for i in 0..all.len() {
        for c in coefficient_shrinks(&all[i].1) {
            let mut v = all.clone();
            v[i].1 = c;
            out.push(build(v));
        }
    }
    out
}

impl<C: CoeffRing> Shrink for PolyVector<C> {
    fn shrink(&self) -> Vec<Self> {
        let d = self.degree();
        keyed_shrinks(self.terms(), |v| PolyVector::from_terms(d, v))
    }
}

impl<C: CoeffRing> Shrink for PolyDiff<C> {
    fn shrink(&self) -> Vec<Self> {
        let d = self.degree();
        keyed_shrinks(self.terms(), |v| PolyDiff::from_terms(d, v))
    }
}

impl Shrink for CochainVector {
    fn shrink(&self) -> Vec<Self> {
        (0..self.entries.len())
            .filter(|&i| !num_traits::Zero::is_zero(&self.entries[i]))
            .map(|i| {
                let mut v = self.clone();
                v.entries[i] = num_traits::Zero::zero();
                v
            })
            .collect()
    }
}

/// Shrinks of a series, one `h`-coefficient at a time, dropping whole
/// coefficients first.
pub fn shrink_series<D: Dgla>(model: &D, x: &GradedElement<D>) -> Vec<GradedElement<D>>
where
    D::Elem: Shrink,
{
    let coeffs: Vec<D::Elem> = (0..=x.order()).map(|k| x.coeff(k).clone()).collect();
    let rebuild = |k: usize, c: D::Elem| {
        let mut v = coeffs.clone();
        v[k] = c;
        GradedElement::from_coeffs(model, x.degree(), v, x.order()).expect("same degree")
    };
    let mut out = Vec::new();
    for k in 1..=x.order() {
        if !coeffs[k].is_zero() {
            out.push(rebuild(k, model.zero(x.degree())));
        }
    }
    for k in 1..=x.order() {
        for c in coeffs[k].shrink() {
            out.push(rebuild(k, c));
        }
    }
    out
}

/// Greedy minimization: repeatedly replaces one input by its first shrink
/// that still fails, until no shrink of any input fails.
pub fn minimize<T: Clone>(inputs: Vec<T>, shrink: impl Fn(&T) -> Vec<T>, fails: impl Fn(&[T]) -> bool) -> Vec<T> {
    let mut cur = inputs;
    'outer: loop {
        for i in 0..cur.len() {
            for cand in shrink(&cur[i]) {
                let mut next = cur.clone();
                next[i] = cand;
                if fails(&next) {
                    cur = next;
                    continue 'outer;
                }
            }
        }
        return cur;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formal::parse_poly;

    #[test]
    fn minimizes_to_the_offending_term() {
        let p = |s: &str| parse_poly(s, &["x", "y"]).unwrap();
        let v = PolyVector::basis(&[0], p("x + 3*y^2")).add(&PolyVector::basis(&[1], p("1 + x*y")));
        // fails while the coefficient of ∂y has an x*y term
        let out = minimize(vec![v], |v| v.shrink(), |v| {
            v[0].coeff(&[1]).is_some_and(|c| c.terms().keys().any(|m| m.0 == vec![1, 1]))
        });
        assert_eq!(out[0], PolyVector::basis(&[1], p("x*y")));
    }
}
