use std::collections::BTreeMap;
use std::fmt;

use super::AlgebroidModel;
use crate::dgla::Dgla;
use crate::formal::{Additive, CoeffRing, Poly, Rational};

/// Sorts `idx` in place and returns the permutation sign, or `None` when an
/// index repeats.
pub(crate) fn sort_sign(idx: &mut [usize]) -> Option<i64> {
    let mut sign = 1;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(sign)
    }
}

pub(crate) fn merge_term<C: Additive>(map: &mut BTreeMap<Vec<usize>, C>, key: Vec<usize>, c: C) {
    if c.is_zero() {
        return;
    }
    match map.entry(key) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let s = o.get().add(&c);
            if s.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = s;
            }
        }
    }
}

/// Homogeneous polyvector `sum f_A e_{a_0} ∧ .. ∧ e_{a_k}` of Lie degree
/// `k` (exterior degree `k + 1`). Keys are strictly increasing.
#[derive(Clone, PartialEq)]
pub struct PolyVector<C> {
    degree: i32,
    terms: BTreeMap<Vec<usize>, C>,
}

impl<C: CoeffRing> PolyVector<C> {
    pub fn zero(degree: i32) -> Self {
        PolyVector { degree, terms: BTreeMap::new() }
    }

    /// Lie degree -1: a function.
    pub fn function(f: C) -> Self {
        let mut p = Self::zero(-1);
        merge_term(&mut p.terms, Vec::new(), f);
        p
    }

    /// `f e_{idx}`, reordering `idx` with the wedge sign.
    pub fn basis(idx: &[usize], f: C) -> Self {
        let mut key = idx.to_vec();
        let mut p = Self::zero(idx.len() as i32 - 1);
        if let Some(s) = sort_sign(&mut key) {
            merge_term(&mut p.terms, key, f.scale(&Rational::from_integer(s.into())));
        }
        p
    }

    pub fn from_terms(degree: i32, terms: impl IntoIterator<Item = (Vec<usize>, C)>) -> Self {
        let mut p = Self::zero(degree);
        for (k, c) in terms {
            assert_eq!(k.len() as i32, degree + 1, "exterior degree must be Lie degree + 1");
            let mut key = k;
            if let Some(s) = sort_sign(&mut key) {
                merge_term(&mut p.terms, key, c.scale(&Rational::from_integer(s.into())));
            }
        }
        p
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn exterior_degree(&self) -> usize {
        (self.degree + 1) as usize
    }

    pub fn terms(&self) -> &BTreeMap<Vec<usize>, C> {
        &self.terms
    }

    pub fn coeff(&self, key: &[usize]) -> Option<&C> {
        self.terms.get(key)
    }

    pub fn wedge(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.degree + other.degree + 1);
        for (a, f) in &self.terms {
            for (b, g) in &other.terms {
                let mut key: Vec<usize> = a.iter().chain(b).copied().collect();
                if let Some(s) = sort_sign(&mut key) {
                    merge_term(&mut out.terms, key, f.mul(g).scale(&Rational::from_integer(s.into())));
                }
            }
        }
        out
    }

    pub fn map_coeffs(&self, f: impl Fn(&C) -> C) -> Self {
        let mut out = Self::zero(self.degree);
        for (k, c) in &self.terms {
            merge_term(&mut out.terms, k.clone(), f(c));
        }
        out
    }
}

impl<C: CoeffRing> Additive for PolyVector<C> {
    fn zero_like(&self) -> Self {
        Self::zero(self.degree)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.degree, other.degree);
        let mut out = self.clone();
        for (k, c) in &other.terms {
            merge_term(&mut out.terms, k.clone(), c.clone());
        }
        out
    }
    fn neg(&self) -> Self {
        self.map_coeffs(|c| c.neg())
    }
    fn scale(&self, c: &Rational) -> Self {
        self.map_coeffs(|x| x.scale(c))
    }
    fn compatible(&self, other: &Self) -> bool {
        self.degree == other.degree
    }
}

impl<C: CoeffRing> fmt::Debug for PolyVector<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<C: CoeffRing> fmt::Display for PolyVector<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| {
                let basis: Vec<String> = k.iter().map(|a| format!("e{}", a + 1)).collect();
                if basis.is_empty() {
                    format!("({c})")
                } else {
                    format!("({c})*{}", basis.join("^"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<C: CoeffRing> AlgebroidModel<C> {
    /// `[e_a, e_b]` as a Lie-degree-0 polyvector.
    pub fn bracket_basis(&self, a: usize, b: usize) -> PolyVector<C> {
        PolyVector::from_terms(
            0,
            (0..self.rank()).map(|c| (vec![c], self.structure_coeff(a, b, c).clone())),
        )
    }

    /// `[e_A, g] = sum_i (-1)^(p-1-i) ρ(e_{a_i})(g) e_{A \ a_i}`.
    fn bracket_with_function(&self, idx: &[usize], g: &C) -> PolyVector<C> {
        let p = idx.len();
        let mut out = PolyVector::zero(p as i32 - 2);
        for i in 0..p {
            let dg = self.anchor_apply(idx[i], g);
            if dg.is_zero() {
                continue;
            }
            let sign = if (p - 1 - i) % 2 == 0 { 1 } else { -1 };
            let mut rest = idx.to_vec();
            rest.remove(i);
            merge_term(&mut out.terms, rest, dg.scale(&Rational::from_integer(sign.into())));
        }
        out
    }

    /// `[e_A, e_B] = sum_{i,j} (-1)^(i+j) [e_{a_i}, e_{b_j}] ∧ e_{A\i} ∧ e_{B\j}`.
    fn bracket_basis_words(&self, a: &[usize], b: &[usize]) -> PolyVector<C> {
        let (p, q) = (a.len(), b.len());
        let mut out = PolyVector::zero(p as i32 + q as i32 - 2);
        if p == 0 || q == 0 {
            return out;
        }
        for i in 0..p {
            for j in 0..q {
                let sign = if (i + j) % 2 == 0 { 1i64 } else { -1 };
                for c in 0..self.rank() {
                    let f = self.structure_coeff(a[i], b[j], c);
                    if f.is_zero() {
                        continue;
                    }
                    let mut key = vec![c];
                    key.extend(a.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &x)| x));
                    key.extend(b.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x));
                    if let Some(s) = sort_sign(&mut key) {
                        merge_term(&mut out.terms, key, f.scale(&Rational::from_integer((sign * s).into())));
                    }
                }
            }
        }
        out
    }

    /// Schouten bracket, extending the algebroid bracket and the anchor
    /// action by the graded Leibniz rule.
    pub fn schouten(&self, x: &PolyVector<C>, y: &PolyVector<C>) -> PolyVector<C> {
        let (k, l) = (x.degree, y.degree);
        let mut out = PolyVector::zero(k + l);
        let koszul = if (k * l) % 2 == 0 { -1i64 } else { 1 };
        for (a, f) in &x.terms {
            for (b, g) in &y.terms {
                // f [e_A, g] ∧ e_B
                let t1 = self.bracket_with_function(a, g);
                for (key, c) in &t1.terms {
                    let mut kk: Vec<usize> = key.iter().chain(b).copied().collect();
                    if let Some(s) = sort_sign(&mut kk) {
                        merge_term(&mut out.terms, kk, f.mul(c).scale(&Rational::from_integer(s.into())));
                    }
                }
                // f g [e_A, e_B]
                let fg = f.mul(g);
                for (key, c) in &self.bracket_basis_words(a, b).terms {
                    merge_term(&mut out.terms, key.clone(), fg.mul(c));
                }
                // -(-1)^{kl} g [e_B, f] ∧ e_A
                let t3 = self.bracket_with_function(b, f);
                for (key, c) in &t3.terms {
                    let mut kk: Vec<usize> = key.iter().chain(a).copied().collect();
                    if let Some(s) = sort_sign(&mut kk) {
                        merge_term(
                            &mut out.terms,
                            kk,
                            g.mul(c).scale(&Rational::from_integer((koszul * s).into())),
                        );
                    }
                }
            }
        }
        out
    }
}

/// Polyvectors of an algebroid with zero differential and the Schouten
/// bracket.
#[derive(Clone, Debug)]
pub struct PolyVectorModel<C> {
    pub algebroid: AlgebroidModel<C>,
}

impl<C: CoeffRing> PolyVectorModel<C> {
    pub fn new(algebroid: AlgebroidModel<C>) -> Self {
        PolyVectorModel { algebroid }
    }
}

impl<C: CoeffRing> Dgla for PolyVectorModel<C> {
    type Elem = PolyVector<C>;

    fn name(&self) -> String {
        "polyvector".into()
    }
    fn degree_of(&self, x: &PolyVector<C>) -> i32 {
        x.degree
    }
    fn zero(&self, degree: i32) -> PolyVector<C> {
        PolyVector::zero(degree)
    }
    fn differential(&self, x: &PolyVector<C>) -> PolyVector<C> {
        PolyVector::zero(x.degree + 1)
    }
    fn bracket(&self, x: &PolyVector<C>, y: &PolyVector<C>) -> PolyVector<C> {
        self.algebroid.schouten(x, y)
    }
    fn denominators(&self, x: &PolyVector<C>) -> Vec<Poly> {
        x.terms.values().filter_map(|c| c.denominator()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formal::parse_poly;

    fn p(s: &str) -> Poly {
        parse_poly(s, &["x", "y"]).unwrap()
    }

    fn plane() -> AlgebroidModel<Poly> {
        AlgebroidModel::tangent(p("0"))
    }

    #[test]
    fn anchor_action_on_functions() {
        let m = plane();
        let e1 = PolyVector::basis(&[0], p("1"));
        let f = PolyVector::function(p("x^2*y"));
        assert_eq!(m.schouten(&e1, &f), PolyVector::function(p("2*x*y")));
    }

    #[test]
    fn any_bivector_on_the_plane_is_poisson() {
        let m = plane();
        let pi = PolyVector::basis(&[0, 1], p("x"));
        assert!(m.schouten(&pi, &pi).is_zero());
    }

    #[test]
    fn vector_field_commutator() {
        let m = plane();
        let x = PolyVector::basis(&[0], p("x"));
        let y = PolyVector::basis(&[1], p("x*y"));
        // [x ∂x, xy ∂y] = xy ∂y
        assert_eq!(m.schouten(&x, &y), PolyVector::basis(&[1], p("x*y")));
    }

    #[test]
    fn wedge_sign() {
        let a = PolyVector::basis(&[1], p("1"));
        let b = PolyVector::basis(&[0], p("1"));
        assert_eq!(a.wedge(&b), PolyVector::basis(&[0, 1], p("-1")));
    }
}
