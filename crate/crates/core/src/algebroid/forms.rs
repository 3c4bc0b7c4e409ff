use std::collections::BTreeMap;
use std::fmt;

use super::polyvector::{merge_term, sort_sign};
use super::{AlgebroidModel, PolyVector};
use crate::formal::{Additive, CoeffRing, Rational};

/// Strictly increasing `k`-subsets of `0..n`.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// `L`-form `sum f_A ε^{a_1} ∧ .. ∧ ε^{a_p}`, keys strictly increasing.
/// Evaluation is the determinant pairing: `(ε^1 ∧ ε^2)(e_1, e_2) = 1`.
#[derive(Clone, PartialEq)]
pub struct LForm<C> {
    degree: usize,
    terms: BTreeMap<Vec<usize>, C>,
}

impl<C: CoeffRing> LForm<C> {
    pub fn zero(degree: usize) -> Self {
        LForm { degree, terms: BTreeMap::new() }
    }

    pub fn function(f: C) -> Self {
        let mut out = Self::zero(0);
        merge_term(&mut out.terms, Vec::new(), f);
        out
    }

    /// `f ε^{idx}`, reordering with the wedge sign.
    pub fn basis(idx: &[usize], f: C) -> Self {
        let mut out = Self::zero(idx.len());
        let mut key = idx.to_vec();
        if let Some(s) = sort_sign(&mut key) {
            merge_term(&mut out.terms, key, f.scale(&Rational::from_integer(s.into())));
        }
        out
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Vec<usize>, C> {
        &self.terms
    }

    /// `η(e_{idx_1}, .., e_{idx_p})` for arbitrary basis indices.
    pub fn eval_basis(&self, idx: &[usize], zero: &C) -> C {
        let mut key = idx.to_vec();
        match sort_sign(&mut key) {
            None => zero.clone(),
            Some(s) => match self.terms.get(&key) {
                None => zero.clone(),
                Some(c) => c.scale(&Rational::from_integer(s.into())),
            },
        }
    }

    pub fn wedge(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.degree + other.degree);
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

impl<C: CoeffRing> Additive for LForm<C> {
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
}

impl<C: CoeffRing> fmt::Debug for LForm<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<C: CoeffRing> fmt::Display for LForm<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| {
                let basis: Vec<String> = k.iter().map(|a| format!("E{}", a + 1)).collect();
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
    /// `L`-de Rham differential, evaluated on basis sections:
    ///
    /// ```text
    /// dη(σ_0..σ_k) = sum_i (-1)^i ρ(σ_i) η(..σ̂_i..)
    ///              + sum_{i<j} (-1)^(i+j) η([σ_i, σ_j], ..σ̂_i..σ̂_j..)
    /// ```
    pub fn lde_rham(&self, eta: &LForm<C>) -> LForm<C> {
        let k = eta.degree;
        let zero = self.zero_coeff();
        let mut out = LForm::zero(k + 1);
        if k + 1 > self.rank() {
            return out;
        }
        for sigma in subsets(self.rank(), k + 1) {
            let mut acc = zero.clone();
            for i in 0..=k {
                let rest: Vec<usize> = sigma.iter().enumerate().filter(|&(t, _)| t != i).map(|(_, &s)| s).collect();
                let v = self.anchor_apply(sigma[i], &eta.eval_basis(&rest, zero));
                acc = if i % 2 == 0 { acc.add(&v) } else { acc.sub(&v) };
            }
            for i in 0..=k {
                for j in (i + 1)..=k {
                    let rest: Vec<usize> = sigma
                        .iter()
                        .enumerate()
                        .filter(|&(t, _)| t != i && t != j)
                        .map(|(_, &s)| s)
                        .collect();
                    for c in 0..self.rank() {
                        let f = self.structure_coeff(sigma[i], sigma[j], c);
                        if f.is_zero() {
                            continue;
                        }
                        let mut args = vec![c];
                        args.extend(&rest);
                        let v = f.mul(&eta.eval_basis(&args, zero));
                        acc = if (i + j) % 2 == 0 { acc.add(&v) } else { acc.sub(&v) };
                    }
                }
            }
            merge_term(&mut out.terms, sigma, acc);
        }
        out
    }

    /// `ι_u η (Y..) = η(X_p, .., X_1, Y..)` for `u = X_1 ∧ .. ∧ X_p`;
    /// a function `u` acts by multiplication.
    pub fn contract(&self, u: &PolyVector<C>, eta: &LForm<C>) -> LForm<C> {
        let p = u.exterior_degree();
        let zero = self.zero_coeff();
        if p > eta.degree {
            return LForm::zero(0);
        }
        let q = eta.degree - p;
        let mut out = LForm::zero(q);
        for b in subsets(self.rank(), q) {
            let mut acc = zero.clone();
            for (a, f) in u.terms() {
                let mut args: Vec<usize> = a.iter().rev().copied().collect();
                args.extend(&b);
                let v = eta.eval_basis(&args, zero);
                if !v.is_zero() {
                    acc = acc.add(&f.mul(&v));
                }
            }
            merge_term(&mut out.terms, b, acc);
        }
        out
    }

    /// `L_u = d ∘ ι_u + (-1)^k ι_u ∘ d` for `u` of Lie degree `k`.
    pub fn lie_derivative(&self, u: &PolyVector<C>, eta: &LForm<C>) -> LForm<C> {
        let a = self.lde_rham(&self.contract(u, eta));
        let b = self.contract(u, &self.lde_rham(eta));
        let target = (eta.degree as i64) - (u.degree() as i64);
        if target < 0 {
            return LForm::zero(0);
        }
        let b = if u.degree() % 2 == 0 { b } else { b.neg() };
        add_forms(&a, &b, target as usize)
    }

    /// Classical formula for a vector field `X`:
    /// `(L_X η)(Y..) = ρ(X) η(Y..) - sum_i η(.., [X, Y_i], ..)`.
    pub fn lie_derivative_vector(&self, x: &PolyVector<C>, eta: &LForm<C>) -> LForm<C> {
        assert_eq!(x.degree(), 0);
        let zero = self.zero_coeff();
        let k = eta.degree;
        let mut out = LForm::zero(k);
        for ys in subsets(self.rank(), k) {
            let mut acc = zero.clone();
            let eval_on = |secs: &[PolyVector<C>]| -> C { eval_sections(eta, secs, zero) };
            let y_sections: Vec<PolyVector<C>> =
                ys.iter().map(|&y| PolyVector::basis(&[y], zero.one_like())).collect();
            // ρ(X)(η(Y..)) = sum_a f_a ρ(e_a)(η(Y..))
            let base = eval_on(&y_sections);
            for (key, f) in x.terms() {
                acc = acc.add(&f.mul(&self.anchor_apply(key[0], &base)));
            }
            for i in 0..k {
                let mut secs = y_sections.clone();
                secs[i] = self.schouten(x, &y_sections[i]);
                acc = acc.sub(&eval_on(&secs));
            }
            merge_term(&mut out.terms, ys, acc);
        }
        out
    }
}

/// Evaluates `η` on degree-0 polyvectors, multilinearly.
pub(crate) fn eval_sections<C: CoeffRing>(eta: &LForm<C>, secs: &[PolyVector<C>], zero: &C) -> C {
    fn go<C: CoeffRing>(
        eta: &LForm<C>,
        secs: &[PolyVector<C>],
        idx: &mut Vec<usize>,
        coeff: C,
        zero: &C,
        acc: &mut C,
    ) {
        if idx.len() == secs.len() {
            let v = eta.eval_basis(idx, zero);
            if !v.is_zero() {
                *acc = acc.add(&coeff.mul(&v));
            }
            return;
        }
        let s = &secs[idx.len()];
        for (key, f) in s.terms() {
            idx.push(key[0]);
            go(eta, secs, idx, coeff.mul(f), zero, acc);
            idx.pop();
        }
    }
    let mut acc = zero.clone();
    go(eta, secs, &mut Vec::new(), zero.one_like(), zero, &mut acc);
    acc
}

/// Sum of two forms, treating an empty degree-0 zero as a zero of any degree.
pub(crate) fn add_forms<C: CoeffRing>(a: &LForm<C>, b: &LForm<C>, degree: usize) -> LForm<C> {
    let mut out = LForm::zero(degree);
    for f in [a, b] {
        if f.is_zero() {
            continue;
        }
        assert_eq!(f.degree, degree, "form degrees differ");
        for (k, c) in &f.terms {
            merge_term(&mut out.terms, k.clone(), c.clone());
        }
    }
    out
}

/// Compares forms, ignoring the degree label of zero forms.
pub fn forms_equal<C: CoeffRing>(a: &LForm<C>, b: &LForm<C>) -> bool {
    if a.is_zero() && b.is_zero() {
        return true;
    }
    a == b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formal::{parse_poly, Poly};

    fn p(s: &str) -> Poly {
        parse_poly(s, &["x", "y"]).unwrap()
    }

    fn plane() -> AlgebroidModel<Poly> {
        AlgebroidModel::tangent(p("0"))
    }

    #[test]
    fn d_of_function() {
        let m = plane();
        let df = m.lde_rham(&LForm::function(p("x^2*y")));
        let expect = LForm::basis(&[0], p("2*x*y")).add(&LForm::basis(&[1], p("x^2")));
        assert_eq!(df, expect);
    }

    #[test]
    fn d_of_x_dy() {
        let m = plane();
        let eta = LForm::basis(&[1], p("x"));
        assert_eq!(m.lde_rham(&eta), LForm::basis(&[0, 1], p("1")));
    }

    #[test]
    fn contraction_of_basis() {
        let m = plane();
        let e1 = PolyVector::basis(&[0], p("1"));
        let eta = LForm::basis(&[0, 1], p("1"));
        assert_eq!(m.contract(&e1, &eta), LForm::basis(&[1], p("1")));
        let big = PolyVector::basis(&[0, 1], p("1"));
        assert!(m.contract(&big, &LForm::basis(&[0], p("1"))).is_zero());
    }

    #[test]
    fn lie_derivative_of_x_dy() {
        let m = plane();
        let dx = PolyVector::basis(&[0], p("1"));
        let eta = LForm::basis(&[1], p("x"));
        assert_eq!(m.lie_derivative(&dx, &eta), LForm::basis(&[1], p("1")));
        assert_eq!(m.lie_derivative_vector(&dx, &eta), LForm::basis(&[1], p("1")));
    }

    #[test]
    fn flat_lie_derivative_of_coframe() {
        let m = plane();
        let e1 = PolyVector::basis(&[0], p("1"));
        assert!(m.lie_derivative(&e1, &LForm::basis(&[0], p("1"))).is_zero());
    }
}
