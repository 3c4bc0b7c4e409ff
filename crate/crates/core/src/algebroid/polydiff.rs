use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use super::AlgebroidModel;
use crate::dgla::Dgla;
use crate::error::{Error, Result};
use crate::formal::{Additive, CoeffRing, Poly, Rational};

/// One multi-index of derivatives per argument slot.
pub type SlotKey = Vec<Vec<u32>>;

fn merge<C: Additive>(map: &mut BTreeMap<SlotKey, C>, key: SlotKey, c: C) {
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

/// Multidifferential operator `sum c ∂^{α_1} ⊗ .. ⊗ ∂^{α_n}` with `n`
/// slots and Lie degree `n - 1`. Degree -1 elements are functions.
#[derive(Clone, PartialEq)]
pub struct PolyDiff<C> {
    degree: i32,
    terms: BTreeMap<SlotKey, C>,
}

impl<C: CoeffRing> PolyDiff<C> {
    pub fn zero(degree: i32) -> Self {
        PolyDiff { degree, terms: BTreeMap::new() }
    }

    pub fn function(f: C) -> Self {
        let mut out = Self::zero(-1);
        merge(&mut out.terms, Vec::new(), f);
        out
    }

    /// `c ∂^{slots[0]} ⊗ ∂^{slots[1]} ⊗ ..`.
    pub fn term(slots: SlotKey, c: C) -> Self {
        let mut out = Self::zero(slots.len() as i32 - 1);
        merge(&mut out.terms, slots, c);
        out
    }

    pub fn from_terms(degree: i32, terms: impl IntoIterator<Item = (SlotKey, C)>) -> Self {
        let mut out = Self::zero(degree);
        for (k, c) in terms {
            assert_eq!(k.len() as i32, degree + 1, "slot count must be Lie degree + 1");
            merge(&mut out.terms, k, c);
        }
        out
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn slots(&self) -> usize {
        (self.degree + 1) as usize
    }

    pub fn terms(&self) -> &BTreeMap<SlotKey, C> {
        &self.terms
    }

    pub fn map_coeffs(&self, f: impl Fn(&C) -> C) -> Self {
        let mut out = Self::zero(self.degree);
        for (k, c) in &self.terms {
            merge(&mut out.terms, k.clone(), f(c));
        }
        out
    }

    /// Largest number of derivatives in any single slot.
    pub fn max_slot_order(&self) -> u32 {
        self.terms
            .keys()
            .flat_map(|k| k.iter().map(|a| a.iter().sum::<u32>()))
            .max()
            .unwrap_or(0)
    }
}

impl<C: CoeffRing> Additive for PolyDiff<C> {
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
            merge(&mut out.terms, k.clone(), c.clone());
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

impl<C: CoeffRing> fmt::Debug for PolyDiff<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<C: CoeffRing> fmt::Display for PolyDiff<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| {
                let slots: Vec<String> = k
                    .iter()
                    .map(|a| {
                        let s: Vec<String> = a.iter().map(|e| e.to_string()).collect();
                        format!("D[{}]", s.join(","))
                    })
                    .collect();
                if slots.is_empty() {
                    format!("({c})")
                } else {
                    format!("({c})*{}", slots.join("(x)"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// All ways to write `alpha = g_0 + .. + g_m` as multi-indices, with the
/// multinomial weight `prod_v alpha_v! / prod g_{j,v}!`.
fn distributions(alpha: &[u32], parts: usize) -> Vec<(Vec<Vec<u32>>, BigInt)> {
    let mut out: Vec<(Vec<Vec<u32>>, BigInt)> = vec![(vec![vec![0; alpha.len()]; parts], BigInt::from(1))];
    for (v, &a) in alpha.iter().enumerate() {
        let mut next = Vec::new();
        for (split, w) in &out {
            for comp in weak_compositions(a, parts) {
                let mut s = split.clone();
                let mut weight = w.clone();
                let mut rem = a;
                for (j, &c) in comp.iter().enumerate() {
                    s[j][v] = c;
                    weight *= binomial(rem, c);
                    rem -= c;
                }
                next.push((s, weight));
            }
        }
        out = next;
    }
    out
}

fn weak_compositions(n: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 1 {
        return vec![vec![n]];
    }
    let mut out = Vec::new();
    for first in 0..=n {
        for mut rest in weak_compositions(n - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn binomial(n: u32, k: u32) -> BigInt {
    let mut acc = BigInt::from(1);
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn apply_multi<C: CoeffRing>(f: &C, alpha: &[u32]) -> C {
    let mut g = f.clone();
    for (v, &e) in alpha.iter().enumerate() {
        for _ in 0..e {
            if g.is_zero() {
                return g;
            }
            g = g.partial(v);
        }
    }
    g
}

/// Polydifferential operators on a coordinate chart with the Gerstenhaber
/// bracket and the Hochschild differential `d_H = [μ, -]`.
///
/// Composition: `P ∘ Q = sum_i (-1)^(i |Q|) P ∘_i Q` (slots counted from 0)
/// and `[P, Q] = P ∘ Q - (-1)^(|P||Q|) Q ∘ P`, with `|P|` the Lie degree.
#[derive(Clone, Debug)]
pub struct PolyDiffModel<C> {
    zero: C,
    nvars: usize,
}

impl<C: CoeffRing> PolyDiffModel<C> {
    pub fn new(zero: C) -> Self {
        let nvars = zero.vars().len();
        PolyDiffModel { zero, nvars }
    }

    /// Only the tangent algebroid is supported: its operators are the
    /// coordinate multidifferential operators.
    pub fn for_algebroid(model: &AlgebroidModel<C>) -> Result<Self> {
        if !model.is_tangent() {
            return Err(Error::ModelMismatch(
                "polydifferential operators are available for the tangent algebroid only".into(),
            ));
        }
        Ok(Self::new(model.zero_coeff().clone()))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn zero_coeff(&self) -> &C {
        &self.zero
    }

    pub fn vars(&self) -> &[String] {
        self.zero.vars()
    }

    /// Multiplication `μ(f, g) = f g`.
    pub fn mu(&self) -> PolyDiff<C> {
        PolyDiff::term(vec![vec![0; self.nvars]; 2], self.zero.one_like())
    }

    /// `∂_v` as a multi-index.
    pub fn unit(&self, v: usize) -> Vec<u32> {
        let mut a = vec![0; self.nvars];
        a[v] = 1;
        a
    }

    /// `P ∘_i Q`: `Q` inserted into slot `i` of `P`.
    pub fn insert(&self, p: &PolyDiff<C>, i: usize, q: &PolyDiff<C>) -> PolyDiff<C> {
        let qs = q.slots();
        let mut out = PolyDiff::zero(p.degree + q.degree);
        for (pk, pc) in &p.terms {
            for (qk, qc) in &q.terms {
                for (split, w) in distributions(&pk[i], qs + 1) {
                    let dq = apply_multi(qc, &split[0]);
                    if dq.is_zero() {
                        continue;
                    }
                    let mut key: SlotKey = Vec::with_capacity(pk.len() + qs - 1);
                    key.extend(pk[..i].iter().cloned());
                    for j in 0..qs {
                        key.push(qk[j].iter().zip(&split[j + 1]).map(|(a, b)| a + b).collect());
                    }
                    key.extend(pk[i + 1..].iter().cloned());
                    let c = pc.mul(&dq).scale(&Rational::from_integer(w));
                    merge(&mut out.terms, key, c);
                }
            }
        }
        out
    }

    /// `P ∘ Q = sum_i (-1)^(i |Q|) P ∘_i Q`.
    pub fn compose(&self, p: &PolyDiff<C>, q: &PolyDiff<C>) -> PolyDiff<C> {
        let mut out = PolyDiff::zero(p.degree + q.degree);
        // zero operands may carry degrees below -1, where there are no slots
        if p.terms.is_empty() || q.terms.is_empty() || out.degree < -1 {
            return out;
        }
        for i in 0..p.slots() {
            let t = self.insert(p, i, q);
            let odd = (i as i64 * q.degree as i64) % 2 != 0;
            out = if odd { out.sub(&t) } else { out.add(&t) };
        }
        out
    }

    pub fn gerstenhaber(&self, p: &PolyDiff<C>, q: &PolyDiff<C>) -> PolyDiff<C> {
        let a = self.compose(p, q);
        let b = self.compose(q, p);
        if (p.degree as i64 * q.degree as i64) % 2 == 0 {
            a.sub(&b)
        } else {
            a.add(&b)
        }
    }

    pub fn hochschild_diff(&self, p: &PolyDiff<C>) -> PolyDiff<C> {
        self.gerstenhaber(&self.mu(), p)
    }

    /// `P(f_1, .., f_n)`.
    pub fn evaluate(&self, p: &PolyDiff<C>, args: &[C]) -> Result<C> {
        if args.len() != p.slots() {
            return Err(Error::Shape(format!("operator has {} slots, got {} arguments", p.slots(), args.len())));
        }
        let mut acc = self.zero.clone();
        for (k, c) in &p.terms {
            let mut t = c.clone();
            for (alpha, f) in k.iter().zip(args) {
                t = t.mul(&apply_multi(f, alpha));
                if t.is_zero() {
                    break;
                }
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    /// True iff `P` vanishes as soon as one argument is constant. Applies to
    /// operators with at least one slot.
    pub fn normalized_subcomplex_check(&self, p: &PolyDiff<C>) -> bool {
        p.slots() == 0 || p.terms.keys().all(|k| k.iter().all(|a| a.iter().any(|&e| e > 0)))
    }
}

impl<C: CoeffRing> Dgla for PolyDiffModel<C> {
    type Elem = PolyDiff<C>;

    fn name(&self) -> String {
        "polydiff".into()
    }
    fn degree_of(&self, x: &PolyDiff<C>) -> i32 {
        x.degree
    }
    fn zero(&self, degree: i32) -> PolyDiff<C> {
        PolyDiff::zero(degree)
    }
    fn differential(&self, x: &PolyDiff<C>) -> PolyDiff<C> {
        self.hochschild_diff(x)
    }
    fn bracket(&self, x: &PolyDiff<C>, y: &PolyDiff<C>) -> PolyDiff<C> {
        self.gerstenhaber(x, y)
    }
    fn denominators(&self, x: &PolyDiff<C>) -> Vec<Poly> {
        x.terms.values().filter_map(|c| c.denominator()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formal::{parse_poly, Ring};

    fn p1(s: &str) -> Poly {
        parse_poly(s, &["x"]).unwrap()
    }

    fn line() -> PolyDiffModel<Poly> {
        PolyDiffModel::new(p1("0"))
    }

    #[test]
    fn mu_is_associative() {
        let m = line();
        assert!(m.gerstenhaber(&m.mu(), &m.mu()).is_zero());
    }

    #[test]
    fn derivations_are_cocycles() {
        let m = line();
        let d = PolyDiff::term(vec![vec![1]], p1("x^2 + 1"));
        assert!(m.hochschild_diff(&d).is_zero());
    }

    #[test]
    fn hochschild_of_second_derivative() {
        let m = line();
        let d2 = PolyDiff::term(vec![vec![2]], p1("1"));
        let expect = PolyDiff::term(vec![vec![1], vec![1]], p1("-2"));
        assert_eq!(m.hochschild_diff(&d2), expect);
        let f = p1("x^3");
        let g = p1("x^2 + x");
        let v = m.evaluate(&m.hochschild_diff(&d2), &[f.clone(), g.clone()]).unwrap();
        // f φ(g) - φ(fg) + φ(f) g
        let phi = |h: &Poly| h.derivative(0).derivative(0);
        let oracle = f.mul(&phi(&g)).sub(&phi(&f.mul(&g))).add(&phi(&f).mul(&g));
        assert_eq!(v, oracle);
    }

    #[test]
    fn normalized_check() {
        let m = PolyDiffModel::new(parse_poly("0", &["x", "y"]).unwrap());
        let one = parse_poly("1", &["x", "y"]).unwrap();
        let dd = PolyDiff::term(vec![vec![1, 0], vec![0, 1]], one.clone());
        assert!(m.normalized_subcomplex_check(&dd));
        let idd = PolyDiff::term(vec![vec![0, 0], vec![0, 1]], one);
        assert!(!m.normalized_subcomplex_check(&idd));
    }

    #[test]
    fn multinomial_weights() {
        let total: BigInt = distributions(&[2, 1], 3).into_iter().map(|(_, w)| w).sum();
        // 3^2 * 3^1
        assert_eq!(total, BigInt::from(27));
    }
}
