use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::{Additive, CoeffRing, Rational, Ring};
use crate::error::{Error, Result};

/// Exponent vector. Ordered graded-lexicographically: total degree first,
/// then lexicographically with the first declared variable most significant.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming divisibility.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial with rational coefficients over an ordered
/// list of variables. No zero coefficient is ever stored.
#[derive(Clone)]
pub struct Poly {
    vars: Arc<Vec<String>>,
    terms: BTreeMap<Monomial, Rational>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars)
            && self.terms == other.terms
    }
}

impl Eq for Poly {}

impl std::hash::Hash for Poly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.vars.hash(state);
        for (m, c) in &self.terms {
            m.hash(state);
            c.hash(state);
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Mul,
}

/// Checked polynomial arithmetic; fails when the variable lists differ.
pub fn poly_arith(a: &Poly, b: &Poly, op: PolyOp) -> Result<Poly> {
    a.check_vars(b)?;
    Ok(match op {
        PolyOp::Add => a.add_poly(b),
        PolyOp::Mul => a.mul_poly(b),
    })
}

impl Poly {
    pub fn zero<S: AsRef<str>>(vars: &[S]) -> Self {
        Poly {
            vars: Arc::new(vars.iter().map(|s| s.as_ref().to_string()).collect()),
            terms: BTreeMap::new(),
        }
    }

    pub fn zero_in(vars: Arc<Vec<String>>) -> Self {
        Poly { vars, terms: BTreeMap::new() }
    }

    pub fn constant_in(vars: Arc<Vec<String>>, c: Rational) -> Self {
        let n = vars.len();
        let mut p = Poly::zero_in(vars);
        p.add_term(Monomial::one(n), c);
        p
    }

    pub fn var<S: AsRef<str>>(vars: &[S], i: usize) -> Self {
        let mut p = Poly::zero(vars);
        let n = p.nvars();
        p.add_term(Monomial::var(n, i), Rational::one());
        p
    }

    pub fn from_terms(vars: Arc<Vec<String>>, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Poly::zero_in(vars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn shared_vars(&self) -> &Arc<Vec<String>> {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Rational> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn check_vars(&self, other: &Poly) -> Result<()> {
        if Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars {
            Ok(())
        } else {
            Err(Error::VariableMismatch {
                left: self.vars.to_vec(),
                right: other.vars.to_vec(),
            })
        }
    }

    fn assert_vars(&self, other: &Poly) {
        if let Err(e) = self.check_vars(other) {
            panic!("{e}");
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        debug_assert_eq!(m.0.len(), self.nvars());
        if Zero::is_zero(&c) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if Zero::is_zero(o.get()) {
                    o.remove();
                }
            }
        }
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::one(self.nvars()))
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Leading term under graded lexicographic order.
    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn add_poly(&self, other: &Poly) -> Poly {
        self.assert_vars(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub_poly(&self, other: &Poly) -> Poly {
        self.assert_vars(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn mul_poly(&self, other: &Poly) -> Poly {
        self.assert_vars(other);
        let mut out = Poly::zero_in(self.vars.clone());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn scale_by(&self, c: &Rational) -> Poly {
        if Zero::is_zero(c) {
            return Poly::zero_in(self.vars.clone());
        }
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Poly {
        if Zero::is_zero(c) {
            return Poly::zero_in(self.vars.clone());
        }
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::constant_in(self.vars.clone(), Rational::one());
        for _ in 0..e {
            acc = acc.mul_poly(self);
        }
        acc
    }

    pub fn derivative(&self, var: usize) -> Poly {
        let mut out = Poly::zero_in(self.vars.clone());
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[var] -= 1;
            out.add_term(m2, c * Rational::from_integer(e.into()));
        }
        out
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                for _ in 0..e {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }

    /// Divides by the leading coefficient; zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = c.recip();
                self.scale_by(&inv)
            }
        }
    }

    /// Quotient when `divisor` divides `self` exactly.
    pub fn exact_div(&self, divisor: &Poly) -> Option<Poly> {
        self.assert_vars(divisor);
        let (lm, lc) = divisor.leading()?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quot = Poly::zero_in(self.vars.clone());
        while let Some((m, c)) = rem.leading() {
            if !lm.divides(m) {
                return None;
            }
            let qm = lm.quotient_of(m);
            let qc = c / &lc;
            rem = rem.sub_poly(&divisor.mul_monomial(&qm, &qc));
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    /// Coefficients as a polynomial in `var`, each free of `var`.
    fn coeffs_in(&self, var: usize) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.0[var];
            let mut m2 = m.clone();
            m2.0[var] = 0;
            out.entry(e)
                .or_insert_with(|| Poly::zero_in(self.vars.clone()))
                .add_term(m2, c.clone());
        }
        out
    }

    fn lead_coeff_in(&self, var: usize) -> Poly {
        let d = self.degree_in(var);
        self.coeffs_in(var)
            .remove(&d)
            .unwrap_or_else(|| Poly::zero_in(self.vars.clone()))
    }

    fn content_in(&self, var: usize) -> Poly {
        let mut g = Poly::zero_in(self.vars.clone());
        for c in self.coeffs_in(var).into_values() {
            g = g.gcd(&c);
            if g.is_constant() && !g.is_empty() {
                break;
            }
        }
        g
    }

    /// `lc(divisor)^(deg self - deg divisor + 1) * self` reduced modulo
    /// `divisor`, all degrees in `var`.
    fn pseudo_rem(&self, divisor: &Poly, var: usize) -> Poly {
        let db = divisor.degree_in(var);
        let lb = divisor.lead_coeff_in(var);
        let mut r = self.clone();
        let mut steps = (self.degree_in(var) + 1).saturating_sub(db);
        while !r.is_empty() && r.degree_in(var) >= db {
            let dr = r.degree_in(var);
            let lr = r.lead_coeff_in(var);
            let mut shift = Monomial::one(self.nvars());
            shift.0[var] = dr - db;
            let t = divisor.mul_poly(&lr).mul_monomial(&shift, &Rational::one());
            r = r.mul_poly(&lb).sub_poly(&t);
            steps -= 1;
        }
        r.mul_poly(&lb.pow(steps))
    }

    fn first_var(&self) -> Option<usize> {
        (0..self.nvars()).find(|&i| self.terms.keys().any(|m| m.0[i] > 0))
    }

    /// Monic greatest common divisor (recursive subresultant remainder sequences).
    pub fn gcd(&self, other: &Poly) -> Poly {
        self.assert_vars(other);
        if self.is_empty() {
            return other.monic();
        }
        if other.is_empty() {
            return self.monic();
        }
        let one = Poly::constant_in(self.vars.clone(), Rational::one());
        if self.is_constant() || other.is_constant() {
            return one;
        }
        let v = match (self.first_var(), other.first_var()) {
            (Some(a), Some(b)) => a.min(b),
            _ => return one,
        };
        if self.degree_in(v) == 0 {
            return self.gcd(&other.content_in(v));
        }
        if other.degree_in(v) == 0 {
            return self.content_in(v).gcd(other);
        }
        let ca = self.content_in(v);
        let cb = other.content_in(v);
        let content = ca.gcd(&cb);
        let pa = self.exact_div(&ca).expect("content divides");
        let pb = other.exact_div(&cb).expect("content divides");
        let (mut r0, mut r1) = if pa.degree_in(v) >= pb.degree_in(v) {
            (pa, pb)
        } else {
            (pb, pa)
        };
        // subresultant remainder sequence
        let mut lead = one.clone();
        let mut h = one.clone();
        let g = loop {
            let delta = r0.degree_in(v) - r1.degree_in(v);
            let r = r0.pseudo_rem(&r1, v);
            if r.is_empty() {
                break r1;
            }
            if r.degree_in(v) == 0 {
                break one.clone();
            }
            let scale = lead.mul_poly(&h.pow(delta));
            r0 = r1;
            r1 = r.exact_div(&scale).expect("subresultant divides");
            lead = r0.lead_coeff_in(v);
            h = if delta == 0 {
                h
            } else {
                lead.pow(delta).exact_div(&h.pow(delta - 1)).expect("subresultant divides")
            };
        };
        let gc = g.content_in(v);
        let g = if g.is_constant() { g } else { g.exact_div(&gc).expect("content divides") };
        content.mul_poly(&g).monic()
    }

    fn fmt_monomial(&self, m: &Monomial) -> String {
        let mut parts = Vec::new();
        for (name, &e) in self.vars.iter().zip(&m.0) {
            match e {
                0 => {}
                1 => parts.push(name.clone()),
                _ => parts.push(format!("{name}^{e}")),
            }
        }
        parts.join("*")
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

/// Terms are printed in decreasing graded-lex order, e.g. `x^2 - 3/2*x*y + 1`.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let mono = self.fmt_monomial(m);
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{abs}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl Additive for Poly {
    fn zero_like(&self) -> Self {
        Poly::zero_in(self.vars.clone())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        self.add_poly(other)
    }
    fn sub(&self, other: &Self) -> Self {
        self.sub_poly(other)
    }
    fn neg(&self) -> Self {
        self.scale_by(&-Rational::one())
    }
    fn scale(&self, c: &Rational) -> Self {
        self.scale_by(c)
    }
    fn compatible(&self, other: &Self) -> bool {
        self.check_vars(other).is_ok()
    }
}

impl Ring for Poly {
    fn one_like(&self) -> Self {
        Poly::constant_in(self.vars.clone(), Rational::one())
    }
    fn mul(&self, other: &Self) -> Self {
        self.mul_poly(other)
    }
}

impl CoeffRing for Poly {
    fn vars(&self) -> &[String] {
        &self.vars
    }
    fn from_poly(p: Poly) -> Self {
        p
    }
    fn partial(&self, var: usize) -> Self {
        self.derivative(var)
    }
    fn try_inverse(&self) -> Option<Self> {
        if self.is_constant() && !self.is_empty() {
            Some(self.one_like().scale_by(&self.constant_term().recip()))
        } else {
            None
        }
    }
    fn denominator(&self) -> Option<Poly> {
        None
    }
    fn as_constant(&self) -> Option<Rational> {
        self.is_constant().then(|| self.constant_term())
    }
    fn as_poly(&self) -> Option<Poly> {
        Some(self.clone())
    }
}
