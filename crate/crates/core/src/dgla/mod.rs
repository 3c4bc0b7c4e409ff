//! Graded Lie algebras with differential, tensored with the truncated ideal
//! `h k[[h]]`, and the constructions built from them: the Maurer–Cartan
//! residual, the gauge action of the exponential group, twisted
//! differentials and brackets.
//!
//! Brackets follow the Koszul sign rule: `[x, y] = -(-1)^{|x||y|} [y, x]`.

mod abelian;
pub mod lie;

use std::fmt;

pub use abelian::{AbelianModel, CochainVector};
pub use lie::{bch_with, exp_ad_with, LieOps};

use crate::error::{Error, Result};
use crate::formal::{factorial, rat, series_is_zero_mod, Additive, HbarSeries, Poly, Rational};

/// A differential graded Lie algebra over the rationals. Elements are
/// homogeneous and carry their degree.
pub trait Dgla: Send + Sync {
    type Elem: Additive;

    fn name(&self) -> String;
    fn degree_of(&self, x: &Self::Elem) -> i32;
    fn zero(&self, degree: i32) -> Self::Elem;
    fn differential(&self, x: &Self::Elem) -> Self::Elem;
    fn bracket(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;

    /// True when all degrees below -1 vanish.
    fn is_quantum_type(&self) -> bool {
        true
    }

    /// Denominators appearing in the coefficients of `x`.
    fn denominators(&self, _x: &Self::Elem) -> Vec<Poly> {
        Vec::new()
    }
}

/// Homogeneous element of `g ⊗ k[h]/(h^(N+1))`.
pub struct GradedElement<D: Dgla> {
    degree: i32,
    value: HbarSeries<D::Elem>,
}

impl<D: Dgla> Clone for GradedElement<D> {
    fn clone(&self) -> Self {
        GradedElement { degree: self.degree, value: self.value.clone() }
    }
}

impl<D: Dgla> PartialEq for GradedElement<D> {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.value == other.value
    }
}

impl<D: Dgla> fmt::Debug for GradedElement<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "deg {} {:?}", self.degree, self.value)
    }
}

impl<D: Dgla> GradedElement<D> {
    /// Checks that every coefficient is homogeneous of `degree`.
    pub fn new(model: &D, degree: i32, value: HbarSeries<D::Elem>) -> Result<Self> {
        for c in value.coeffs() {
            let found = model.degree_of(c);
            if found != degree {
                return Err(Error::Degree { expected: degree, found });
            }
        }
        Ok(GradedElement { degree, value })
    }

    pub fn zero(model: &D, degree: i32, order: usize) -> Self {
        GradedElement { degree, value: HbarSeries::zero(&model.zero(degree), order) }
    }

    /// `c h^k`, truncated at `order`.
    pub fn monomial(model: &D, c: D::Elem, k: usize, order: usize) -> Self {
        let degree = model.degree_of(&c);
        GradedElement { degree, value: HbarSeries::monomial(c, k, order) }
    }

    /// Builds from coefficients `c_0, c_1, ...`, padding to `order`.
    pub fn from_coeffs(model: &D, degree: i32, coeffs: Vec<D::Elem>, order: usize) -> Result<Self> {
        let mut coeffs = coeffs;
        if coeffs.len() > order + 1 {
            coeffs.truncate(order + 1);
        }
        while coeffs.len() < order + 1 {
            coeffs.push(model.zero(degree));
        }
        Self::new(model, degree, HbarSeries::from_coeffs(coeffs))
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.value.order()
    }

    pub fn value(&self) -> &HbarSeries<D::Elem> {
        &self.value
    }

    pub fn coeff(&self, k: usize) -> &D::Elem {
        self.value.coeff(k)
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// True iff the coefficients below `h^i` vanish.
    pub fn is_zero_mod(&self, i: usize) -> bool {
        series_is_zero_mod(&self.value, i)
    }

    pub fn valuation(&self) -> Option<usize> {
        self.value.valuation()
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.degree, other.degree);
        GradedElement { degree: self.degree, value: self.value.add(&other.value) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.degree, other.degree);
        GradedElement { degree: self.degree, value: self.value.sub(&other.value) }
    }

    pub fn neg(&self) -> Self {
        GradedElement { degree: self.degree, value: self.value.neg() }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        GradedElement { degree: self.degree, value: self.value.scale(c) }
    }

    /// Multiplication by `h^k`.
    pub fn shift(&self, k: usize) -> Self {
        GradedElement { degree: self.degree, value: self.value.shift(k) }
    }

    /// Only the `h^k` coefficient.
    pub fn part(&self, k: usize) -> Self {
        GradedElement { degree: self.degree, value: self.value.part(k) }
    }

    pub fn truncate(&self, m: usize) -> Self {
        GradedElement { degree: self.degree, value: self.value.truncate(m) }
    }

    pub fn map(&self, f: impl Fn(&D::Elem) -> D::Elem) -> Self {
        GradedElement { degree: self.degree, value: self.value.map(f) }
    }

    pub fn check_degree(&self, expected: i32) -> Result<()> {
        if self.degree == expected {
            Ok(())
        } else {
            Err(Error::Degree { expected, found: self.degree })
        }
    }

    pub fn check_order(&self, other: &Self) -> Result<()> {
        self.value.check_order(&other.value)
    }

    fn check_ideal(&self) -> Result<()> {
        if self.coeff(0).is_zero() {
            Ok(())
        } else {
            Err(Error::NotInIdeal(format!("{:?}", self.coeff(0))))
        }
    }
}

/// `d x`, coefficientwise.
pub fn differential<D: Dgla>(model: &D, x: &GradedElement<D>) -> GradedElement<D> {
    GradedElement { degree: x.degree + 1, value: x.value.map(|c| model.differential(c)) }
}

/// `[x, y]`, truncated Cauchy product of the coefficient brackets.
pub fn bracket<D: Dgla>(model: &D, x: &GradedElement<D>, y: &GradedElement<D>) -> GradedElement<D> {
    let degree = x.degree + y.degree;
    let zero = model.zero(degree);
    GradedElement { degree, value: x.value.bilinear(&y.value, |a, b| model.bracket(a, b), &zero) }
}

/// `d Pi + 1/2 [Pi, Pi]`.
pub fn mc_residual<D: Dgla>(model: &D, pi: &GradedElement<D>) -> Result<GradedElement<D>> {
    pi.check_degree(1)?;
    let half = bracket(model, pi, pi).scale(&rat(1, 2));
    Ok(differential(model, pi).add(&half))
}

pub fn is_mc<D: Dgla>(model: &D, pi: &GradedElement<D>) -> Result<bool> {
    Ok(mc_residual(model, pi)?.is_zero())
}

/// `d x + [Pi, x]`.
pub fn twisted_differential<D: Dgla>(
    model: &D,
    pi: &GradedElement<D>,
    x: &GradedElement<D>,
) -> Result<GradedElement<D>> {
    pi.check_degree(1)?;
    pi.check_order(x)?;
    Ok(differential(model, x).add(&bracket(model, pi, x)))
}

/// `[u, v]_Pi = [d_Pi u, v]` on degree -1.
pub fn twisted_bracket<D: Dgla>(
    model: &D,
    pi: &GradedElement<D>,
    u: &GradedElement<D>,
    v: &GradedElement<D>,
) -> Result<GradedElement<D>> {
    u.check_degree(-1)?;
    v.check_degree(-1)?;
    let du = twisted_differential(model, pi, u)?;
    Ok(bracket(model, &du, v))
}

/// Degree-0 part of `g ⊗ m` as a Lie algebra.
pub struct DegreeZero<'a, D: Dgla> {
    pub model: &'a D,
    pub order: usize,
}

impl<D: Dgla> LieOps for DegreeZero<'_, D> {
    type T = GradedElement<D>;
    fn zero(&self) -> Self::T {
        GradedElement::zero(self.model, 0, self.order)
    }
    fn is_zero(&self, a: &Self::T) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Self::T, b: &Self::T) -> Self::T {
        a.add(b)
    }
    fn scale(&self, a: &Self::T, c: &Rational) -> Self::T {
        a.scale(c)
    }
    fn bracket(&self, a: &Self::T, b: &Self::T) -> Self::T {
        bracket(self.model, a, b)
    }
}

/// Degree -1 part of `g ⊗ m` with the `Pi`-twisted bracket.
pub struct TwistedMinusOne<'a, D: Dgla> {
    pub model: &'a D,
    pub pi: &'a GradedElement<D>,
}

impl<D: Dgla> LieOps for TwistedMinusOne<'_, D> {
    type T = GradedElement<D>;
    fn zero(&self) -> Self::T {
        GradedElement::zero(self.model, -1, self.pi.order())
    }
    fn is_zero(&self, a: &Self::T) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Self::T, b: &Self::T) -> Self::T {
        a.add(b)
    }
    fn scale(&self, a: &Self::T, c: &Rational) -> Self::T {
        a.scale(c)
    }
    fn bracket(&self, a: &Self::T, b: &Self::T) -> Self::T {
        let da = differential(self.model, a).add(&bracket(self.model, self.pi, a));
        bracket(self.model, &da, b)
    }
}

/// Element `exp(q)` of the prounipotent gauge group, stored by its log.
pub struct GaugeElement<D: Dgla> {
    log: GradedElement<D>,
}

impl<D: Dgla> Clone for GaugeElement<D> {
    fn clone(&self) -> Self {
        GaugeElement { log: self.log.clone() }
    }
}

impl<D: Dgla> PartialEq for GaugeElement<D> {
    fn eq(&self, other: &Self) -> bool {
        self.log == other.log
    }
}

impl<D: Dgla> fmt::Debug for GaugeElement<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "exp({:?})", self.log)
    }
}

impl<D: Dgla> GaugeElement<D> {
    pub fn new(log: GradedElement<D>) -> Result<Self> {
        log.check_degree(0)?;
        log.check_ideal()?;
        Ok(GaugeElement { log })
    }

    pub fn identity(model: &D, order: usize) -> Self {
        GaugeElement { log: GradedElement::zero(model, 0, order) }
    }

    pub fn log(&self) -> &GradedElement<D> {
        &self.log
    }

    pub fn into_log(self) -> GradedElement<D> {
        self.log
    }

    pub fn is_identity(&self) -> bool {
        self.log.is_zero()
    }

    pub fn inverse(&self) -> Self {
        GaugeElement { log: self.log.neg() }
    }
}

/// 2-cell `exp(u)` based at the Maurer–Cartan element `base`.
pub struct TwoCellElement<D: Dgla> {
    log: GradedElement<D>,
    base: GradedElement<D>,
}

impl<D: Dgla> Clone for TwoCellElement<D> {
    fn clone(&self) -> Self {
        TwoCellElement { log: self.log.clone(), base: self.base.clone() }
    }
}

impl<D: Dgla> PartialEq for TwoCellElement<D> {
    fn eq(&self, other: &Self) -> bool {
        self.log == other.log && self.base == other.base
    }
}

impl<D: Dgla> fmt::Debug for TwoCellElement<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "exp({:?}) at {:?}", self.log, self.base)
    }
}

impl<D: Dgla> TwoCellElement<D> {
    pub fn new(log: GradedElement<D>, base: GradedElement<D>) -> Result<Self> {
        log.check_degree(-1)?;
        base.check_degree(1)?;
        log.check_order(&base)?;
        log.check_ideal()?;
        Ok(TwoCellElement { log, base })
    }

    pub fn identity(model: &D, base: &GradedElement<D>) -> Self {
        TwoCellElement { log: GradedElement::zero(model, -1, base.order()), base: base.clone() }
    }

    pub fn log(&self) -> &GradedElement<D> {
        &self.log
    }

    pub fn base(&self) -> &GradedElement<D> {
        &self.base
    }

    pub fn is_identity(&self) -> bool {
        self.log.is_zero()
    }
}

/// `exp(q) . Pi = Pi - sum_n ad(q)^n / (n+1)! (d_Pi q)`.
pub fn gauge_apply<D: Dgla>(
    model: &D,
    q: &GaugeElement<D>,
    pi: &GradedElement<D>,
) -> Result<GradedElement<D>> {
    pi.check_degree(1)?;
    let q = q.log();
    q.check_degree(0)?;
    pi.check_order(q)?;
    let mut term = twisted_differential(model, pi, q)?;
    let mut out = pi.clone();
    let n_max = pi.order();
    for n in 0..=n_max {
        if term.is_zero() {
            break;
        }
        out = out.sub(&term.scale(&factorial(n + 1).recip()));
        term = bracket(model, q, &term);
    }
    Ok(out)
}

/// `log(exp(q1) exp(q2))`.
pub fn bch<D: Dgla>(model: &D, q1: &GaugeElement<D>, q2: &GaugeElement<D>) -> Result<GaugeElement<D>> {
    q1.log.check_order(&q2.log)?;
    let n = q1.log.order();
    let lie = DegreeZero { model, order: n };
    Ok(GaugeElement { log: bch_with(&lie, &q1.log, &q2.log, n) })
}

/// BCH product in the `Pi`-twisted degree -1 algebra.
pub fn bch_twisted<D: Dgla>(
    model: &D,
    pi: &GradedElement<D>,
    u: &GradedElement<D>,
    v: &GradedElement<D>,
) -> Result<GradedElement<D>> {
    u.check_degree(-1)?;
    v.check_degree(-1)?;
    pi.check_degree(1)?;
    u.check_order(v)?;
    u.check_order(pi)?;
    let lie = TwistedMinusOne { model, pi };
    Ok(bch_with(&lie, u, v, pi.order()))
}

/// Left fold of [`bch_twisted`] over a nonempty list.
pub fn bch_twisted_all<D: Dgla>(
    model: &D,
    pi: &GradedElement<D>,
    items: &[GradedElement<D>],
) -> Result<GradedElement<D>> {
    let mut acc = GradedElement::zero(model, -1, pi.order());
    for u in items {
        acc = bch_twisted(model, pi, &acc, u)?;
    }
    Ok(acc)
}

/// `e^{sign * ad q} x` for degree-0 `q`.
pub fn exp_ad<D: Dgla>(
    model: &D,
    q: &GradedElement<D>,
    x: &GradedElement<D>,
    sign: i64,
) -> Result<GradedElement<D>> {
    q.check_degree(0)?;
    q.check_order(x)?;
    let lie = DegreeZero { model, order: x.order() };
    Ok(exp_ad_with(&lie, q, x, sign, x.order()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formal::int;

    #[test]
    fn abelian_gauge_is_translation() {
        let m = AbelianModel::koszul(vec![int(1), int(2), int(0)]);
        let q0 = m.vector(0, vec![int(1), int(0), int(3)]).unwrap();
        let q = GaugeElement::new(GradedElement::monomial(&m, q0.clone(), 1, 2)).unwrap();
        let pi = GradedElement::zero(&m, 1, 2);
        let out = gauge_apply(&m, &q, &pi).unwrap();
        let expected = GradedElement::monomial(&m, m.differential(&q0), 1, 2).neg();
        assert_eq!(out, expected);
        assert!(is_mc(&m, &out).unwrap());
    }

    #[test]
    fn gauge_log_must_vanish_mod_h() {
        let m = AbelianModel::koszul(vec![int(1), int(0), int(0)]);
        let q0 = m.vector(0, vec![int(1), int(0), int(0)]).unwrap();
        let e = GaugeElement::new(GradedElement::monomial(&m, q0, 0, 2));
        assert!(matches!(e, Err(Error::NotInIdeal(_))));
    }

    #[test]
    fn residual_needs_degree_one() {
        let m = AbelianModel::koszul(vec![int(1), int(0), int(0)]);
        let x = GradedElement::zero(&m, 0, 1);
        assert_eq!(mc_residual(&m, &x), Err(Error::Degree { expected: 1, found: 0 }));
    }
}
