//! Weak Maurer–Cartan triples `(Π, g, a)` over the Čech object of a cover
//! and the weak equivalences between them.
//!
//! Index conventions, for `i < j < k < l` in the cover:
//!
//! 1. `Π_i` is Maurer–Cartan;
//! 2. `g_ij · Π_i = Π_j`;
//! 3. `g_jk g_ij exp(d_{Π_i} a_ijk) = g_ik`;
//! 4. `a_ijk * a_ikl = (e^{-ad g_ij} a_jkl) * a_ijl` in the `Π_i`-twisted group.
//!
//! `a_ijk` is stored by its log, based at `Π_i`.

mod format;
mod normalize;
mod poisson;
mod promote;
mod tot;

use std::collections::BTreeMap;
use std::fmt;

pub use format::{file_header, format_equivalence, format_weak_mc, parse_equivalence, parse_weak_mc_file, WeakMCFile};
pub use normalize::{normalize_acyclic, Normalization};
pub use poisson::{poisson_check, skew_symmetrize_first_order, FirstOrder};
pub use promote::{promote_actual, ConstantFunctions, InvariantProjection, Promotion, PromotionStep};
pub use tot::TotZeroSimplex;

use crate::deligne::tetra_condition;
use crate::dgla::{
    bch, bch_twisted_all, exp_ad, gauge_apply, mc_residual, twisted_differential, Dgla, GaugeElement,
    GradedElement,
};
use crate::error::{Error, Result};
use crate::simplicial::{CosimplicialCech, CoverShape};

pub type Pair = (usize, usize);
pub type Triple = (usize, usize, usize);

pub struct WeakMCTriple<D: Dgla> {
    order: usize,
    pi: BTreeMap<usize, GradedElement<D>>,
    g: BTreeMap<Pair, GaugeElement<D>>,
    a: BTreeMap<Triple, GradedElement<D>>,
}

impl<D: Dgla> Clone for WeakMCTriple<D> {
    fn clone(&self) -> Self {
        WeakMCTriple { order: self.order, pi: self.pi.clone(), g: self.g.clone(), a: self.a.clone() }
    }
}

impl<D: Dgla> PartialEq for WeakMCTriple<D> {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.pi == other.pi && self.g == other.g && self.a == other.a
    }
}

impl<D: Dgla> fmt::Debug for WeakMCTriple<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeakMCTriple").field("pi", &self.pi).field("g", &self.g).field("a", &self.a).finish()
    }
}

pub(crate) fn pairs_of(shape: &CoverShape) -> Vec<Pair> {
    shape.level(1).into_iter().map(|t| (t[0], t[1])).collect()
}

pub(crate) fn triples_of(shape: &CoverShape) -> Vec<Triple> {
    shape.level(2).into_iter().map(|t| (t[0], t[1], t[2])).collect()
}

fn check_keys<K: Ord + fmt::Debug + Copy, V>(what: &str, map: &BTreeMap<K, V>, expected: &[K]) -> Result<()> {
    if let Some(k) = map.keys().find(|k| !expected.contains(k)) {
        return Err(Error::Shape(format!("{what} given on {k:?}, which is not an intersection of the cover")));
    }
    if let Some(k) = expected.iter().find(|k| !map.contains_key(k)) {
        return Err(Error::Shape(format!("{what} missing on {k:?}")));
    }
    Ok(())
}

impl<D: Dgla> WeakMCTriple<D> {
    /// Validates keys against the cover shape and degrees; the four
    /// conditions are checked separately by [`weak_mc_check`].
    pub fn new(
        shape: &CoverShape,
        pi: BTreeMap<usize, GradedElement<D>>,
        g: BTreeMap<Pair, GaugeElement<D>>,
        a: BTreeMap<Triple, GradedElement<D>>,
    ) -> Result<Self> {
        let indices: Vec<usize> = (0..shape.count()).collect();
        check_keys("Π", &pi, &indices)?;
        check_keys("g", &g, &pairs_of(shape))?;
        check_keys("a", &a, &triples_of(shape))?;
        let order = pi.values().next().map(GradedElement::order).unwrap_or(0);
        for x in pi.values() {
            x.check_degree(1)?;
            if x.order() != order {
                return Err(Error::OrderMismatch(order, x.order()));
            }
        }
        for q in g.values() {
            if q.log().order() != order {
                return Err(Error::OrderMismatch(order, q.log().order()));
            }
        }
        for u in a.values() {
            u.check_degree(-1)?;
            if u.order() != order {
                return Err(Error::OrderMismatch(order, u.order()));
            }
            if !u.is_zero_mod(1) {
                return Err(Error::NotInIdeal(format!("{u:?}")));
            }
        }
        Ok(WeakMCTriple { order, pi, g, a })
    }

    /// `(Π, 1, 1)` for one element `Π` restricted to every open.
    pub fn global(model: &D, shape: &CoverShape, pi: &GradedElement<D>) -> Result<Self> {
        let n = pi.order();
        let pis = (0..shape.count()).map(|i| (i, pi.clone())).collect();
        let g = pairs_of(shape).into_iter().map(|p| (p, GaugeElement::identity(model, n))).collect();
        let a = triples_of(shape).into_iter().map(|t| (t, GradedElement::zero(model, -1, n))).collect();
        Self::new(shape, pis, g, a)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn pi(&self, i: usize) -> &GradedElement<D> {
        &self.pi[&i]
    }

    pub fn g(&self, i: usize, j: usize) -> &GaugeElement<D> {
        &self.g[&(i, j)]
    }

    pub fn a(&self, i: usize, j: usize, k: usize) -> &GradedElement<D> {
        &self.a[&(i, j, k)]
    }

    pub fn pi_map(&self) -> &BTreeMap<usize, GradedElement<D>> {
        &self.pi
    }

    pub fn g_map(&self) -> &BTreeMap<Pair, GaugeElement<D>> {
        &self.g
    }

    pub fn a_map(&self) -> &BTreeMap<Triple, GradedElement<D>> {
        &self.a
    }

    /// Whether `g = 1` and `a = 1`.
    pub fn is_normal(&self) -> bool {
        self.g.values().all(GaugeElement::is_identity) && self.a.values().all(GradedElement::is_zero)
    }

    /// Whether `a = 1`, i.e. the triple is an actual deformation.
    pub fn is_actual(&self) -> bool {
        self.a.values().all(GradedElement::is_zero)
    }

    pub(crate) fn with_a(&self, a: BTreeMap<Triple, GradedElement<D>>) -> Self {
        WeakMCTriple { order: self.order, pi: self.pi.clone(), g: self.g.clone(), a }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WeakCondition {
    MaurerCartan,
    Gauge,
    Cocycle,
    Tetrahedron,
}

impl fmt::Display for WeakCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WeakCondition::MaurerCartan => "maurer-cartan",
            WeakCondition::Gauge => "gauge",
            WeakCondition::Cocycle => "cocycle",
            WeakCondition::Tetrahedron => "tetrahedron",
        })
    }
}

/// Lowest `h`-order at which a condition fails, and the first tuple failing
/// there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub order: usize,
    pub tuple: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionResult {
    pub condition: WeakCondition,
    pub checked: usize,
    pub failure: Option<Failure>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeakMCReport {
    pub results: Vec<ConditionResult>,
}

impl WeakMCReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.failure.is_none())
    }

    pub fn failure(&self, c: WeakCondition) -> Option<&Failure> {
        self.results.iter().find(|r| r.condition == c).and_then(|r| r.failure.as_ref())
    }
}

impl fmt::Display for WeakMCReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.results {
            match &r.failure {
                None => writeln!(f, "{:<12} ok ({} tuples)", r.condition, r.checked)?,
                Some(x) => writeln!(f, "{:<12} FAIL at h^{} on {:?}", r.condition, x.order, x.tuple)?,
            }
        }
        Ok(())
    }
}

fn record(slot: &mut Option<Failure>, diff: &GradedElement<impl Dgla>, tuple: Vec<usize>) {
    if let Some(order) = diff.valuation() {
        if slot.as_ref().map_or(true, |f| order < f.order) {
            *slot = Some(Failure { order, tuple });
        }
    }
}

/// Checks the four conditions on every tuple of the cover, plus that each
/// value is defined over its intersection.
pub fn weak_mc_check<D: Dgla>(model: &D, cech: &CosimplicialCech, w: &WeakMCTriple<D>) -> Result<WeakMCReport> {
    let shape = cech.cover().shape();
    let cover = cech.cover();
    check_keys("Π", &w.pi, &(0..shape.count()).collect::<Vec<_>>())?;
    check_keys("g", &w.g, &pairs_of(shape))?;
    check_keys("a", &w.a, &triples_of(shape))?;
    let defined = |t: &[usize], x: &GradedElement<D>| {
        (0..=x.order()).all(|k| cover.admits(t, &model.denominators(x.coeff(k))))
    };
    for (&i, x) in &w.pi {
        if !defined(&[i], x) {
            return Err(Error::Shape(format!("Π_{i} is not defined on U_{i}")));
        }
    }
    for (&(i, j), q) in &w.g {
        if !defined(&[i, j], q.log()) {
            return Err(Error::Shape(format!("g on {:?} is not defined there", [i, j])));
        }
    }
    for (&(i, j, k), u) in &w.a {
        if !defined(&[i, j, k], u) {
            return Err(Error::Shape(format!("a on {:?} is not defined there", [i, j, k])));
        }
    }

    let mut results = Vec::new();
    let mut fail = None;
    for (&i, x) in &w.pi {
        record(&mut fail, &mc_residual(model, x)?, vec![i]);
    }
    results.push(ConditionResult { condition: WeakCondition::MaurerCartan, checked: w.pi.len(), failure: fail });

    let mut fail = None;
    for (&(i, j), q) in &w.g {
        let moved = gauge_apply(model, q, &w.pi[&i])?;
        record(&mut fail, &moved.sub(&w.pi[&j]), vec![i, j]);
    }
    results.push(ConditionResult { condition: WeakCondition::Gauge, checked: w.g.len(), failure: fail });

    let mut fail = None;
    for (&(i, j, k), u) in &w.a {
        let du = GaugeElement::new(twisted_differential(model, &w.pi[&i], u)?)?;
        let lhs = bch(model, &bch(model, &w.g[&(j, k)], &w.g[&(i, j)])?, &du)?;
        record(&mut fail, &lhs.log().sub(w.g[&(i, k)].log()), vec![i, j, k]);
    }
    results.push(ConditionResult { condition: WeakCondition::Cocycle, checked: w.a.len(), failure: fail });

    let mut fail = None;
    let quads = shape.level(3);
    for t in &quads {
        let (i, j, k, l) = (t[0], t[1], t[2], t[3]);
        let u = |a, b, c| &w.a[&(a, b, c)];
        let gij = &w.g[&(i, j)];
        if !tetra_condition(model, &w.pi[&i], gij, [u(i, j, k), u(i, j, l), u(i, k, l), u(j, k, l)])? {
            // recompute the difference for its order
            let left = bch_twisted_all(model, &w.pi[&i], &[u(i, j, k).clone(), u(i, k, l).clone()])?;
            let moved = exp_ad(model, gij.log(), u(j, k, l), -1)?;
            let right = bch_twisted_all(model, &w.pi[&i], &[moved, u(i, j, l).clone()])?;
            record(&mut fail, &left.sub(&right), t.clone());
        }
    }
    results.push(ConditionResult { condition: WeakCondition::Tetrahedron, checked: quads.len(), failure: fail });
    Ok(WeakMCReport { results })
}

/// Data `(γ, α)`: `γ_i` a gauge element per open and `α_ij` a 2-cell log
/// per pair, based at the source `Π_i`.
pub struct WeakEquivalence<D: Dgla> {
    pub gamma: BTreeMap<usize, GaugeElement<D>>,
    pub alpha: BTreeMap<Pair, GradedElement<D>>,
}

impl<D: Dgla> Clone for WeakEquivalence<D> {
    fn clone(&self) -> Self {
        WeakEquivalence { gamma: self.gamma.clone(), alpha: self.alpha.clone() }
    }
}

impl<D: Dgla> PartialEq for WeakEquivalence<D> {
    fn eq(&self, other: &Self) -> bool {
        self.gamma == other.gamma && self.alpha == other.alpha
    }
}

impl<D: Dgla> fmt::Debug for WeakEquivalence<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeakEquivalence").field("gamma", &self.gamma).field("alpha", &self.alpha).finish()
    }
}

impl<D: Dgla> WeakEquivalence<D> {
    pub fn identity(model: &D, shape: &CoverShape, order: usize) -> Self {
        WeakEquivalence {
            gamma: (0..shape.count()).map(|i| (i, GaugeElement::identity(model, order))).collect(),
            alpha: pairs_of(shape).into_iter().map(|p| (p, GradedElement::zero(model, -1, order))).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.gamma.values().all(GaugeElement::is_identity) && self.alpha.values().all(GradedElement::is_zero)
    }

    fn check_against(&self, w: &WeakMCTriple<D>) -> Result<()> {
        let indices: Vec<usize> = w.pi.keys().copied().collect();
        check_keys("γ", &self.gamma, &indices)?;
        check_keys("α", &self.alpha, &w.g.keys().copied().collect::<Vec<_>>())?;
        for u in self.alpha.values() {
            u.check_degree(-1)?;
        }
        Ok(())
    }
}

/// The target of `e` out of `w`: `Π'_i = γ_i · Π_i`,
/// `g'_ij = γ_j g_ij exp(d_{Π_i} α_ij) γ_i^{-1}` and
/// `a'_ijk = e^{ad γ_i} (α_ij^{-1} * (e^{-ad g_ij} α_jk)^{-1} * a_ijk * α_ik)`.
pub fn weak_equiv_apply<D: Dgla>(model: &D, e: &WeakEquivalence<D>, w: &WeakMCTriple<D>) -> Result<WeakMCTriple<D>> {
    e.check_against(w)?;
    let mut pi = BTreeMap::new();
    for (&i, x) in &w.pi {
        pi.insert(i, gauge_apply(model, &e.gamma[&i], x)?);
    }
    let mut g = BTreeMap::new();
    for (&(i, j), q) in &w.g {
        let dalpha = GaugeElement::new(twisted_differential(model, &w.pi[&i], &e.alpha[&(i, j)])?)?;
        let step = bch(model, &bch(model, &e.gamma[&j], q)?, &dalpha)?;
        g.insert((i, j), bch(model, &step, &e.gamma[&i].inverse())?);
    }
    let mut a = BTreeMap::new();
    for (&(i, j, k), u) in &w.a {
        let moved = exp_ad(model, w.g[&(i, j)].log(), &e.alpha[&(j, k)], -1)?;
        let at_i = bch_twisted_all(
            model,
            &w.pi[&i],
            &[e.alpha[&(i, j)].neg(), moved.neg(), u.clone(), e.alpha[&(i, k)].clone()],
        )?;
        a.insert((i, j, k), exp_ad(model, e.gamma[&i].log(), &at_i, 1)?);
    }
    Ok(WeakMCTriple { order: w.order, pi, g, a })
}

/// The composite "first `e1`, then `e2`" out of `w`:
/// `γ''_i = γ'_i γ_i` and `α''_ij = α_ij * e^{-ad γ_i} α'_ij`.
pub fn weak_equiv_compose<D: Dgla>(
    model: &D,
    w: &WeakMCTriple<D>,
    e1: &WeakEquivalence<D>,
    e2: &WeakEquivalence<D>,
) -> Result<WeakEquivalence<D>> {
    e1.check_against(w)?;
    e2.check_against(w)?;
    let mut gamma = BTreeMap::new();
    for (&i, q) in &e1.gamma {
        gamma.insert(i, bch(model, &e2.gamma[&i], q)?);
    }
    let mut alpha = BTreeMap::new();
    for (&(i, j), u) in &e1.alpha {
        let back = exp_ad(model, e1.gamma[&i].log(), &e2.alpha[&(i, j)], -1)?;
        alpha.insert((i, j), bch_twisted_all(model, &w.pi[&i], &[u.clone(), back])?);
    }
    Ok(WeakEquivalence { gamma, alpha })
}

/// Composes a chain of equivalences applied in order, starting at `w`.
pub fn compose_chain<D: Dgla>(
    model: &D,
    w: &WeakMCTriple<D>,
    chain: &[WeakEquivalence<D>],
) -> Result<WeakEquivalence<D>> {
    let shape_pairs: Vec<Pair> = w.g.keys().copied().collect();
    let mut total = WeakEquivalence {
        gamma: w.pi.keys().map(|&i| (i, GaugeElement::identity(model, w.order))).collect(),
        alpha: shape_pairs.into_iter().map(|p| (p, GradedElement::zero(model, -1, w.order))).collect(),
    };
    for e in chain {
        total = weak_equiv_compose(model, w, &total, e)?;
    }
    Ok(total)
}


#[cfg(test)]
mod tests;
