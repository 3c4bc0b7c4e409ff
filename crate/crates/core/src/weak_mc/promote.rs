use std::collections::BTreeMap;

use super::{weak_equiv_apply, weak_mc_check, Triple, WeakEquivalence, WeakMCTriple};
use crate::algebroid::{PolyDiff, PolyDiffModel, PolyVector, PolyVectorModel};
use crate::dgla::{Dgla, GaugeElement, GradedElement};
use crate::error::{Error, Result};
use crate::formal::{Additive, CoeffRing};
use crate::simplicial::{Cochain, CosimplicialCech, LinearDgla, SplittingOracle};

/// Projection of degree -1 elements onto the invariant ones: those killed
/// by every twisted differential and central for the bracket.
pub trait InvariantProjection<D: Dgla> {
    fn project(&self, model: &D, x: &D::Elem) -> D::Elem;
}

/// Constant functions, the invariants of an algebroid whose anchor is
/// surjective on affine space.
#[derive(Clone, Copy, Debug, Default)]
pub struct ConstantFunctions;

fn constant_part<C: CoeffRing>(c: &C) -> C {
    let k = c.as_poly().map(|p| p.constant_term()).unwrap_or_else(num_traits::Zero::zero);
    c.constant(&k)
}

impl<C: CoeffRing> InvariantProjection<PolyVectorModel<C>> for ConstantFunctions {
    fn project(&self, _model: &PolyVectorModel<C>, x: &PolyVector<C>) -> PolyVector<C> {
        match x.terms().get(&Vec::new()) {
            Some(f) if x.degree() == -1 => PolyVector::function(constant_part(f)),
            _ => PolyVector::zero(x.degree()),
        }
    }
}

impl<C: CoeffRing> InvariantProjection<PolyDiffModel<C>> for ConstantFunctions {
    fn project(&self, _model: &PolyDiffModel<C>, x: &PolyDiff<C>) -> PolyDiff<C> {
        match x.terms().get(&Vec::new()) {
            Some(f) if x.degree() == -1 => PolyDiff::function(constant_part(f)),
            _ => PolyDiff::zero(x.degree()),
        }
    }
}

/// One order of [`promote_actual`]: the gauge step and the deleted
/// invariant part.
pub struct PromotionStep<D: Dgla> {
    pub order: usize,
    pub equivalence: WeakEquivalence<D>,
    pub deleted: BTreeMap<Triple, D::Elem>,
}

impl<D: Dgla> std::fmt::Debug for PromotionStep<D> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PromotionStep")
            .field("order", &self.order)
            .field("equivalence", &self.equivalence)
            .field("deleted", &self.deleted)
            .finish()
    }
}

pub struct Promotion<D: Dgla> {
    pub actual: WeakMCTriple<D>,
    pub steps: Vec<PromotionStep<D>>,
}

impl<D: Dgla> std::fmt::Debug for Promotion<D> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Promotion").field("actual", &self.actual).field("steps", &self.steps).finish()
    }
}

/// Turns a weak quantization (`a = 1` mod `h^2`) into an actual one: at each
/// order `n >= 2` the cocycle `a_n` is split as `ã_n + ďα_n` with `ã_n`
/// invariant, the gauge `(1, exp(h^n α_n))` is applied and `ã_n` is deleted.
/// Every step is rechecked against all four conditions, since deletion is
/// not a weak equivalence.
pub fn promote_actual<D: LinearDgla, P: InvariantProjection<D>>(
    model: &D,
    cech: &CosimplicialCech,
    w: &WeakMCTriple<D>,
    invariants: &P,
    splitting: SplittingOracle,
) -> Result<Promotion<D>> {
    if !w.a.values().all(|u| u.is_zero_mod(2)) {
        return Err(Error::Invalid("a is not trivial modulo h^2; not a weak quantization".into()));
    }
    let check = |x: &WeakMCTriple<D>, what: &str| -> Result<()> {
        let report = weak_mc_check(model, cech, x)?;
        if report.passed() {
            Ok(())
        } else {
            Err(Error::Invalid(format!("{what}:\n{report}")))
        }
    };
    check(w, "input is not a weak Maurer–Cartan triple")?;
    let n = w.order();
    let mut cur = w.clone();
    let mut steps = Vec::new();
    for k in 2..=n {
        if cur.a.values().all(|u| u.coeff(k).is_zero()) {
            continue;
        }
        let mut deleted = BTreeMap::new();
        let mut exact = BTreeMap::new();
        for (&(p, q, r), u) in &cur.a {
            let inv = invariants.project(model, u.coeff(k));
            exact.insert(vec![p, q, r], u.coeff(k).sub(&inv));
            deleted.insert((p, q, r), inv);
        }
        let alpha = splitting.split(cech, model, -1, &Cochain::new(2, exact)?, Some(k))?;
        let e = WeakEquivalence {
            gamma: cur.pi.keys().map(|&i| (i, GaugeElement::identity(model, n))).collect(),
            alpha: cur
                .g
                .keys()
                .map(|&(p, q)| {
                    ((p, q), GradedElement::monomial(model, alpha.get(&[p, q]).expect("dense").clone(), k, n))
                })
                .collect(),
        };
        let moved = weak_equiv_apply(model, &e, &cur)?;
        let mut a = BTreeMap::new();
        for (t, u) in &moved.a {
            a.insert(*t, u.sub(&GradedElement::monomial(model, deleted[t].clone(), k, n)));
        }
        cur = moved.with_a(a);
        if !cur.a.values().all(|u| u.is_zero_mod(k + 1)) {
            return Err(Error::Invalid(format!("a is still nontrivial at h^{k} after promotion")));
        }
        check(&cur, &format!("deleting the invariant part at h^{k} broke a condition"))?;
        steps.push(PromotionStep { order: k, equivalence: e, deleted });
    }
    Ok(Promotion { actual: cur, steps })
}
