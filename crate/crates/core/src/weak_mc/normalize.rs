use std::collections::BTreeMap;

use super::{compose_chain, weak_equiv_apply, WeakEquivalence, WeakMCTriple};
use crate::dgla::{GaugeElement, GradedElement};
use crate::error::{Error, Result};
use crate::simplicial::{Cochain, CosimplicialCech, LinearDgla, SplittingOracle};

/// A normal form `(Π', 1, 1)` and the equivalences leading to it, in the
/// order they were applied.
pub struct Normalization<D: LinearDgla> {
    pub normal: WeakMCTriple<D>,
    pub chain: Vec<WeakEquivalence<D>>,
}

impl<D: LinearDgla> std::fmt::Debug for Normalization<D> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Normalization").field("normal", &self.normal).field("chain", &self.chain).finish()
    }
}

fn order_part<'a, E: 'a + crate::formal::Additive>(
    level: usize,
    items: impl Iterator<Item = (Vec<usize>, &'a E)>,
) -> Result<Cochain<E>> {
    Cochain::new(level, items.map(|(t, v)| (t, v.clone())).collect())
}

/// Makes `a` and then `g` trivial order by order, splitting the cocycle met
/// at each order with `oracle`. Fails with the oracle's witness if some
/// cocycle has no splitting.
pub fn normalize_acyclic<D: LinearDgla>(
    model: &D,
    cech: &CosimplicialCech,
    w: &WeakMCTriple<D>,
    oracle: SplittingOracle,
) -> Result<Normalization<D>> {
    let n = w.order();
    let mut cur = w.clone();
    let mut chain = Vec::new();

    // a = 1 + ďb at the lowest nonzero order
    for i in 1..=n {
        let cocycle = order_part(2, cur.a.iter().map(|(&(p, q, r), u)| (vec![p, q, r], u.coeff(i))))?;
        if crate::formal::Additive::is_zero(&cocycle) {
            continue;
        }
        let b = oracle.split(cech, model, -1, &cocycle, Some(i))?;
        let e = WeakEquivalence {
            gamma: cur.pi.keys().map(|&k| (k, GaugeElement::identity(model, n))).collect(),
            alpha: cur
                .g
                .keys()
                .map(|&(p, q)| ((p, q), GradedElement::monomial(model, b.get(&[p, q]).expect("dense").clone(), i, n)))
                .collect(),
        };
        cur = weak_equiv_apply(model, &e, &cur)?;
        if !cur.a.values().all(|u| u.is_zero_mod(i + 1)) {
            return Err(Error::Invalid(format!("splitting at h^{i} did not remove a at that order")));
        }
        chain.push(e);
    }

    // then g = 1 + ďh
    for i in 1..=n {
        let cocycle = order_part(1, cur.g.iter().map(|(&(p, q), g)| (vec![p, q], g.log().coeff(i))))?;
        if crate::formal::Additive::is_zero(&cocycle) {
            continue;
        }
        let h = oracle.split(cech, model, 0, &cocycle, Some(i))?;
        let mut gamma = BTreeMap::new();
        for &k in cur.pi.keys() {
            let log = GradedElement::monomial(model, h.get(&[k]).expect("dense").clone(), i, n).neg();
            gamma.insert(k, GaugeElement::new(log)?);
        }
        let e = WeakEquivalence {
            gamma,
            alpha: cur.g.keys().map(|&p| (p, GradedElement::zero(model, -1, n))).collect(),
        };
        cur = weak_equiv_apply(model, &e, &cur)?;
        if !cur.g.values().all(|g| g.log().is_zero_mod(i + 1)) {
            return Err(Error::Invalid(format!("splitting at h^{i} did not remove g at that order")));
        }
        chain.push(e);
    }

    if !cur.is_normal() {
        return Err(Error::Invalid("normalization left nontrivial g or a".into()));
    }
    let total = compose_chain(model, w, &chain)?;
    if weak_equiv_apply(model, &total, w)? != cur {
        return Err(Error::Invalid("the composed equivalence chain does not reproduce the normal form".into()));
    }
    Ok(Normalization { normal: cur, chain })
}
