use std::collections::BTreeMap;
use std::fmt;

use super::{Pair, Triple, WeakMCTriple};
use crate::deligne::{edge_condition, tetra_condition, triangle_condition};
use crate::dgla::{Dgla, GaugeElement, GradedElement};
use crate::error::{Error, Result};
use crate::simplicial::CosimplicialCech;

/// A 0-simplex of the total space of the cosimplicial nerve: an object per
/// index, a 1-cell per weakly increasing pair, a 2-simplex filler per weakly
/// increasing triple, and commuting tetrahedra on weakly increasing
/// quadruples. Degenerate tuples carry identities.
pub struct TotZeroSimplex<D: Dgla> {
    pub m: BTreeMap<usize, GradedElement<D>>,
    pub g: BTreeMap<Pair, GaugeElement<D>>,
    pub a: BTreeMap<Triple, GradedElement<D>>,
}

impl<D: Dgla> Clone for TotZeroSimplex<D> {
    fn clone(&self) -> Self {
        TotZeroSimplex { m: self.m.clone(), g: self.g.clone(), a: self.a.clone() }
    }
}

impl<D: Dgla> PartialEq for TotZeroSimplex<D> {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.g == other.g && self.a == other.a
    }
}

impl<D: Dgla> fmt::Debug for TotZeroSimplex<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TotZeroSimplex").field("m", &self.m).field("g", &self.g).field("a", &self.a).finish()
    }
}

fn strictly(t: &[usize]) -> bool {
    t.windows(2).all(|w| w[0] < w[1])
}

impl<D: Dgla> TotZeroSimplex<D> {
    /// Extends a triple to degenerate tuples by identities.
    pub fn from_triple(model: &D, cech: &CosimplicialCech, w: &WeakMCTriple<D>) -> Result<Self> {
        let n = w.order();
        let m = w.pi.clone();
        let mut g = BTreeMap::new();
        for t in cech.tuples(1) {
            let q = if t[0] == t[1] {
                GaugeElement::identity(model, n)
            } else {
                w.g.get(&(t[0], t[1])).ok_or_else(|| Error::Shape(format!("g missing on {t:?}")))?.clone()
            };
            g.insert((t[0], t[1]), q);
        }
        let mut a = BTreeMap::new();
        for t in cech.tuples(2) {
            let u = if strictly(&t) {
                w.a.get(&(t[0], t[1], t[2])).ok_or_else(|| Error::Shape(format!("a missing on {t:?}")))?.clone()
            } else {
                GradedElement::zero(model, -1, n)
            };
            a.insert((t[0], t[1], t[2]), u);
        }
        Ok(TotZeroSimplex { m, g, a })
    }

    /// Restriction to strictly increasing tuples.
    pub fn to_triple(&self, cech: &CosimplicialCech) -> Result<WeakMCTriple<D>> {
        let shape = cech.cover().shape();
        let g = self.g.iter().filter(|((i, j), _)| i < j).map(|(k, v)| (*k, v.clone())).collect();
        let a = self.a.iter().filter(|((i, j, k), _)| i < j && j < k).map(|(k, v)| (*k, v.clone())).collect();
        WeakMCTriple::new(shape, self.m.clone(), g, a)
    }

    /// Checks degeneracies, that each 1-cell runs between the objects its
    /// faces prescribe, each filler's boundary is made of the 1-cells of its
    /// faces, and every tetrahedron commutes.
    pub fn verify(&self, model: &D, cech: &CosimplicialCech) -> Result<()> {
        let bad = |m: String| Err(Error::Invalid(m));
        let keys1: Vec<Pair> = cech.tuples(1).into_iter().map(|t| (t[0], t[1])).collect();
        let keys2: Vec<Triple> = cech.tuples(2).into_iter().map(|t| (t[0], t[1], t[2])).collect();
        if self.m.keys().copied().collect::<Vec<_>>() != (0..cech.cover().shape().count()).collect::<Vec<_>>()
            || self.g.keys().copied().collect::<Vec<_>>() != keys1
            || self.a.keys().copied().collect::<Vec<_>>() != keys2
        {
            return Err(Error::Shape("data is not indexed by the weakly increasing tuples of the cover".into()));
        }
        for (&(i, j), q) in &self.g {
            if i == j && !q.is_identity() {
                return bad(format!("degenerate 1-cell on ({i},{i}) is not the identity"));
            }
            if !edge_condition(model, &self.m[&i], &self.m[&j], q)? {
                return bad(format!("1-cell on ({i},{j}) does not join its objects"));
            }
        }
        for (&(i, j, k), u) in &self.a {
            if !(i < j && j < k) && !u.is_zero() {
                return bad(format!("degenerate filler on ({i},{j},{k}) is not the identity"));
            }
            let (gij, gjk, gik) = (&self.g[&(i, j)], &self.g[&(j, k)], &self.g[&(i, k)]);
            if !triangle_condition(model, &self.m[&i], gij, gjk, gik, u)? {
                return bad(format!("filler on ({i},{j},{k}) does not bound its faces"));
            }
        }
        for t in cech.tuples(3) {
            let (i, j, k, l) = (t[0], t[1], t[2], t[3]);
            let u = |p, q, r| &self.a[&(p, q, r)];
            if !tetra_condition(model, &self.m[&i], &self.g[&(i, j)], [u(i, j, k), u(i, j, l), u(i, k, l), u(j, k, l)])? {
                return bad(format!("tetrahedron on {t:?} does not commute"));
            }
        }
        Ok(())
    }
}
