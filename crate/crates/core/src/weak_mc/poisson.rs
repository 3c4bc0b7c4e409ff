use std::collections::BTreeMap;

use super::{pairs_of, WeakMCTriple};
use crate::algebroid::{skew_symmetrize, PolyDiff, PolyDiffModel, PolyVector, PolyVectorModel};
use crate::error::{Error, Result};
use crate::formal::{Additive, CoeffRing};
use crate::simplicial::CosimplicialCech;

/// Antisymmetrized first-order terms, one bivector per open.
#[derive(Clone, PartialEq)]
pub struct FirstOrder<C> {
    pub bivectors: BTreeMap<usize, PolyVector<C>>,
    /// Opens whose antisymmetrized term is not a biderivation, with the
    /// offending part.
    pub higher_order: BTreeMap<usize, PolyDiff<C>>,
}

impl<C: CoeffRing> std::fmt::Debug for FirstOrder<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FirstOrder")
            .field("bivectors", &self.bivectors)
            .field("higher_order", &self.higher_order)
            .finish()
    }
}

impl<C: CoeffRing> FirstOrder<C> {
    /// The common bivector when all opens agree.
    pub fn global(&self) -> Option<&PolyVector<C>> {
        let first = self.bivectors.values().next()?;
        self.bivectors.values().all(|b| b == first).then_some(first)
    }
}

/// `B(f,g) - B(g,f)` for the `h^1` coefficient `B` of each `Π_i`, checked to
/// agree on overlaps.
pub fn skew_symmetrize_first_order<C: CoeffRing>(
    cech: &CosimplicialCech,
    w: &WeakMCTriple<PolyDiffModel<C>>,
) -> Result<FirstOrder<C>> {
    let mut bivectors = BTreeMap::new();
    let mut higher_order = BTreeMap::new();
    for (&i, pi) in &w.pi {
        if pi.order() < 1 {
            return Err(Error::Invalid("no first-order term below h^1".into()));
        }
        let s = skew_symmetrize(pi.coeff(1))?;
        if let Some(rest) = s.higher_order {
            higher_order.insert(i, rest);
        }
        bivectors.insert(i, s.bivector);
    }
    for (i, j) in pairs_of(cech.cover().shape()) {
        if bivectors[&i] != bivectors[&j] {
            return Err(Error::Invalid(format!("first-order bivectors differ on the overlap ({i},{j})")));
        }
    }
    Ok(FirstOrder { bivectors, higher_order })
}

/// Whether every `π_i` has vanishing Schouten square and the `π_i` agree on
/// overlaps.
pub fn poisson_check<C: CoeffRing>(
    model: &PolyVectorModel<C>,
    cech: &CosimplicialCech,
    pis: &BTreeMap<usize, PolyVector<C>>,
) -> Result<bool> {
    let count = cech.cover().shape().count();
    if pis.keys().copied().collect::<Vec<_>>() != (0..count).collect::<Vec<_>>() {
        return Err(Error::Shape(format!("expected one bivector per open, {count} opens")));
    }
    for pi in pis.values() {
        if pi.degree() != 1 {
            return Err(Error::Degree { expected: 1, found: pi.degree() });
        }
        if !model.algebroid.schouten(pi, pi).is_zero() {
            return Ok(false);
        }
    }
    Ok(pairs_of(cech.cover().shape()).into_iter().all(|(i, j)| pis[&i] == pis[&j]))
}
