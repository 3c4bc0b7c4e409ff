use std::fmt;

use crate::dgla::{
    bch, bch_twisted, exp_ad, gauge_apply, is_mc, twisted_differential, Dgla, GaugeElement, GradedElement,
};
use crate::error::{Error, Result};

/// A Maurer–Cartan element.
pub struct DelObject<D: Dgla> {
    pi: GradedElement<D>,
}

/// `exp(q) : Π -> exp(q)·Π`.
pub struct DelOneCell<D: Dgla> {
    source: GradedElement<D>,
    target: GradedElement<D>,
    q: GaugeElement<D>,
}

/// `exp(u) : exp(q) => exp(q) exp(d_Π u)`, with `u` in the `Π`-twisted
/// degree -1 algebra of the source object.
pub struct DelTwoCell<D: Dgla> {
    one_cell: DelOneCell<D>,
    u: GradedElement<D>,
}

macro_rules! clone_eq_debug {
    ($t:ident { $($f:ident),* }) => {
        impl<D: Dgla> Clone for $t<D> {
            fn clone(&self) -> Self {
                $t { $($f: self.$f.clone()),* }
            }
        }
        impl<D: Dgla> PartialEq for $t<D> {
            fn eq(&self, other: &Self) -> bool {
                true $(&& self.$f == other.$f)*
            }
        }
        impl<D: Dgla> fmt::Debug for $t<D> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.debug_struct(stringify!($t))$(.field(stringify!($f), &self.$f))*.finish()
            }
        }
    };
}

clone_eq_debug!(DelObject { pi });
clone_eq_debug!(DelOneCell { source, target, q });
clone_eq_debug!(DelTwoCell { one_cell, u });

impl<D: Dgla> DelObject<D> {
    pub fn new(model: &D, pi: GradedElement<D>) -> Result<Self> {
        if !is_mc(model, &pi)? {
            return Err(Error::Invalid("object is not a Maurer–Cartan element".into()));
        }
        Ok(DelObject { pi })
    }

    pub fn pi(&self) -> &GradedElement<D> {
        &self.pi
    }
}

impl<D: Dgla> DelOneCell<D> {
    pub fn new(model: &D, source: &GradedElement<D>, q: GaugeElement<D>) -> Result<Self> {
        let target = gauge_apply(model, &q, source)?;
        Ok(DelOneCell { source: source.clone(), target, q })
    }

    pub fn identity(model: &D, x: &GradedElement<D>) -> Self {
        DelOneCell { source: x.clone(), target: x.clone(), q: GaugeElement::identity(model, x.order()) }
    }

    pub fn source(&self) -> &GradedElement<D> {
        &self.source
    }

    pub fn target(&self) -> &GradedElement<D> {
        &self.target
    }

    pub fn q(&self) -> &GaugeElement<D> {
        &self.q
    }

    pub fn log(&self) -> &GradedElement<D> {
        self.q.log()
    }

    /// `exp(-q)` from the target back to the source.
    pub fn inverse(&self) -> Self {
        DelOneCell { source: self.target.clone(), target: self.source.clone(), q: self.q.inverse() }
    }
}

/// `exp(q2) exp(q1)`: first `c1`, then `c2`.
pub fn compose_one<D: Dgla>(model: &D, c2: &DelOneCell<D>, c1: &DelOneCell<D>) -> Result<DelOneCell<D>> {
    if c1.target != c2.source {
        return Err(Error::NotComposable("target of the first 1-cell is not the source of the second".into()));
    }
    Ok(DelOneCell { source: c1.source.clone(), target: c2.target.clone(), q: bch(model, &c2.q, &c1.q)? })
}

impl<D: Dgla> DelTwoCell<D> {
    pub fn new(one_cell: DelOneCell<D>, u: GradedElement<D>) -> Result<Self> {
        u.check_degree(-1)?;
        u.check_order(&one_cell.source)?;
        if !u.is_zero_mod(1) {
            return Err(Error::NotInIdeal(format!("{u:?}")));
        }
        Ok(DelTwoCell { one_cell, u })
    }

    pub fn identity(model: &D, one_cell: &DelOneCell<D>) -> Self {
        let u = GradedElement::zero(model, -1, one_cell.source.order());
        DelTwoCell { one_cell: one_cell.clone(), u }
    }

    pub fn source(&self) -> &DelOneCell<D> {
        &self.one_cell
    }

    pub fn log(&self) -> &GradedElement<D> {
        &self.u
    }

    pub fn base(&self) -> &GradedElement<D> {
        &self.one_cell.source
    }
}

/// The 1-cell `exp(q) exp(d_Π u)`.
pub fn two_cell_target<D: Dgla>(model: &D, c: &DelTwoCell<D>) -> Result<DelOneCell<D>> {
    let du = twisted_differential(model, c.base(), &c.u)?;
    let q = bch(model, &c.one_cell.q, &GaugeElement::new(du)?)?;
    Ok(DelOneCell { source: c.one_cell.source.clone(), target: c.one_cell.target.clone(), q })
}

/// Vertical composite: first `c1`, then `c2`.
pub fn vcompose<D: Dgla>(model: &D, c2: &DelTwoCell<D>, c1: &DelTwoCell<D>) -> Result<DelTwoCell<D>> {
    if two_cell_target(model, c1)? != c2.one_cell {
        return Err(Error::NotComposable("vertical: target 1-cell of the first 2-cell differs".into()));
    }
    let u = bch_twisted(model, c1.base(), &c1.u, &c2.u)?;
    Ok(DelTwoCell { one_cell: c1.one_cell.clone(), u })
}

/// Horizontal composite of `c1` over `q : Π -> Π'` and `c2` over
/// `q' : Π' -> Π''`: over `exp(q') exp(q)`, with log of
/// `exp(e^{-ad q} u') exp(u)`.
pub fn hcompose<D: Dgla>(model: &D, c2: &DelTwoCell<D>, c1: &DelTwoCell<D>) -> Result<DelTwoCell<D>> {
    if c1.one_cell.target != c2.one_cell.source {
        return Err(Error::NotComposable("horizontal: the 1-cells do not meet".into()));
    }
    let one_cell = compose_one(model, &c2.one_cell, &c1.one_cell)?;
    let moved = exp_ad(model, c1.one_cell.log(), &c2.u, -1)?;
    let u = bch_twisted(model, c1.base(), &moved, &c1.u)?;
    Ok(DelTwoCell { one_cell, u })
}

/// Inverse for vertical composition.
pub fn vinverse<D: Dgla>(model: &D, c: &DelTwoCell<D>) -> Result<DelTwoCell<D>> {
    Ok(DelTwoCell { one_cell: two_cell_target(model, c)?, u: c.u.neg() })
}

/// Inverse for horizontal composition, over `exp(-q)`.
pub fn hinverse<D: Dgla>(model: &D, c: &DelTwoCell<D>) -> Result<DelTwoCell<D>> {
    let u = exp_ad(model, c.one_cell.log(), &c.u, 1)?.neg();
    Ok(DelTwoCell { one_cell: c.one_cell.inverse(), u })
}

/// Whether `q` is a 1-automorphism of `x`, i.e. represents an element of
/// `π_1` at `x`.
pub fn is_one_automorphism<D: Dgla>(model: &D, x: &GradedElement<D>, q: &GaugeElement<D>) -> Result<bool> {
    Ok(gauge_apply(model, q, x)? == *x)
}

/// Whether `u` is a 2-automorphism of the identity 1-cell of `x`, i.e.
/// represents an element of `π_2` at `x`.
pub fn is_two_automorphism<D: Dgla>(model: &D, x: &GradedElement<D>, u: &GradedElement<D>) -> Result<bool> {
    u.check_degree(-1)?;
    Ok(twisted_differential(model, x, u)?.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebroid::{AlgebroidModel, PolyVector, PolyVectorModel};
    use crate::formal::{parse_poly, Poly};

    fn p(s: &str) -> Poly {
        parse_poly(s, &["x", "y"]).unwrap()
    }

    fn model() -> PolyVectorModel<Poly> {
        PolyVectorModel::new(AlgebroidModel::tangent(p("0")))
    }

    fn elem(m: &PolyVectorModel<Poly>, v: PolyVector<Poly>, k: usize) -> GradedElement<PolyVectorModel<Poly>> {
        GradedElement::monomial(m, v, k, 2)
    }

    #[test]
    fn unit_and_inverse() {
        let m = model();
        let pi = elem(&m, PolyVector::basis(&[0, 1], p("1")), 1);
        let q = GaugeElement::new(elem(&m, PolyVector::basis(&[0], p("y")), 1)).unwrap();
        let c = DelOneCell::new(&m, &pi, q).unwrap();
        let u = elem(&m, PolyVector::function(p("x^2")), 1);
        let a = DelTwoCell::new(c.clone(), u).unwrap();
        let id = DelTwoCell::identity(&m, &two_cell_target(&m, &a).unwrap());
        assert_eq!(vcompose(&m, &id, &a).unwrap(), a);
        let inv = vinverse(&m, &a).unwrap();
        assert_eq!(vcompose(&m, &inv, &a).unwrap(), DelTwoCell::identity(&m, &c));
        let hinv = hinverse(&m, &a).unwrap();
        let h = hcompose(&m, &hinv, &a).unwrap();
        assert!(h.log().is_zero());
        assert!(h.source().q().is_identity());
    }

    #[test]
    fn automorphisms() {
        let m = model();
        let pi = elem(&m, PolyVector::basis(&[0, 1], p("1")), 1);
        // Hamiltonian flows fix the symplectic structure
        let ham = GaugeElement::new(elem(&m, PolyVector::basis(&[0], p("1")), 1)).unwrap();
        assert!(is_one_automorphism(&m, &pi, &ham).unwrap());
        let c = elem(&m, PolyVector::function(p("1")), 1);
        assert!(is_two_automorphism(&m, &pi, &c).unwrap());
        let f = elem(&m, PolyVector::function(p("x")), 1);
        assert!(!is_two_automorphism(&m, &pi, &f).unwrap());
    }
}
