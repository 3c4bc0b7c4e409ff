use std::collections::BTreeMap;

use super::{PolyDiff, PolyDiffModel, PolyVector, SlotKey};
use crate::dgla::GradedElement;
use crate::error::{Error, Result};
use crate::formal::{factorial, Additive, CoeffRing, Rational};

/// `Π = sum_{n=1..N} h^n / n! · B^n` with `B = sum_{a<b} π^{ab} ∂_a ⊗ ∂_b`
/// and `B^n` the normal-ordered power. Refuses nonconstant `π`.
pub fn moyal_generate<C: CoeffRing>(
    model: &PolyDiffModel<C>,
    pi: &PolyVector<C>,
    order: usize,
) -> Result<GradedElement<PolyDiffModel<C>>> {
    if pi.degree() != 1 {
        return Err(Error::Degree { expected: 1, found: pi.degree() });
    }
    let mut pairs: Vec<(usize, usize, Rational)> = Vec::new();
    for (k, c) in pi.terms() {
        let c = c
            .as_constant()
            .ok_or_else(|| Error::Invalid(format!("bivector coefficient {c} is not constant")))?;
        pairs.push((k[0], k[1], c));
    }
    let n = model.nvars();
    let one = model.zero_coeff().one_like();
    let mut power: BTreeMap<SlotKey, Rational> = BTreeMap::new();
    power.insert(vec![vec![0; n], vec![0; n]], Rational::from_integer(1.into()));
    let mut coeffs = vec![PolyDiff::zero(1)];
    for k in 1..=order {
        let mut next: BTreeMap<SlotKey, Rational> = BTreeMap::new();
        for (key, c) in &power {
            for (a, b, p) in &pairs {
                let mut kk = key.clone();
                kk[0][*a] += 1;
                kk[1][*b] += 1;
                *next.entry(kk).or_insert_with(|| Rational::from_integer(0.into())) += c * p;
            }
        }
        next.retain(|_, c| !num_traits::Zero::is_zero(c));
        power = next;
        let inv = factorial(k).recip();
        coeffs.push(PolyDiff::from_terms(
            1,
            power.iter().map(|(key, c)| (key.clone(), one.scale(&(c * &inv)))),
        ));
    }
    GradedElement::from_coeffs(model, 1, coeffs, order)
}

/// Result of antisymmetrizing a bidifferential operator.
#[derive(Clone, PartialEq)]
pub struct SkewSymmetrization<C> {
    pub bivector: PolyVector<C>,
    /// Part of `B(f,g) - B(g,f)` that is not a biderivation, if any.
    pub higher_order: Option<PolyDiff<C>>,
}

impl<C: CoeffRing> std::fmt::Debug for SkewSymmetrization<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SkewSymmetrization")
            .field("bivector", &self.bivector)
            .field("higher_order", &self.higher_order)
            .finish()
    }
}

/// `B(f,g) - B(g,f)`, identified with a bivector through
/// `c (∂_a ⊗ ∂_b - ∂_b ⊗ ∂_a) ↦ c ∂_a ∧ ∂_b`.
pub fn skew_symmetrize<C: CoeffRing>(b: &PolyDiff<C>) -> Result<SkewSymmetrization<C>> {
    if b.degree() != 1 {
        return Err(Error::Degree { expected: 1, found: b.degree() });
    }
    let swapped = PolyDiff::from_terms(1, b.terms().iter().map(|(k, c)| (vec![k[1].clone(), k[0].clone()], c.clone())));
    let anti = b.sub(&swapped);
    let mut bivector = PolyVector::zero(1);
    let mut rest = PolyDiff::zero(1);
    for (k, c) in anti.terms() {
        let first = |a: &Vec<u32>| -> Option<usize> {
            (a.iter().sum::<u32>() == 1).then(|| a.iter().position(|&e| e == 1).expect("unit"))
        };
        match (first(&k[0]), first(&k[1])) {
            (Some(i), Some(j)) if i < j => {
                bivector = bivector.add(&PolyVector::basis(&[i, j], c.clone()));
            }
            (Some(i), Some(j)) if i > j => {}
            _ => rest = rest.add(&PolyDiff::term(k.clone(), c.clone())),
        }
    }
    Ok(SkewSymmetrization { bivector, higher_order: (!rest.is_zero()).then_some(rest) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgla::mc_residual;
    use crate::formal::{parse_poly, Poly};

    fn p(s: &str) -> Poly {
        parse_poly(s, &["x", "y"]).unwrap()
    }

    #[test]
    fn first_order_moyal() {
        let m = PolyDiffModel::new(p("0"));
        let pi = PolyVector::basis(&[0, 1], p("1"));
        let big_pi = moyal_generate(&m, &pi, 1).unwrap();
        let expect = PolyDiff::term(vec![vec![1, 0], vec![0, 1]], p("1"));
        assert_eq!(big_pi.coeff(1), &expect);
        assert!(mc_residual(&m, &big_pi).unwrap().is_zero());
    }

    #[test]
    fn zero_bivector() {
        let m = PolyDiffModel::new(p("0"));
        let big_pi = moyal_generate(&m, &PolyVector::zero(1), 3).unwrap();
        assert!(big_pi.is_zero());
    }

    #[test]
    fn nonconstant_refused() {
        let m = PolyDiffModel::new(p("0"));
        let pi = PolyVector::basis(&[0, 1], p("x"));
        assert!(moyal_generate(&m, &pi, 2).is_err());
    }

    #[test]
    fn skew_of_symmetric_is_zero() {
        let one = p("1");
        let b = PolyDiff::from_terms(
            1,
            [(vec![vec![1, 0], vec![0, 1]], one.clone()), (vec![vec![0, 1], vec![1, 0]], one)],
        );
        let s = skew_symmetrize(&b).unwrap();
        assert!(s.bivector.is_zero());
        assert!(s.higher_order.is_none());
    }

    #[test]
    fn skew_of_dx_dy() {
        let b = PolyDiff::term(vec![vec![1, 0], vec![0, 1]], p("1"));
        let s = skew_symmetrize(&b).unwrap();
        assert_eq!(s.bivector, PolyVector::basis(&[0, 1], p("1")));
    }
}
