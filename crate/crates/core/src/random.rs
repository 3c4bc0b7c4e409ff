//! Seeded generators for small random test data.

use std::sync::Arc;

use rand::Rng;

use crate::algebroid::{basis_subsets, AlgebroidModel, LForm, PolyDiff, PolyDiffModel, PolyVector};
use crate::dgla::{Dgla, GaugeElement, GradedElement};
use crate::formal::{rat, CoeffRing, Monomial, Poly, Rational};
use crate::simplicial::CoverShape;
use crate::weak_mc::WeakEquivalence;

pub fn rational<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    let mut n = rng.gen_range(-3i64..=3);
    if n == 0 {
        n = 1;
    }
    rat(n, rng.gen_range(1i64..=2))
}

/// Up to `terms` monomials of total degree at most `max_deg`.
pub fn poly<R: Rng + ?Sized>(rng: &mut R, vars: &Arc<Vec<String>>, max_deg: u32, terms: usize) -> Poly {
    let n = vars.len();
    let mut p = Poly::zero_in(vars.clone());
    for _ in 0..terms {
        let mut m = Monomial::one(n);
        let deg = rng.gen_range(0..=max_deg);
        for _ in 0..deg {
            if n > 0 {
                m.0[rng.gen_range(0..n)] += 1;
            }
        }
        p.add_term(m, rational(rng));
    }
    p
}

pub fn coeff<R: Rng + ?Sized, C: CoeffRing>(rng: &mut R, zero: &C, max_deg: u32, terms: usize) -> C {
    let vars = Arc::new(zero.vars().to_vec());
    C::from_poly(poly(rng, &vars, max_deg, terms))
}

/// Random polyvector of the given Lie degree.
pub fn polyvector<R: Rng + ?Sized, C: CoeffRing>(
    rng: &mut R,
    model: &AlgebroidModel<C>,
    degree: i32,
    terms: usize,
    max_deg: u32,
) -> PolyVector<C> {
    let k = (degree + 1) as usize;
    let keys = basis_subsets(model.rank(), k);
    let mut out = PolyVector::zero(degree);
    if keys.is_empty() {
        return out;
    }
    for _ in 0..terms {
        let key = &keys[rng.gen_range(0..keys.len())];
        let c = coeff(rng, model.zero_coeff(), max_deg, 2);
        out = crate::formal::Additive::add(&out, &PolyVector::basis(key, c));
    }
    out
}

pub fn form<R: Rng + ?Sized, C: CoeffRing>(
    rng: &mut R,
    model: &AlgebroidModel<C>,
    degree: usize,
    terms: usize,
    max_deg: u32,
) -> LForm<C> {
    let keys = basis_subsets(model.rank(), degree);
    let mut out = LForm::zero(degree);
    if keys.is_empty() {
        return out;
    }
    for _ in 0..terms {
        let key = &keys[rng.gen_range(0..keys.len())];
        let c = coeff(rng, model.zero_coeff(), max_deg, 2);
        out = crate::formal::Additive::add(&out, &LForm::basis(key, c));
    }
    out
}

/// Random operator of the given Lie degree; slots carry at most
/// `max_order` derivatives, and at least one when `normalized`.
pub fn polydiff<R: Rng + ?Sized, C: CoeffRing>(
    rng: &mut R,
    model: &PolyDiffModel<C>,
    degree: i32,
    terms: usize,
    max_order: u32,
    max_deg: u32,
    normalized: bool,
) -> PolyDiff<C> {
    let slots = (degree + 1) as usize;
    let n = model.nvars();
    let mut out = PolyDiff::zero(degree);
    for _ in 0..terms {
        let key: Vec<Vec<u32>> = (0..slots)
            .map(|_| {
                let lo = if normalized { 1 } else { 0 };
                let ord = rng.gen_range(lo..=max_order.max(lo));
                let mut a = vec![0u32; n];
                for _ in 0..ord {
                    a[rng.gen_range(0..n)] += 1;
                }
                a
            })
            .collect();
        let c = coeff(rng, model.zero_coeff(), max_deg, 2);
        out = crate::formal::Additive::add(&out, &PolyDiff::term(key, c));
    }
    out
}

/// `sum_{k=1..order} h^k x_k` with each `x_k` drawn by `sample(rng, degree)`.
pub fn series<D: Dgla, R: Rng + ?Sized>(
    rng: &mut R,
    model: &D,
    degree: i32,
    order: usize,
    sample: &mut impl FnMut(&mut R, i32) -> D::Elem,
) -> GradedElement<D> {
    let mut coeffs = vec![model.zero(degree)];
    coeffs.extend((1..=order).map(|_| sample(rng, degree)));
    GradedElement::from_coeffs(model, degree, coeffs, order).expect("sampled element has the requested degree")
}

/// Random `(γ, α)` on a cover shape.
pub fn weak_equivalence<D: Dgla, R: Rng + ?Sized>(
    rng: &mut R,
    model: &D,
    shape: &CoverShape,
    order: usize,
    sample: &mut impl FnMut(&mut R, i32) -> D::Elem,
) -> WeakEquivalence<D> {
    let mut e = WeakEquivalence::identity(model, shape, order);
    for q in e.gamma.values_mut() {
        *q = GaugeElement::new(series(rng, model, 0, order, sample)).expect("degree 0");
    }
    for u in e.alpha.values_mut() {
        *u = series(rng, model, -1, order, sample);
    }
    e
}

/// Closure of a few random tuples on `count` opens.
pub fn cover_shape<R: Rng + ?Sized>(rng: &mut R, count: usize) -> CoverShape {
    let mut gens = Vec::new();
    for _ in 0..count {
        let t: Vec<usize> = (0..count).filter(|_| rng.gen_bool(0.6)).collect();
        if !t.is_empty() {
            gens.push(t);
        }
    }
    CoverShape::closure(count, gens).expect("generated tuples are valid")
}
