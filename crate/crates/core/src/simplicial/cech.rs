use std::collections::BTreeMap;

use super::cover::Cover;
use super::ordinal::OrdinalMap;
use crate::dgla::Dgla;
use crate::error::{Error, Result};
use crate::formal::{Additive, Rational};

/// Values indexed by index tuples of one length. Alternating cochains use
/// strictly increasing tuples; the cosimplicial object uses weakly
/// increasing ones.
#[derive(Clone, Debug, PartialEq)]
pub struct Cochain<E> {
    level: usize,
    parts: BTreeMap<Vec<usize>, E>,
}

impl<E: Additive> Cochain<E> {
    pub fn new(level: usize, parts: BTreeMap<Vec<usize>, E>) -> Result<Self> {
        if let Some(t) = parts.keys().find(|t| t.len() != level + 1) {
            return Err(Error::Shape(format!("tuple {t:?} does not belong to level {level}")));
        }
        Ok(Cochain { level, parts })
    }

    /// Zero on every tuple in `tuples`.
    pub fn zero(level: usize, tuples: &[Vec<usize>], zero: &E) -> Self {
        Cochain { level, parts: tuples.iter().map(|t| (t.clone(), zero.zero_like())).collect() }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn get(&self, t: &[usize]) -> Option<&E> {
        self.parts.get(t)
    }

    pub fn set(&mut self, t: Vec<usize>, value: E) {
        debug_assert_eq!(t.len(), self.level + 1);
        self.parts.insert(t, value);
    }

    pub fn parts(&self) -> &BTreeMap<Vec<usize>, E> {
        &self.parts
    }

    pub fn map<F: Additive>(&self, f: impl Fn(&E) -> F) -> Cochain<F> {
        Cochain { level: self.level, parts: self.parts.iter().map(|(t, v)| (t.clone(), f(v))).collect() }
    }

    /// Restriction to strictly increasing tuples.
    pub fn alternating_part(&self) -> Self {
        Cochain {
            level: self.level,
            parts: self
                .parts
                .iter()
                .filter(|(t, _)| t.windows(2).all(|w| w[0] < w[1]))
                .map(|(t, v)| (t.clone(), v.clone()))
                .collect(),
        }
    }
}

impl<E: Additive> Additive for Cochain<E> {
    fn zero_like(&self) -> Self {
        self.map(E::zero_like)
    }
    fn is_zero(&self) -> bool {
        self.parts.values().all(E::is_zero)
    }
    fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.level, other.level);
        let mut parts = self.parts.clone();
        for (t, v) in &other.parts {
            let sum = match parts.get(t) {
                Some(a) => a.add(v),
                None => v.clone(),
            };
            parts.insert(t.clone(), sum);
        }
        Cochain { level: self.level, parts }
    }
    fn neg(&self) -> Self {
        self.map(E::neg)
    }
    fn scale(&self, c: &Rational) -> Self {
        self.map(|v| v.scale(c))
    }
}

/// The cosimplicial object of a cover: level `n` holds a value on every
/// weakly increasing `(n+1)`-tuple whose underlying set is an intersection of
/// the cover; `f : [m] -> [n]` acts by `(f x)_t = x_{t ∘ f}`.
#[derive(Clone, Debug, PartialEq)]
pub struct CosimplicialCech {
    cover: Cover,
    max_level: usize,
}

fn support(t: &[usize]) -> Vec<usize> {
    let mut s = t.to_vec();
    s.dedup();
    s
}

/// Builds the cosimplicial object with levels `0..=max_level`. The cover's
/// restriction maps are inclusions, validated for functoriality when the
/// cover was built.
pub fn cech_build(cover: Cover, max_level: usize) -> Result<CosimplicialCech> {
    for t in cover.shape().tuples() {
        for i in 0..t.len() {
            let mut s = t.clone();
            s.remove(i);
            if !s.is_empty() && !cover.admits(t, cover.allowed(&s)) {
                return Err(Error::NonFunctorial(format!("restriction from {s:?} to {t:?}")));
            }
        }
    }
    Ok(CosimplicialCech { cover, max_level })
}

impl CosimplicialCech {
    pub fn cover(&self) -> &Cover {
        &self.cover
    }

    pub fn max_level(&self) -> usize {
        self.max_level
    }

    /// Strictly increasing tuples at level `n`.
    pub fn alternating_tuples(&self, n: usize) -> Vec<Vec<usize>> {
        self.cover.shape().level(n)
    }

    /// Weakly increasing tuples at level `n`.
    pub fn tuples(&self, n: usize) -> Vec<Vec<usize>> {
        let m = self.cover.shape().count();
        if m == 0 {
            return Vec::new();
        }
        OrdinalMap::all(n, m - 1)
            .into_iter()
            .map(|f| f.images().to_vec())
            .filter(|t| self.cover.shape().contains(&support(t)))
            .collect()
    }

    fn check_level(&self, n: usize) -> Result<()> {
        if n > self.max_level {
            Err(Error::LevelOverflow(n))
        } else {
            Ok(())
        }
    }

    /// `x ↦ x ∘ f` from level `f.source()` to level `f.target()`.
    pub fn apply<E: Additive>(&self, f: &OrdinalMap, x: &Cochain<E>) -> Result<Cochain<E>> {
        if x.level != f.source() {
            return Err(Error::Shape(format!("map out of [{}] applied at level {}", f.source(), x.level)));
        }
        self.check_level(f.target())?;
        let mut parts = BTreeMap::new();
        for t in self.tuples(f.target()) {
            let s: Vec<usize> = f.images().iter().map(|&j| t[j]).collect();
            let v = x.parts.get(&s).ok_or_else(|| Error::Shape(format!("cochain has no value on {s:?}")))?;
            parts.insert(t, v.clone());
        }
        Ok(Cochain { level: f.target(), parts })
    }

    /// `δ_i` from level `n - 1` to level `n`.
    pub fn coface<E: Additive>(&self, i: usize, x: &Cochain<E>) -> Result<Cochain<E>> {
        let n = x.level + 1;
        if i > n {
            return Err(Error::Shape(format!("no coface δ_{i} at level {n}")));
        }
        self.apply(&OrdinalMap::coface(n, i), x)
    }

    /// `σ_i` from level `n + 1` to level `n`.
    pub fn codegeneracy<E: Additive>(&self, i: usize, x: &Cochain<E>) -> Result<Cochain<E>> {
        if x.level == 0 || i > x.level - 1 {
            return Err(Error::Shape(format!("no codegeneracy σ_{i} from level {}", x.level)));
        }
        self.apply(&OrdinalMap::codegeneracy(x.level - 1, i), x)
    }

    /// Whether each value of `x` is defined over its intersection.
    pub fn admits<D: Dgla>(&self, model: &D, x: &Cochain<D::Elem>) -> bool {
        x.parts.iter().all(|(t, v)| self.cover.admits(&support(t), &model.denominators(v)))
    }

    /// The DGLA at level `n`: the product over its tuples.
    pub fn level<'a, D: Dgla>(&'a self, model: &'a D, n: usize) -> Result<CechLevel<'a, D>> {
        self.check_level(n)?;
        Ok(CechLevel { model, level: n, tuples: self.tuples(n) })
    }
}

/// `ď x = sum_i (-1)^i δ_i x` on strictly increasing tuples.
pub fn cech_differential<E: Additive>(c: &CosimplicialCech, x: &Cochain<E>, zero: &E) -> Result<Cochain<E>> {
    let n = x.level + 1;
    c.check_level(n)?;
    let mut parts = BTreeMap::new();
    for t in c.alternating_tuples(n) {
        let mut acc = zero.zero_like();
        for i in 0..t.len() {
            let mut s = t.clone();
            s.remove(i);
            let v = x.parts.get(&s).ok_or_else(|| Error::Shape(format!("cochain has no value on {s:?}")))?;
            acc = if i % 2 == 0 { acc.add(v) } else { acc.sub(v) };
        }
        parts.insert(t, acc);
    }
    Ok(Cochain { level: n, parts })
}

/// One level of the cosimplicial DGLA, with componentwise operations.
pub struct CechLevel<'a, D: Dgla> {
    model: &'a D,
    level: usize,
    tuples: Vec<Vec<usize>>,
}

impl<D: Dgla> CechLevel<'_, D> {
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn tuples(&self) -> &[Vec<usize>] {
        &self.tuples
    }

    fn zip(&self, x: &Cochain<D::Elem>, y: &Cochain<D::Elem>, f: impl Fn(&D::Elem, &D::Elem) -> D::Elem) -> Cochain<D::Elem> {
        let parts = x.parts.iter().map(|(t, a)| (t.clone(), f(a, &y.parts[t]))).collect();
        Cochain { level: self.level, parts }
    }
}

impl<D: Dgla> Dgla for CechLevel<'_, D> {
    type Elem = Cochain<D::Elem>;

    fn name(&self) -> String {
        format!("level {} of the Cech object over {}", self.level, self.model.name())
    }

    fn degree_of(&self, x: &Self::Elem) -> i32 {
        x.parts.values().next().map(|v| self.model.degree_of(v)).unwrap_or(0)
    }

    fn zero(&self, degree: i32) -> Self::Elem {
        Cochain::zero(self.level, &self.tuples, &self.model.zero(degree))
    }

    fn differential(&self, x: &Self::Elem) -> Self::Elem {
        x.map(|v| self.model.differential(v))
    }

    fn bracket(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        self.zip(x, y, |a, b| self.model.bracket(a, b))
    }

    fn is_quantum_type(&self) -> bool {
        self.model.is_quantum_type()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formal::int;
    use crate::simplicial::CoverShape;

    fn two_open() -> CosimplicialCech {
        cech_build(Cover::constant(CoverShape::full(2)), 3).unwrap()
    }

    #[test]
    fn two_open_difference() {
        let c = two_open();
        let x = Cochain::new(0, [(vec![0], int(3)), (vec![1], int(5))].into_iter().collect()).unwrap();
        let dx = cech_differential(&c, &x, &int(0)).unwrap();
        assert_eq!(dx.get(&[0, 1]), Some(&int(2)));
        let ddx = cech_differential(&c, &dx, &int(0)).unwrap();
        assert!(ddx.parts().is_empty());
    }

    #[test]
    fn weak_tuples() {
        let c = two_open();
        assert_eq!(c.tuples(1), vec![vec![0, 0], vec![0, 1], vec![1, 1]]);
        let circle = cech_build(Cover::constant(CoverShape::closure(3, [vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap()), 3).unwrap();
        assert!(!circle.tuples(2).contains(&vec![0, 1, 2]));
        assert!(circle.tuples(2).contains(&vec![0, 0, 2]));
    }

    #[test]
    fn overflow() {
        let c = two_open();
        let x = Cochain::zero(3, &c.alternating_tuples(3), &int(0));
        assert_eq!(cech_differential(&c, &x, &int(0)), Err(Error::LevelOverflow(4)));
    }

    #[test]
    fn one_index_is_constant() {
        let c = cech_build(Cover::constant(CoverShape::full(1)), 2).unwrap();
        let x = Cochain::new(0, [(vec![0], int(7))].into_iter().collect()).unwrap();
        let y = c.coface(0, &x).unwrap();
        assert_eq!(y.get(&[0, 0]), Some(&int(7)));
        assert_eq!(c.codegeneracy(0, &y).unwrap(), x);
    }
}
