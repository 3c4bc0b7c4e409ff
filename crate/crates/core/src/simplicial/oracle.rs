use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use super::cech::{cech_differential, Cochain, CosimplicialCech};
use crate::algebroid::{PolyDiff, PolyDiffModel, PolyVector, PolyVectorModel};
use crate::dgla::{AbelianModel, CochainVector, Dgla};
use crate::error::{Error, OracleFailure, Result};
use crate::formal::{Additive, CoeffRing, Monomial, Poly, RatFunc, Rational};

/// Coefficients that expand in a rational basis.
pub trait CoeffCoordinates: CoeffRing {
    type Key: Ord + Clone + fmt::Debug;
    /// `None` when the value has no finite expansion in the basis.
    fn coordinates(&self) -> Option<Vec<(Self::Key, Rational)>>;
    fn basis(zero: &Self, key: &Self::Key) -> Self;
}

impl CoeffCoordinates for Poly {
    type Key = Monomial;
    fn coordinates(&self) -> Option<Vec<(Monomial, Rational)>> {
        Some(self.terms().iter().map(|(m, c)| (m.clone(), c.clone())).collect())
    }
    fn basis(zero: &Poly, key: &Monomial) -> Poly {
        Poly::from_terms(zero.shared_vars().clone(), [(key.clone(), Rational::one())])
    }
}

/// Laurent monomials; values with other denominators have no coordinates.
impl CoeffCoordinates for RatFunc {
    type Key = Vec<i64>;
    fn coordinates(&self) -> Option<Vec<(Vec<i64>, Rational)>> {
        let den = self.denom();
        if den.len() != 1 {
            return None;
        }
        let (shift, c) = den.leading().expect("nonzero denominator");
        if !c.is_one() {
            return None;
        }
        Some(
            self.numer()
                .terms()
                .iter()
                .map(|(m, c)| (m.0.iter().zip(&shift.0).map(|(&a, &b)| a as i64 - b as i64).collect(), c.clone()))
                .collect(),
        )
    }
    fn basis(zero: &RatFunc, key: &Vec<i64>) -> RatFunc {
        let vars = zero.numer().shared_vars().clone();
        let pos = Monomial(key.iter().map(|&e| e.max(0) as u32).collect());
        let neg = Monomial(key.iter().map(|&e| (-e).max(0) as u32).collect());
        let num = Poly::from_terms(vars.clone(), [(pos, Rational::one())]);
        let den = Poly::from_terms(vars, [(neg, Rational::one())]);
        RatFunc::new(num, den).expect("monomial denominator")
    }
}

/// A DGLA whose homogeneous components expand in a rational basis; needed
/// by the linear splitting oracle.
pub trait LinearDgla: Dgla {
    type Key: Ord + Clone + fmt::Debug;
    fn coordinates(&self, x: &Self::Elem) -> Option<Vec<(Self::Key, Rational)>>;
    fn basis_element(&self, degree: i32, key: &Self::Key) -> Self::Elem;
}

impl LinearDgla for AbelianModel {
    type Key = usize;
    fn coordinates(&self, x: &CochainVector) -> Option<Vec<(usize, Rational)>> {
        Some(x.entries.iter().cloned().enumerate().filter(|(_, c)| !Zero::is_zero(c)).collect())
    }
    fn basis_element(&self, degree: i32, key: &usize) -> CochainVector {
        let mut v = self.zero(degree);
        v.entries[*key] = Rational::one();
        v
    }
}

fn expand<K: Clone, C: CoeffCoordinates>(terms: &BTreeMap<K, C>) -> Option<Vec<((K, C::Key), Rational)>> {
    let mut out = Vec::new();
    for (k, c) in terms {
        for (m, r) in c.coordinates()? {
            out.push(((k.clone(), m), r));
        }
    }
    Some(out)
}

impl<C: CoeffCoordinates> LinearDgla for PolyVectorModel<C> {
    type Key = (Vec<usize>, C::Key);
    fn coordinates(&self, x: &PolyVector<C>) -> Option<Vec<(Self::Key, Rational)>> {
        expand(x.terms())
    }
    fn basis_element(&self, _degree: i32, key: &Self::Key) -> PolyVector<C> {
        PolyVector::basis(&key.0, C::basis(self.algebroid.zero_coeff(), &key.1))
    }
}

impl<C: CoeffCoordinates> LinearDgla for PolyDiffModel<C> {
    type Key = (Vec<Vec<u32>>, C::Key);
    fn coordinates(&self, x: &PolyDiff<C>) -> Option<Vec<(Self::Key, Rational)>> {
        expand(x.terms())
    }
    fn basis_element(&self, _degree: i32, key: &Self::Key) -> PolyDiff<C> {
        PolyDiff::term(key.0.clone(), C::basis(self.zero_coeff(), &key.1))
    }
}

/// Witnesses for the vanishing of Čech cohomology in positive degrees.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SplittingOracle {
    /// Only the zero cocycle; enough for one-index covers.
    Trivial,
    /// `b_{i_1..i_k} = c_{0 i_1..i_k}` for `i_1 > 0`, else `0`; needs `{0} ∪ t`
    /// in the cover for every intersection `t`.
    Cone,
    /// Exact linear algebra over the rationals, coordinate by coordinate.
    Linear,
}

impl FromStr for SplittingOracle {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "trivial" => Ok(SplittingOracle::Trivial),
            "cone" => Ok(SplittingOracle::Cone),
            "linear" => Ok(SplittingOracle::Linear),
            other => Err(Error::Invalid(format!("unknown oracle '{other}'"))),
        }
    }
}

impl fmt::Display for SplittingOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SplittingOracle::Trivial => "trivial",
            SplittingOracle::Cone => "cone",
            SplittingOracle::Linear => "linear",
        })
    }
}

impl SplittingOracle {
    /// A cochain `b` with `ď b = cocycle` whose values are defined on their
    /// intersections. `degree` is the DGLA degree of the values.
    pub fn split<D: LinearDgla>(
        &self,
        cech: &CosimplicialCech,
        model: &D,
        degree: i32,
        cocycle: &Cochain<D::Elem>,
        hbar_order: Option<usize>,
    ) -> Result<Cochain<D::Elem>> {
        let level = cocycle.level();
        let fail = |reason: String| {
            Error::Oracle(OracleFailure {
                oracle: self.to_string(),
                reason,
                hbar_order,
                cochain_level: level,
                witness: cocycle
                    .parts()
                    .iter()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(t, v)| (t.clone(), format!("{v:?}")))
                    .collect(),
            })
        };
        if level == 0 {
            return Err(fail("only positive-degree cocycles are split".into()));
        }
        let zero = model.zero(degree);
        let tuples = cech.alternating_tuples(level - 1);
        let b = match self {
            SplittingOracle::Trivial => {
                if !cocycle.is_zero() {
                    return Err(fail("nonzero cocycle".into()));
                }
                Cochain::zero(level - 1, &tuples, &zero)
            }
            SplittingOracle::Cone => {
                let shape = cech.cover().shape();
                let mut b = Cochain::zero(level - 1, &tuples, &zero);
                for t in &tuples {
                    if t[0] == 0 {
                        continue;
                    }
                    let mut cone = vec![0];
                    cone.extend(t);
                    if !shape.contains(&cone) {
                        return Err(fail(format!("the cover has no intersection {cone:?}")));
                    }
                    b.set(t.clone(), cocycle.get(&cone).expect("dense cochain").clone());
                }
                b
            }
            SplittingOracle::Linear => self.linear(cech, model, degree, cocycle, &tuples).map_err(fail)?,
        };
        if !cech.admits(model, &b) {
            return Err(fail("the splitting is not defined on its intersections".into()));
        }
        let db = cech_differential(cech, &b, &zero)?;
        if db != *cocycle {
            return Err(fail("not a coboundary".into()));
        }
        Ok(b)
    }

    fn linear<D: LinearDgla>(
        &self,
        cech: &CosimplicialCech,
        model: &D,
        degree: i32,
        cocycle: &Cochain<D::Elem>,
        tuples: &[Vec<usize>],
    ) -> std::result::Result<Cochain<D::Elem>, String> {
        let mut by_key: BTreeMap<D::Key, BTreeMap<Vec<usize>, Rational>> = BTreeMap::new();
        for (t, v) in cocycle.parts() {
            let coords = model.coordinates(v).ok_or_else(|| format!("no finite coordinates on {t:?}"))?;
            for (k, c) in coords {
                by_key.entry(k).or_default().insert(t.clone(), c);
            }
        }
        let rows: Vec<&Vec<usize>> = cocycle.parts().keys().collect();
        let mut b = Cochain::zero(cocycle.level() - 1, tuples, &model.zero(degree));
        for (key, rhs) in by_key {
            let basis = model.basis_element(degree, &key);
            let dens = model.denominators(&basis);
            let unknowns: Vec<&Vec<usize>> = tuples.iter().filter(|s| cech.cover().admits(s, &dens)).collect();
            let col: BTreeMap<&Vec<usize>, usize> = unknowns.iter().enumerate().map(|(i, s)| (*s, i)).collect();
            let mut matrix = vec![vec![Rational::zero(); unknowns.len()]; rows.len()];
            let mut target = vec![Rational::zero(); rows.len()];
            for (r, t) in rows.iter().enumerate() {
                target[r] = rhs.get(*t).cloned().unwrap_or_else(Rational::zero);
                for i in 0..t.len() {
                    let mut s = (*t).clone();
                    s.remove(i);
                    if let Some(&c) = col.get(&s) {
                        matrix[r][c] += if i % 2 == 0 { Rational::one() } else { -Rational::one() };
                    }
                }
            }
            let sol = solve(matrix, target).ok_or_else(|| format!("no splitting for coordinate {key:?}"))?;
            for (s, x) in unknowns.iter().zip(sol) {
                if !Zero::is_zero(&x) {
                    let cur = b.get(s).expect("dense cochain").clone();
                    b.set((*s).clone(), cur.add(&basis.scale(&x)));
                }
            }
        }
        Ok(b)
    }
}

/// One solution of `a x = b` over the rationals, free variables set to zero.
pub fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !Zero::is_zero(&a[i][c])) else {
            continue;
        };
        a.swap(r, p);
        b.swap(r, p);
        let inv = a[r][c].recip();
        for x in &mut a[r] {
            *x *= &inv;
        }
        b[r] *= &inv;
        for i in 0..rows {
            if i != r && !Zero::is_zero(&a[i][c]) {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let v = &a[r][j] * &f;
                    a[i][j] -= v;
                }
                let v = &b[r] * &f;
                b[i] -= v;
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if b[r..].iter().any(|x| !Zero::is_zero(x)) {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = b[i].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formal::{int, rat};
    use crate::simplicial::{cech_build, Cover, CoverShape};

    fn koszul() -> AbelianModel {
        AbelianModel::koszul(vec![int(0), int(0), int(0)])
    }

    fn v(m: &AbelianModel, a: i64) -> CochainVector {
        m.vector(0, vec![int(a), int(0), int(0)]).unwrap()
    }

    #[test]
    fn solver() {
        let a = vec![vec![int(1), int(1)], vec![int(1), int(-1)]];
        assert_eq!(solve(a, vec![int(3), int(1)]), Some(vec![int(2), int(1)]));
        let a = vec![vec![int(1)], vec![int(1)]];
        assert_eq!(solve(a, vec![int(1), int(2)]), None);
        assert_eq!(solve(vec![vec![rat(1, 2), int(0)]], vec![int(1)]), Some(vec![int(2), int(0)]));
    }

    #[test]
    fn cone_and_linear_agree_on_the_triangle() {
        let m = koszul();
        let c = cech_build(Cover::constant(CoverShape::full(3)), 3).unwrap();
        let b0 = Cochain::new(0, (0..3).map(|i| (vec![i], v(&m, i as i64 * i as i64))).collect()).unwrap();
        let g = cech_differential(&c, &b0, &m.zero(0)).unwrap();
        for o in [SplittingOracle::Cone, SplittingOracle::Linear] {
            let b = o.split(&c, &m, 0, &g, Some(1)).unwrap();
            assert_eq!(cech_differential(&c, &b, &m.zero(0)).unwrap(), g);
        }
    }

    #[test]
    fn circle_class_is_not_split() {
        let m = koszul();
        let shape = CoverShape::closure(3, [vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        let c = cech_build(Cover::constant(shape), 3).unwrap();
        let mut g = Cochain::zero(1, &c.alternating_tuples(1), &m.zero(0));
        g.set(vec![0, 2], v(&m, 1));
        for o in [SplittingOracle::Cone, SplittingOracle::Linear, SplittingOracle::Trivial] {
            match o.split(&c, &m, 0, &g, Some(1)) {
                Err(Error::Oracle(f)) => {
                    assert_eq!(f.cochain_level, 1);
                    assert_eq!(f.witness.len(), 1);
                    assert_eq!(f.witness[0].0, vec![0, 2]);
                }
                other => panic!("{o}: {other:?}"),
            }
        }
    }
}
