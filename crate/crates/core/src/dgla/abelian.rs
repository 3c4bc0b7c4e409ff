use std::collections::BTreeMap;

use num_traits::Zero;

use super::Dgla;
use crate::error::{Error, Result};
use crate::formal::{Additive, Rational};

/// Vector in one degree of a finite cochain complex.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CochainVector {
    pub degree: i32,
    pub entries: Vec<Rational>,
}

impl Additive for CochainVector {
    fn zero_like(&self) -> Self {
        CochainVector { degree: self.degree, entries: vec![Rational::zero(); self.entries.len()] }
    }
    fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }
    fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.degree, other.degree);
        CochainVector {
            degree: self.degree,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        }
    }
    fn neg(&self) -> Self {
        CochainVector { degree: self.degree, entries: self.entries.iter().map(|a| -a).collect() }
    }
    fn scale(&self, c: &Rational) -> Self {
        CochainVector { degree: self.degree, entries: self.entries.iter().map(|a| a * c).collect() }
    }
    fn compatible(&self, other: &Self) -> bool {
        self.degree == other.degree && self.entries.len() == other.entries.len()
    }
}

/// Finite-dimensional cochain complex with zero bracket.
#[derive(Clone, Debug)]
pub struct AbelianModel {
    dims: BTreeMap<i32, usize>,
    /// `d[k]` maps degree `k` to `k + 1`, as rows of the target.
    d: BTreeMap<i32, Vec<Vec<Rational>>>,
}

impl AbelianModel {
    /// Validates shapes and `d ∘ d = 0`.
    pub fn new(dims: BTreeMap<i32, usize>, d: BTreeMap<i32, Vec<Vec<Rational>>>) -> Result<Self> {
        for (&k, m) in &d {
            let src = dims.get(&k).copied().unwrap_or(0);
            let tgt = dims.get(&(k + 1)).copied().unwrap_or(0);
            if m.len() != tgt || m.iter().any(|row| row.len() != src) {
                return Err(Error::Shape(format!("differential in degree {k} has the wrong shape")));
            }
        }
        let model = AbelianModel { dims, d };
        for &k in model.dims.keys() {
            for i in 0..model.dim(k) {
                let mut e = vec![Rational::zero(); model.dim(k)];
                e[i] = Rational::from_integer(1.into());
                let v = CochainVector { degree: k, entries: e };
                if !model.differential(&model.differential(&v)).is_zero() {
                    return Err(Error::Invalid(format!("d∘d is nonzero in degree {k}")));
                }
            }
        }
        Ok(model)
    }

    /// Koszul complex `Λ^0 → Λ^1 → Λ^2 → Λ^3` of `k^3` with `d = v ∧ -`,
    /// placed in degrees -1..=2.
    pub fn koszul(v: Vec<Rational>) -> Self {
        assert_eq!(v.len(), 3);
        let dims: BTreeMap<i32, usize> = [(-1, 1), (0, 3), (1, 3), (2, 1)].into_iter().collect();
        let z = Rational::zero;
        // basis of Λ^2: e01, e02, e12
        let d_m1 = vec![vec![v[0].clone()], vec![v[1].clone()], vec![v[2].clone()]];
        let d_0 = vec![
            vec![-v[1].clone(), v[0].clone(), z()],
            vec![-v[2].clone(), z(), v[0].clone()],
            vec![z(), -v[2].clone(), v[1].clone()],
        ];
        let d_1 = vec![vec![v[2].clone(), -v[1].clone(), v[0].clone()]];
        let d = [(-1, d_m1), (0, d_0), (1, d_1)].into_iter().collect();
        AbelianModel::new(dims, d).expect("Koszul complex squares to zero")
    }

    pub fn dim(&self, k: i32) -> usize {
        self.dims.get(&k).copied().unwrap_or(0)
    }

    pub fn vector(&self, degree: i32, entries: Vec<Rational>) -> Result<CochainVector> {
        if entries.len() != self.dim(degree) {
            return Err(Error::Shape(format!(
                "degree {degree} has dimension {}, got {} entries",
                self.dim(degree),
                entries.len()
            )));
        }
        Ok(CochainVector { degree, entries })
    }
}

impl Dgla for AbelianModel {
    type Elem = CochainVector;

    fn name(&self) -> String {
        "abelian".into()
    }
    fn degree_of(&self, x: &CochainVector) -> i32 {
        x.degree
    }
    fn zero(&self, degree: i32) -> CochainVector {
        CochainVector { degree, entries: vec![Rational::zero(); self.dim(degree)] }
    }
    fn differential(&self, x: &CochainVector) -> CochainVector {
        match self.d.get(&x.degree) {
            None => self.zero(x.degree + 1),
            Some(m) => CochainVector {
                degree: x.degree + 1,
                entries: m
                    .iter()
                    .map(|row| row.iter().zip(&x.entries).map(|(a, b)| a * b).sum())
                    .collect(),
            },
        }
    }
    fn bracket(&self, x: &CochainVector, y: &CochainVector) -> CochainVector {
        self.zero(x.degree + y.degree)
    }
    fn is_quantum_type(&self) -> bool {
        self.dims.iter().all(|(&k, &n)| k >= -1 || n == 0)
    }
}
