use std::fmt;

use super::{Additive, Rational, Ring};
use crate::error::{Error, Result};

/// Truncated power series `c_0 + c_1 h + ... + c_N h^N`, exact modulo
/// `h^(N+1)`. Coefficients live in any additive space; products need either
/// a ring or an explicit bilinear map.
#[derive(Clone, PartialEq)]
pub struct HbarSeries<C> {
    coeffs: Vec<C>,
}

impl<C: Additive> HbarSeries<C> {
    /// Zero series of order `n`, with `zero` as the template coefficient.
    pub fn zero(zero: &C, n: usize) -> Self {
        let z = zero.zero_like();
        HbarSeries { coeffs: vec![z; n + 1] }
    }

    /// Requires `coeffs` to be nonempty; the order is `coeffs.len() - 1`.
    pub fn from_coeffs(coeffs: Vec<C>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least the h^0 coefficient");
        HbarSeries { coeffs }
    }

    /// `c * h^k` truncated at order `n`.
    pub fn monomial(c: C, k: usize, n: usize) -> Self {
        let mut s = Self::zero(&c, n);
        if k <= n {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &C {
        &self.coeffs[k]
    }

    pub fn set_coeff(&mut self, k: usize, c: C) {
        self.coeffs[k] = c;
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Additive::is_zero)
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn check_order(&self, other: &Self) -> Result<()> {
        if self.order() == other.order() {
            Ok(())
        } else {
            Err(Error::OrderMismatch(self.order(), other.order()))
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.order(), other.order(), "truncation orders differ");
        HbarSeries {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.order(), other.order(), "truncation orders differ");
        HbarSeries {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.map(|c| c.neg())
    }

    pub fn scale(&self, r: &Rational) -> Self {
        self.map(|c| c.scale(r))
    }

    pub fn map<D: Additive>(&self, f: impl Fn(&C) -> D) -> HbarSeries<D> {
        HbarSeries { coeffs: self.coeffs.iter().map(f).collect() }
    }

    /// Cauchy product through a bilinear map, truncated at the common order.
    pub fn bilinear<D: Additive, E: Additive>(
        &self,
        other: &HbarSeries<D>,
        f: impl Fn(&C, &D) -> E,
        zero: &E,
    ) -> HbarSeries<E> {
        assert_eq!(self.order(), other.order(), "truncation orders differ");
        let n = self.order();
        let mut out = HbarSeries::zero(zero, n);
        for i in 0..=n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=n - i {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                let t = f(&self.coeffs[i], &other.coeffs[j]);
                out.coeffs[i + j] = out.coeffs[i + j].add(&t);
            }
        }
        out
    }

    /// Multiplies by `h^k`, dropping what falls beyond the order.
    pub fn shift(&self, k: usize) -> Self {
        let n = self.order();
        let mut out = Self::zero(&self.coeffs[0], n);
        for i in 0..=n.saturating_sub(k) {
            if i + k <= n {
                out.coeffs[i + k] = self.coeffs[i].clone();
            }
        }
        out
    }

    /// Keeps coefficients of order `<= m` and re-truncates to order `m`.
    pub fn truncate(&self, m: usize) -> Self {
        assert!(m <= self.order());
        HbarSeries { coeffs: self.coeffs[..=m].to_vec() }
    }

    /// Zeroes every coefficient except the one at `h^k`.
    pub fn part(&self, k: usize) -> Self {
        let mut out = Self::zero(&self.coeffs[0], self.order());
        out.coeffs[k] = self.coeffs[k].clone();
        out
    }

    /// Pads with zero coefficients up to order `n`.
    pub fn extend(&self, n: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        let z = coeffs[0].zero_like();
        while coeffs.len() < n + 1 {
            coeffs.push(z.clone());
        }
        HbarSeries { coeffs }
    }
}

impl<C: Ring> HbarSeries<C> {
    pub fn one(template: &C, n: usize) -> Self {
        Self::monomial(template.one_like(), 0, n)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.bilinear(other, |a, b| a.mul(b), &self.coeffs[0])
    }
}

impl<C: Additive> fmt::Debug for HbarSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs.iter()).finish()
    }
}

impl<C: Additive + fmt::Display> fmt::Display for HbarSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "h*({c})")?,
                _ => write!(f, "h^{k}*({c})")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " mod h^{}", self.order() + 1)
    }
}

/// Cauchy product of two series of equal order over a common ring.
pub fn series_mul<C: Ring>(a: &HbarSeries<C>, b: &HbarSeries<C>) -> Result<HbarSeries<C>> {
    a.check_order(b)?;
    if !a.coeffs[0].compatible(&b.coeffs[0]) {
        return Err(Error::ModelMismatch("coefficient spaces differ".into()));
    }
    Ok(a.mul(b))
}

/// True iff the coefficients of `h^0 .. h^(i-1)` vanish.
pub fn series_is_zero_mod<C: Additive>(a: &HbarSeries<C>, i: usize) -> bool {
    a.coeffs.iter().take(i).all(Additive::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formal::int;

    fn s(v: &[i64]) -> HbarSeries<Rational> {
        HbarSeries::from_coeffs(v.iter().map(|&x| int(x)).collect())
    }

    #[test]
    fn truncation_kills_h_squared() {
        assert_eq!(series_mul(&s(&[1, 1]), &s(&[1, -1])).unwrap(), s(&[1, 0]));
    }

    #[test]
    fn order_mismatch() {
        assert_eq!(series_mul(&s(&[1, 1]), &s(&[1, 1, 1])), Err(Error::OrderMismatch(1, 2)));
    }

    #[test]
    fn zero_mod() {
        let c = s(&[0, 0, 5]);
        assert!(series_is_zero_mod(&c, 2));
        assert!(!series_is_zero_mod(&c, 3));
        let p = series_mul(&s(&[0, 2, 1]), &s(&[0, 3, 0])).unwrap();
        assert!(series_is_zero_mod(&p, 2));
    }

    #[test]
    fn shift_and_part() {
        assert_eq!(s(&[1, 2, 3]).shift(1), s(&[0, 1, 2]));
        assert_eq!(s(&[1, 2, 3]).part(1), s(&[0, 2, 0]));
    }
}
