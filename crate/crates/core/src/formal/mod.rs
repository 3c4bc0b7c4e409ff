//! Exact coefficient arithmetic: rationals, sparse multivariate polynomials,
//! rational functions and ℏ-truncated series, plus the textual expression
//! grammar shared by every input file.

mod parse;
mod poly;
mod ratfunc;
mod series;

use std::fmt;

pub use parse::{parse_expr, parse_poly, parse_series, Expr, HBAR};
pub use poly::{poly_arith, Monomial, Poly, PolyOp};
pub use ratfunc::RatFunc;
pub use series::{series_is_zero_mod, series_mul, HbarSeries};

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Arbitrary-precision rational number, always kept in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n!` as an exact rational.
pub fn factorial(n: usize) -> Rational {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    Rational::from_integer(acc)
}

/// Bernoulli numbers B_0..=B_n with the convention B_1 = -1/2.
pub fn bernoulli_numbers(n: usize) -> Vec<Rational> {
    let mut b: Vec<Rational> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        if m == 0 {
            b.push(Rational::one());
            continue;
        }
        // sum_{k=0}^{m} C(m+1, k) B_k = 0
        let mut acc = Rational::zero();
        let mut binom = BigInt::one();
        for (k, bk) in b.iter().enumerate() {
            acc += Rational::from_integer(binom.clone()) * bk;
            binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
        }
        b.push(-acc / Rational::from_integer(BigInt::from(m + 1)));
    }
    b
}

/// Additive group with rational scalars, for values that carry their own
/// context (a variable list, a degree), so zero is produced from an instance.
pub trait Additive: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, c: &Rational) -> Self;

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Compatibility of contexts, e.g. equal variable lists.
    fn compatible(&self, _other: &Self) -> bool {
        true
    }
}

/// Commutative ring on top of [`Additive`].
pub trait Ring: Additive + fmt::Display {
    fn one_like(&self) -> Self;
    fn mul(&self, other: &Self) -> Self;
}

/// A coefficient ring for the algebroid models: functions on an affine
/// chart, with coordinate derivations.
pub trait CoeffRing: Ring {
    fn vars(&self) -> &[String];
    fn from_poly(p: Poly) -> Self;
    fn partial(&self, var: usize) -> Self;
    fn try_inverse(&self) -> Option<Self>;
    /// Denominator, when this value is not a polynomial.
    fn denominator(&self) -> Option<Poly>;
    /// Value as a rational constant, if it is one.
    fn as_constant(&self) -> Option<Rational>;
    /// Polynomial view, when the value is a polynomial.
    fn as_poly(&self) -> Option<Poly>;

    fn constant(&self, c: &Rational) -> Self {
        self.one_like().scale(c)
    }
}

impl Additive for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, c: &Rational) -> Self {
        self * c
    }
}

impl Ring for Rational {
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_small_values() {
        let b = bernoulli_numbers(8);
        assert_eq!(b[1], rat(-1, 2));
        assert_eq!(b[2], rat(1, 6));
        assert_eq!(b[3], int(0));
        assert_eq!(b[4], rat(-1, 30));
        assert_eq!(b[6], rat(1, 42));
        assert_eq!(b[8], rat(-1, 30));
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), int(1));
        assert_eq!(factorial(5), int(120));
    }
}
