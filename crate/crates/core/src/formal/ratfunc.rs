use std::fmt;
use std::sync::Arc;

use num_traits::One;

use super::{Additive, CoeffRing, Poly, Rational, Ring};
use crate::error::{Error, Result};

/// Quotient of polynomials in lowest terms with a monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        num.check_vars(&den)?;
        if den.is_empty() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: Poly, den: Poly) -> Self {
        if num.is_empty() {
            let one = den.one_like();
            return RatFunc { num, den: one };
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (num.exact_div(&g).expect("gcd divides"), den.exact_div(&g).expect("gcd divides"))
        };
        let lc = den.leading().map(|(_, c)| c.clone()).expect("nonzero denominator");
        let inv = lc.recip();
        RatFunc { num: num.scale_by(&inv), den: den.scale_by(&inv) }
    }

    pub fn from_poly_value(p: Poly) -> Self {
        let den = p.one_like();
        RatFunc { num: p, den }
    }

    pub fn constant_in(vars: Arc<Vec<String>>, c: Rational) -> Self {
        Self::from_poly_value(Poly::constant_in(vars, c))
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_constant()
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc> {
        if other.num.is_empty() {
            return Err(Error::DivisionByZero);
        }
        RatFunc::new(self.num.mul_poly(&other.den), self.den.mul_poly(&other.num))
    }

    pub fn pow(&self, e: i64) -> Result<RatFunc> {
        let base = if e < 0 { self.one_like().div(self)? } else { self.clone() };
        let mut acc = self.one_like();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        let d = self.den.eval(point);
        if num_traits::Zero::is_zero(&d) {
            return Err(Error::DivisionByZero);
        }
        Ok(self.num.eval(point) / d)
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self})")
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &Poly| {
            if p.len() > 1 {
                format!("({p})")
            } else {
                p.to_string()
            }
        };
        let den = self.den.to_string();
        if self.den.len() > 1 || den.contains('*') {
            write!(f, "{}/({den})", wrap(&self.num))
        } else {
            write!(f, "{}/{den}", wrap(&self.num))
        }
    }
}

impl Additive for RatFunc {
    fn zero_like(&self) -> Self {
        Self::from_poly_value(self.num.zero_like())
    }
    fn is_zero(&self) -> bool {
        self.num.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        if self.is_poly() && other.is_poly() {
            return Self::from_poly_value(self.num.add_poly(&other.num));
        }
        if self.den == other.den {
            return Self::normalized(self.num.add_poly(&other.num), self.den.clone());
        }
        let num = self.num.mul_poly(&other.den).add_poly(&other.num.mul_poly(&self.den));
        Self::normalized(num, self.den.mul_poly(&other.den))
    }
    fn neg(&self) -> Self {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }
    fn scale(&self, c: &Rational) -> Self {
        if num_traits::Zero::is_zero(c) {
            return self.zero_like();
        }
        RatFunc { num: self.num.scale_by(c), den: self.den.clone() }
    }
    fn compatible(&self, other: &Self) -> bool {
        self.num.compatible(&other.num)
    }
}

impl Ring for RatFunc {
    fn one_like(&self) -> Self {
        Self::from_poly_value(self.num.one_like())
    }
    fn mul(&self, other: &Self) -> Self {
        if self.is_poly() && other.is_poly() {
            return Self::from_poly_value(self.num.mul_poly(&other.num));
        }
        Self::normalized(self.num.mul_poly(&other.num), self.den.mul_poly(&other.den))
    }
}

impl CoeffRing for RatFunc {
    fn vars(&self) -> &[String] {
        self.num.vars()
    }
    fn from_poly(p: Poly) -> Self {
        Self::from_poly_value(p)
    }
    fn partial(&self, var: usize) -> Self {
        if self.is_poly() {
            return Self::from_poly_value(self.num.derivative(var));
        }
        let num = self
            .num
            .derivative(var)
            .mul_poly(&self.den)
            .sub_poly(&self.num.mul_poly(&self.den.derivative(var)));
        Self::normalized(num, self.den.mul_poly(&self.den))
    }
    fn try_inverse(&self) -> Option<Self> {
        if self.num.is_empty() {
            None
        } else {
            Some(Self::normalized(self.den.clone(), self.num.clone()))
        }
    }
    fn denominator(&self) -> Option<Poly> {
        (!self.is_poly()).then(|| self.den.clone())
    }
    fn as_constant(&self) -> Option<Rational> {
        (self.is_poly() && self.num.is_constant()).then(|| self.num.constant_term())
    }
    fn as_poly(&self) -> Option<Poly> {
        self.is_poly().then(|| {
            let c = self.den.constant_term();
            if c.is_one() {
                self.num.clone()
            } else {
                self.num.scale_by(&c.recip())
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formal::parse_expr;

    fn r(s: &str) -> RatFunc {
        parse_expr(s, &["x", "y"]).unwrap().to_ratfunc_in(&["x".into(), "y".into()]).unwrap()
    }

    #[test]
    fn reduces_to_lowest_terms() {
        let f = r("(x^2 - y^2)/(2*x + 2*y)");
        assert_eq!(f, r("x/2 - y/2"));
        assert!(f.is_poly());
    }

    #[test]
    fn denominator_is_monic() {
        let f = r("1/(3*x + 6)");
        assert_eq!(f.denom().leading().unwrap().1, &Rational::one());
        assert_eq!(f.to_string(), "1/3/(x + 2)");
    }

    #[test]
    fn quotient_rule() {
        let f = r("1/x");
        assert_eq!(f.partial(0), r("-1/x^2"));
        assert_eq!(r("x/(x+y)").partial(1), r("-x/(x+y)^2"));
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(r("x").div(&r("0")), Err(Error::DivisionByZero));
    }

    #[test]
    fn sum_with_common_factor() {
        assert_eq!(r("1/(x*y)").add(&r("1/(x*(y+1))")), r("(2*y+1)/(x*y*(y+1))"));
    }
}
