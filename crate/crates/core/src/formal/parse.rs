//! Expression grammar:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' '-'? integer)?
//! atom   := integer | identifier | '(' expr ')'
//! ```
//!
//! The identifier `h` (or `ℏ`) is the deformation parameter; every other
//! identifier must be a declared variable.

use num_bigint::BigInt;
use num_traits::Zero;

use super::{Additive, CoeffRing, HbarSeries, Poly, RatFunc, Rational, Ring};
use crate::error::{Error, Result};

pub const HBAR: &str = "h";

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(Rational),
    Var(usize),
    Hbar,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().map(|&(_, c)| c).collect();
            out.push((pos, Tok::Int(digits.parse().expect("digits"))));
        } else if c == 'ℏ' {
            out.push((pos, Tok::Ident(HBAR.to_string())));
            i += 1;
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            out.push((pos, Tok::Ident(chars[start..i].iter().map(|&(_, c)| c).collect())));
        } else if "+-*/^()".contains(c) {
            out.push((pos, Tok::Op(c)));
            i += 1;
        } else {
            return Err(Error::parse(0, format!("unexpected character '{c}' at column {}", pos + 1)));
        }
    }
    Ok(out)
}

struct Parser<'a, S> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    vars: &'a [S],
    len: usize,
}

impl<'a, S: AsRef<str>> Parser<'a, S> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| p + 1).unwrap_or(self.len + 1)
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::parse(0, format!("{msg} at column {}", self.column())))
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let neg = self.eat('-');
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                let e: i64 = match i64::try_from(n) {
                    Ok(e) if e <= 1000 => e,
                    _ => return self.err("exponent too large"),
                };
                Ok(Expr::Pow(Box::new(base), if neg { -e } else { e }))
            }
            _ => self.err("expected an integer exponent"),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Expr::Num(Rational::from_integer(n)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if name == HBAR {
                    return Ok(Expr::Hbar);
                }
                match self.vars.iter().position(|v| v.as_ref() == name) {
                    Some(i) => Ok(Expr::Var(i)),
                    None => {
                        self.pos -= 1;
                        self.err(&format!("unknown variable '{name}'"))
                    }
                }
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected ')'");
                }
                Ok(e)
            }
            Some(_) => self.err("unexpected token"),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses an expression over the declared variables (plus `h`).
pub fn parse_expr<S: AsRef<str>>(src: &str, vars: &[S]) -> Result<Expr> {
    if vars.iter().any(|v| v.as_ref() == HBAR) {
        return Err(Error::parse(0, "'h' is reserved for the deformation parameter"));
    }
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, vars, len: src.chars().count() };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// Parses an `h`-free expression that must be a polynomial.
pub fn parse_poly<S: AsRef<str>>(src: &str, vars: &[S]) -> Result<Poly> {
    let r = parse_expr(src, vars)?.to_ratfunc_in(&names(vars))?;
    r.as_poly()
        .ok_or_else(|| Error::parse(0, format!("'{src}' is not a polynomial")))
}

/// Parses an expression as a truncated series in `h` with rational-function
/// coefficients.
pub fn parse_series<S: AsRef<str>>(src: &str, vars: &[S], order: usize) -> Result<HbarSeries<RatFunc>> {
    parse_expr(src, vars)?.to_series(&names(vars), order)
}

fn names<S: AsRef<str>>(vars: &[S]) -> Vec<String> {
    vars.iter().map(|s| s.as_ref().to_string()).collect()
}

impl Expr {
    pub fn contains_hbar(&self) -> bool {
        match self {
            Expr::Hbar => true,
            Expr::Num(_) | Expr::Var(_) => false,
            Expr::Neg(a) | Expr::Pow(a, _) => a.contains_hbar(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.contains_hbar() || b.contains_hbar()
            }
        }
    }

    /// Evaluates an `h`-free expression over variables `vars`.
    pub fn to_ratfunc_in(&self, vars: &[String]) -> Result<RatFunc> {
        if self.contains_hbar() {
            return Err(Error::parse(0, "unexpected 'h' in an h-free expression"));
        }
        let s = self.to_series(vars, 0)?;
        Ok(s.coeff(0).clone())
    }

    pub fn to_series(&self, vars: &[String], order: usize) -> Result<HbarSeries<RatFunc>> {
        let shared = std::sync::Arc::new(vars.to_vec());
        let zero = RatFunc::constant_in(shared.clone(), Rational::zero());
        self.eval_series(&shared, &zero, order)
    }

    fn eval_series(
        &self,
        vars: &std::sync::Arc<Vec<String>>,
        zero: &RatFunc,
        n: usize,
    ) -> Result<HbarSeries<RatFunc>> {
        Ok(match self {
            Expr::Num(c) => HbarSeries::monomial(zero.constant(c), 0, n),
            Expr::Var(i) => {
                let p = Poly::var(vars, *i);
                HbarSeries::monomial(RatFunc::from_poly(p), 0, n)
            }
            Expr::Hbar => HbarSeries::monomial(zero.one_like(), 1, n),
            Expr::Neg(a) => a.eval_series(vars, zero, n)?.neg(),
            Expr::Add(a, b) => a.eval_series(vars, zero, n)?.add(&b.eval_series(vars, zero, n)?),
            Expr::Sub(a, b) => a.eval_series(vars, zero, n)?.sub(&b.eval_series(vars, zero, n)?),
            Expr::Mul(a, b) => a.eval_series(vars, zero, n)?.mul(&b.eval_series(vars, zero, n)?),
            Expr::Div(a, b) => {
                let inv = series_inverse(&b.eval_series(vars, zero, n)?)?;
                a.eval_series(vars, zero, n)?.mul(&inv)
            }
            Expr::Pow(a, e) => {
                let base = a.eval_series(vars, zero, n)?;
                let base = if *e < 0 { series_inverse(&base)? } else { base };
                let mut acc = HbarSeries::one(zero, n);
                for _ in 0..e.unsigned_abs() {
                    acc = acc.mul(&base);
                }
                acc
            }
        })
    }
}

/// Inverse of a series whose constant coefficient is a nonzero rational
/// function.
fn series_inverse(s: &HbarSeries<RatFunc>) -> Result<HbarSeries<RatFunc>> {
    let c0 = s.coeff(0);
    if c0.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let inv0 = c0.try_inverse().ok_or(Error::DivisionByZero)?;
    let n = s.order();
    let mut out = HbarSeries::zero(c0, n);
    out.set_coeff(0, inv0.clone());
    for k in 1..=n {
        let mut acc = c0.zero_like();
        for j in 1..=k {
            acc = acc.add(&s.coeff(j).mul(out.coeff(k - j)));
        }
        out.set_coeff(k, acc.mul(&inv0).neg());
    }
    debug_assert!({
        let one = s.mul(&out);
        one.coeff(0).sub(&c0.one_like()).is_zero() && (1..=n).all(|k| one.coeff(k).is_zero())
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formal::rat;

    #[test]
    fn precedence() {
        let p = parse_poly("-x^2 + 2*x*y - 3/4", &["x", "y"]).unwrap();
        assert_eq!(p.to_string(), "-x^2 + 2*x*y - 3/4");
    }

    #[test]
    fn unknown_variable() {
        let e = parse_expr("x + q", &["x"]).unwrap_err();
        assert_eq!(e, Error::parse(0, "unknown variable 'q' at column 5"));
    }

    #[test]
    fn not_a_polynomial() {
        assert!(parse_poly("1/x", &["x"]).is_err());
        assert!(parse_poly("(x^2-1)/(x-1)", &["x"]).is_ok());
    }

    #[test]
    fn geometric_series_in_h() {
        let s = parse_series("1/(1-h)", &["x"], 3).unwrap();
        for k in 0..=3 {
            assert_eq!(s.coeff(k).as_constant(), Some(rat(1, 1)));
        }
    }

    #[test]
    fn hbar_split() {
        let s = parse_series("h*x + h^2*(y/2) + ℏ^4", &["x", "y"], 3).unwrap();
        assert!(s.coeff(0).is_zero());
        assert_eq!(s.coeff(2).to_string(), "1/2*y");
        assert!(s.coeff(3).is_zero());
    }

    #[test]
    fn trailing_garbage() {
        assert!(parse_expr("x )", &["x"]).is_err());
        assert!(parse_expr("x + ", &["x"]).is_err());
        assert!(parse_expr("x $ 1", &["x"]).is_err());
    }
}
