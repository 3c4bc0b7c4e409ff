use super::forms::forms_equal;
use super::{AlgebroidModel, LForm, PolyVector};
use crate::error::{Error, Result};
use crate::formal::{Additive, CoeffRing};

/// Sign in `J([π, u]) = SIGN · d(J(u))`.
pub const INTERTWINING_SIGN: i64 = -1;

/// `π^♯`, its inverse `J` and `ω = J(π)` for a nondegenerate bivector.
#[derive(Clone)]
pub struct Symplectic<C> {
    /// `sharp[a][b]`: coefficient of `e_b` in `π^♯(ε^a)`.
    pub sharp: Vec<Vec<C>>,
    /// `j[b][a]`: coefficient of `ε^a` in `J(e_b)`.
    pub j: Vec<Vec<C>>,
    pub omega: LForm<C>,
}

impl<C: CoeffRing> std::fmt::Debug for Symplectic<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Symplectic").field("omega", &self.omega).finish_non_exhaustive()
    }
}

fn invert<C: CoeffRing>(m: &[Vec<C>], zero: &C) -> Option<Vec<Vec<C>>> {
    let n = m.len();
    let one = zero.one_like();
    let mut a: Vec<Vec<C>> = m.to_vec();
    let mut inv: Vec<Vec<C>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { one.clone() } else { zero.clone() }).collect())
        .collect();
    for col in 0..n {
        let (piv, pinv) = (col..n).find_map(|r| a[r][col].try_inverse().map(|i| (r, i)))?;
        a.swap(col, piv);
        inv.swap(col, piv);
        for k in 0..n {
            a[col][k] = a[col][k].mul(&pinv);
            inv[col][k] = inv[col][k].mul(&pinv);
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for k in 0..n {
                a[r][k] = a[r][k].sub(&f.mul(&a[col][k]));
                inv[r][k] = inv[r][k].sub(&f.mul(&inv[col][k]));
            }
        }
    }
    Some(inv)
}

impl<C: CoeffRing> AlgebroidModel<C> {
    pub fn sharp_and_j(&self, pi: &PolyVector<C>) -> Result<Symplectic<C>> {
        if pi.degree() != 1 {
            return Err(Error::Degree { expected: 1, found: pi.degree() });
        }
        let r = self.rank();
        let zero = self.zero_coeff().clone();
        let mut sharp = vec![vec![zero.clone(); r]; r];
        for (k, c) in pi.terms() {
            sharp[k[0]][k[1]] = c.clone();
            sharp[k[1]][k[0]] = c.neg();
        }
        let inv = invert(&sharp, &zero).ok_or_else(|| Error::NotInvertible(format!("π^♯ for {pi}")))?;
        let mut s = Symplectic { sharp, j: inv, omega: LForm::zero(2) };
        s.omega = s.apply_j(pi);
        Ok(s)
    }
}

impl<C: CoeffRing> Symplectic<C> {
    /// `π^♯(ξ)` for a 1-form `ξ`.
    pub fn apply_sharp(&self, xi: &LForm<C>) -> PolyVector<C> {
        assert_eq!(xi.degree(), 1);
        let r = self.sharp.len();
        let mut out = PolyVector::zero(0);
        for (k, c) in xi.terms() {
            for b in 0..r {
                let v = c.mul(&self.sharp[k[0]][b]);
                if !v.is_zero() {
                    out = out.add(&PolyVector::basis(&[b], v));
                }
            }
        }
        out
    }

    /// `J` extended multiplicatively: `J(f e_A) = f J(e_{a_1}) ∧ ..`.
    pub fn apply_j(&self, u: &PolyVector<C>) -> LForm<C> {
        let r = self.j.len();
        let p = u.exterior_degree();
        let mut out = LForm::zero(p);
        for (k, f) in u.terms() {
            let mut acc = LForm::function(f.clone());
            for &b in k {
                let mut jb = LForm::zero(1);
                for a in 0..r {
                    if !self.j[b][a].is_zero() {
                        jb = jb.add(&LForm::basis(&[a], self.j[b][a].clone()));
                    }
                }
                acc = acc.wedge(&jb);
            }
            if acc.is_zero() {
                continue;
            }
            out = out.add(&acc);
        }
        out
    }

    /// `J([π, u]) == INTERTWINING_SIGN · d(J(u))`.
    pub fn intertwines(&self, model: &AlgebroidModel<C>, pi: &PolyVector<C>, u: &PolyVector<C>) -> bool {
        let lhs = self.apply_j(&model.schouten(pi, u));
        let rhs = model.lde_rham(&self.apply_j(u));
        let rhs = if INTERTWINING_SIGN < 0 { rhs.neg() } else { rhs };
        forms_equal(&lhs, &rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formal::{parse_poly, Poly};

    fn p(s: &str) -> Poly {
        parse_poly(s, &["x", "y"]).unwrap()
    }

    #[test]
    fn plane_symplectic_form() {
        let m = AlgebroidModel::tangent(p("0"));
        let pi = PolyVector::basis(&[0, 1], p("1"));
        let s = m.sharp_and_j(&pi).unwrap();
        assert_eq!(s.omega, LForm::basis(&[0, 1], p("1")));
        assert!(m.lde_rham(&s.omega).is_zero());
        let u = PolyVector::basis(&[0], p("x"));
        assert!(s.intertwines(&m, &pi, &u));
        assert!(s.intertwines(&m, &pi, &PolyVector::function(p("x^2*y"))));
    }

    #[test]
    fn degenerate_bivector() {
        let m = AlgebroidModel::tangent(p("0"));
        let pi = PolyVector::basis(&[0, 1], p("x"));
        assert!(matches!(m.sharp_and_j(&pi), Err(Error::NotInvertible(_))));
    }
}
