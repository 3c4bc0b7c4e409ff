use std::sync::Arc;

use crate::error::{Error, Result};
use crate::formal::{parse_expr, Additive, CoeffRing, Poly};

/// Free Lie algebroid of rank `r` over a coordinate ring in `d` variables,
/// given by anchor coefficients and bracket structure functions on the
/// basis `e_1..e_r`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebroidModel<C> {
    zero: C,
    rank: usize,
    /// `anchor[a][i]`: coefficient of `∂_i` in `ρ(e_a)`.
    anchor: Vec<Vec<C>>,
    /// `structure[a][b][c]`: coefficient of `e_c` in `[e_a, e_b]`.
    structure: Vec<Vec<Vec<C>>>,
}

impl<C: CoeffRing> AlgebroidModel<C> {
    /// Validates antisymmetry, the anchor morphism property and Jacobi.
    pub fn new(zero: C, anchor: Vec<Vec<C>>, structure: Vec<Vec<Vec<C>>>) -> Result<Self> {
        let rank = anchor.len();
        let d = zero.vars().len();
        if anchor.iter().any(|row| row.len() != d) {
            return Err(Error::Shape("anchor rows must have one entry per variable".into()));
        }
        if structure.len() != rank
            || structure.iter().any(|r| r.len() != rank || r.iter().any(|v| v.len() != rank))
        {
            return Err(Error::Shape("structure functions must be rank x rank x rank".into()));
        }
        let model = AlgebroidModel { zero, rank, anchor, structure };
        model.validate()?;
        Ok(model)
    }

    /// Tangent algebroid of affine space: `e_i = ∂_i`, zero bracket.
    pub fn tangent(zero: C) -> Self {
        let d = zero.vars().len();
        let one = zero.one_like();
        let anchor = (0..d)
            .map(|a| (0..d).map(|i| if a == i { one.clone() } else { zero.clone() }).collect())
            .collect();
        let structure = vec![vec![vec![zero.clone(); d]; d]; d];
        AlgebroidModel { zero, rank: d, anchor, structure }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn nvars(&self) -> usize {
        self.zero.vars().len()
    }

    pub fn vars(&self) -> &[String] {
        self.zero.vars()
    }

    pub fn zero_coeff(&self) -> &C {
        &self.zero
    }

    pub fn one_coeff(&self) -> C {
        self.zero.one_like()
    }

    pub fn anchor_coeff(&self, a: usize, i: usize) -> &C {
        &self.anchor[a][i]
    }

    pub fn structure_coeff(&self, a: usize, b: usize, c: usize) -> &C {
        &self.structure[a][b][c]
    }

    /// True when the anchor is the identity and all brackets vanish.
    pub fn is_tangent(&self) -> bool {
        self.rank == self.nvars()
            && (0..self.rank).all(|a| {
                (0..self.rank).all(|i| {
                    let c = &self.anchor[a][i];
                    if a == i {
                        c.sub(&self.zero.one_like()).is_zero()
                    } else {
                        c.is_zero()
                    }
                })
            })
            && self.structure.iter().flatten().flatten().all(Additive::is_zero)
    }

    /// `ρ(e_a)(f)`.
    pub fn anchor_apply(&self, a: usize, f: &C) -> C {
        let mut acc = self.zero.clone();
        for (i, c) in self.anchor[a].iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let df = f.partial(i);
            if !df.is_zero() {
                acc = acc.add(&c.mul(&df));
            }
        }
        acc
    }

    fn validate(&self) -> Result<()> {
        let r = self.rank;
        let d = self.nvars();
        for a in 0..r {
            for b in 0..r {
                for c in 0..r {
                    if !self.structure[a][b][c].add(&self.structure[b][a][c]).is_zero() {
                        return Err(Error::Invalid(format!(
                            "bracket is not antisymmetric on (e{}, e{})",
                            a + 1,
                            b + 1
                        )));
                    }
                }
            }
        }
        for a in 0..r {
            for b in (a + 1)..r {
                for i in 0..d {
                    let lhs = self
                        .anchor_apply(a, &self.anchor[b][i])
                        .sub(&self.anchor_apply(b, &self.anchor[a][i]));
                    let mut rhs = self.zero.clone();
                    for c in 0..r {
                        rhs = rhs.add(&self.structure[a][b][c].mul(&self.anchor[c][i]));
                    }
                    if !lhs.sub(&rhs).is_zero() {
                        return Err(Error::Invalid(format!(
                            "anchor is not a Lie morphism on (e{}, e{})",
                            a + 1,
                            b + 1
                        )));
                    }
                }
            }
        }
        for a in 0..r {
            for b in (a + 1)..r {
                for c in (b + 1)..r {
                    let mut total = vec![self.zero.clone(); r];
                    for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
                        let t = self.double_bracket(x, y, z);
                        for (acc, v) in total.iter_mut().zip(t) {
                            *acc = acc.add(&v);
                        }
                    }
                    if total.iter().any(|v| !v.is_zero()) {
                        return Err(Error::Invalid(format!(
                            "Jacobi fails on (e{}, e{}, e{})",
                            a + 1,
                            b + 1,
                            c + 1
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Components of `[[e_x, e_y], e_z]`.
    fn double_bracket(&self, x: usize, y: usize, z: usize) -> Vec<C> {
        let r = self.rank;
        let mut out = vec![self.zero.clone(); r];
        for dd in 0..r {
            let f = &self.structure[x][y][dd];
            if f.is_zero() {
                continue;
            }
            // [f e_d, e_z] = f [e_d, e_z] - ρ(e_z)(f) e_d
            for c in 0..r {
                out[c] = out[c].add(&f.mul(&self.structure[dd][z][c]));
            }
            out[dd] = out[dd].sub(&self.anchor_apply(z, f));
        }
        out
    }
}

/// Parses a model description:
///
/// ```text
/// vars x y
/// rank 2
/// anchor 1 y 1
/// anchor 2 y x*y
/// bracket 1 2 1 x
/// ```
///
/// `tangent` in place of `rank` and the anchor lines selects the tangent
/// algebroid. Indices are 1-based; `#` starts a comment.
pub fn parse_model_file<C: CoeffRing>(text: &str) -> Result<AlgebroidModel<C>> {
    let mut vars: Option<Vec<String>> = None;
    let mut rank: Option<usize> = None;
    let mut tangent = false;
    let mut anchors: Vec<(usize, usize, usize, String)> = Vec::new();
    let mut brackets: Vec<(usize, usize, usize, usize, String)> = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line_no = ln + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut words = line.split_whitespace();
        let kw = words.next().unwrap_or("");
        let rest: Vec<&str> = words.collect();
        match kw {
            "vars" => vars = Some(rest.iter().map(|s| s.to_string()).collect()),
            "rank" => {
                let n = rest.first().and_then(|s| s.parse().ok());
                rank = Some(n.ok_or_else(|| Error::parse(line_no, "rank needs a number"))?);
            }
            "tangent" => tangent = true,
            "anchor" => {
                if rest.len() < 3 {
                    return Err(Error::parse(line_no, "expected: anchor <a> <var> <expr>"));
                }
                let a = parse_index(rest[0], line_no)?;
                let names = vars.as_ref().ok_or_else(|| Error::parse(line_no, "vars must come first"))?;
                let i = names
                    .iter()
                    .position(|v| v == rest[1])
                    .ok_or_else(|| Error::parse(line_no, format!("unknown variable '{}'", rest[1])))?;
                anchors.push((line_no, a, i, rest[2..].join(" ")));
            }
            "bracket" => {
                if rest.len() < 4 {
                    return Err(Error::parse(line_no, "expected: bracket <a> <b> <c> <expr>"));
                }
                let a = parse_index(rest[0], line_no)?;
                let b = parse_index(rest[1], line_no)?;
                let c = parse_index(rest[2], line_no)?;
                brackets.push((line_no, a, b, c, rest[3..].join(" ")));
            }
            other => return Err(Error::parse(line_no, format!("unknown keyword '{other}'"))),
        }
    }
    let vars = vars.ok_or_else(|| Error::parse(0, "missing 'vars' line"))?;
    let zero = C::from_poly(Poly::zero_in(Arc::new(vars.clone())));
    if tangent {
        if rank.is_some() || !anchors.is_empty() || !brackets.is_empty() {
            return Err(Error::parse(0, "'tangent' excludes rank, anchor and bracket lines"));
        }
        return Ok(AlgebroidModel::tangent(zero));
    }
    let rank = rank.ok_or_else(|| Error::parse(0, "missing 'rank' line"))?;
    let eval = |src: &str, line: usize| -> Result<C> {
        let e = parse_expr(src, &vars).map_err(|e| relabel(e, line))?;
        let f = e.to_ratfunc_in(&vars).map_err(|e| relabel(e, line))?;
        match f.as_poly() {
            Some(p) => Ok(C::from_poly(p)),
            None => {
                let num = C::from_poly(f.numer().clone());
                let den = C::from_poly(f.denom().clone());
                let inv = den
                    .try_inverse()
                    .ok_or_else(|| Error::parse(line, "coefficient ring has no inverse for this denominator"))?;
                Ok(num.mul(&inv))
            }
        }
    };
    let mut anchor = vec![vec![zero.clone(); vars.len()]; rank];
    for (line, a, i, src) in anchors {
        if a >= rank {
            return Err(Error::parse(line, "anchor index exceeds rank"));
        }
        anchor[a][i] = eval(&src, line)?;
    }
    let mut structure = vec![vec![vec![zero.clone(); rank]; rank]; rank];
    for (line, a, b, c, src) in brackets {
        if a >= rank || b >= rank || c >= rank {
            return Err(Error::parse(line, "bracket index exceeds rank"));
        }
        let v = eval(&src, line)?;
        structure[b][a][c] = v.neg();
        structure[a][b][c] = v;
    }
    AlgebroidModel::new(zero, anchor, structure)
}

fn parse_index(s: &str, line: usize) -> Result<usize> {
    match s.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n - 1),
        _ => Err(Error::parse(line, format!("expected a 1-based index, got '{s}'"))),
    }
}

pub(crate) fn relabel(e: Error, line: usize) -> Error {
    match e {
        Error::Parse { message, .. } => Error::Parse { line, message },
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nonabelian_rank_two() {
        let m: AlgebroidModel<Poly> = parse_model_file(
            "vars x y\nrank 2\nanchor 1 y 1\nanchor 2 y x*y\nbracket 1 2 1 x\n",
        )
        .unwrap();
        assert_eq!(m.rank(), 2);
        assert!(!m.is_tangent());
    }

    #[test]
    fn broken_anchor_is_rejected() {
        let r: Result<AlgebroidModel<Poly>> =
            parse_model_file("vars x y\nrank 2\nanchor 1 y 1\nanchor 2 y x*y\nbracket 1 2 1 y\n");
        assert!(matches!(r, Err(Error::Invalid(_))));
    }

    #[test]
    fn tangent_file() {
        let m: AlgebroidModel<Poly> = parse_model_file("vars x y z\ntangent\n").unwrap();
        assert!(m.is_tangent());
        assert_eq!(m.rank(), 3);
    }

    #[test]
    fn parse_errors_carry_lines() {
        let r: Result<AlgebroidModel<Poly>> = parse_model_file("vars x\nrank 1\nanchor 1 x 2*q\n");
        assert!(matches!(r, Err(Error::Parse { line: 3, .. })));
    }
}
