use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::algebroid::relabel;
use crate::error::{Error, Result};
use crate::formal::{parse_expr, CoeffRing, Poly};

/// Which intersections of a finite, totally ordered cover are nonempty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverShape {
    count: usize,
    tuples: BTreeSet<Vec<usize>>,
}

fn subtuples(t: &[usize]) -> Vec<Vec<usize>> {
    (1u32..(1 << t.len()))
        .map(|mask| t.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, &x)| x).collect())
        .collect()
}

impl CoverShape {
    /// Exactly the given tuples plus all singletons; fails unless the set is
    /// closed under taking subtuples.
    pub fn new(count: usize, tuples: impl IntoIterator<Item = Vec<usize>>) -> Result<Self> {
        let mut set: BTreeSet<Vec<usize>> = (0..count).map(|i| vec![i]).collect();
        for t in tuples {
            Self::check_tuple(count, &t)?;
            set.insert(t);
        }
        for t in &set {
            for s in subtuples(t) {
                if !set.contains(&s) {
                    return Err(Error::Shape(format!("{t:?} is present but its face {s:?} is not")));
                }
            }
        }
        Ok(CoverShape { count, tuples: set })
    }

    /// Smallest shape containing the generators.
    pub fn closure(count: usize, generators: impl IntoIterator<Item = Vec<usize>>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for t in generators {
            Self::check_tuple(count, &t)?;
            set.extend(subtuples(&t));
        }
        Self::new(count, set)
    }

    /// Every nonempty subset of `0..count`.
    pub fn full(count: usize) -> Self {
        let all: Vec<usize> = (0..count).collect();
        CoverShape { count, tuples: subtuples(&all).into_iter().collect() }
    }

    fn check_tuple(count: usize, t: &[usize]) -> Result<()> {
        if t.is_empty() || t.windows(2).any(|w| w[0] >= w[1]) || t.iter().any(|&i| i >= count) {
            return Err(Error::Shape(format!("{t:?} is not a strictly increasing tuple of indices below {count}")));
        }
        Ok(())
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn contains(&self, t: &[usize]) -> bool {
        self.tuples.contains(t)
    }

    pub fn tuples(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.tuples.iter()
    }

    /// Strictly increasing tuples of length `n + 1`, in lexicographic order.
    pub fn level(&self, n: usize) -> Vec<Vec<usize>> {
        self.tuples.iter().filter(|t| t.len() == n + 1).cloned().collect()
    }

    pub fn max_len(&self) -> usize {
        self.tuples.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// A combinatorial cover: a shape, and for each nonempty intersection the
/// denominators its coefficient ring may invert. Restrictions are the
/// inclusions of these rings.
#[derive(Clone, Debug, PartialEq)]
pub struct Cover {
    shape: CoverShape,
    vars: Arc<Vec<String>>,
    allowed: BTreeMap<Vec<usize>, Vec<Poly>>,
}

/// True iff `d` divides a product of powers of `allowed`.
fn divides_power_product(d: &Poly, allowed: &[Poly]) -> bool {
    let mut rest = d.clone();
    loop {
        if rest.is_constant() {
            return true;
        }
        let mut progressed = false;
        for p in allowed {
            let g = rest.gcd(p);
            if !g.is_constant() {
                rest = rest.exact_div(&g).expect("gcd divides");
                progressed = true;
            }
        }
        if !progressed {
            return false;
        }
    }
}

impl Cover {
    /// Polynomial coefficients everywhere.
    pub fn constant(shape: CoverShape) -> Self {
        Self::new(shape, Arc::new(Vec::new()), BTreeMap::new()).expect("no denominators")
    }

    /// `declared` maps tuples to their invertible denominators. Undeclared
    /// tuples inherit the union of their vertices; declared ones must admit
    /// everything their faces admit.
    pub fn new(shape: CoverShape, vars: Arc<Vec<String>>, declared: BTreeMap<Vec<usize>, Vec<Poly>>) -> Result<Self> {
        for t in declared.keys() {
            if !shape.contains(t) {
                return Err(Error::Shape(format!("denominators declared on {t:?}, which is not in the cover")));
            }
        }
        let mut allowed = BTreeMap::new();
        for t in shape.tuples() {
            let list = match declared.get(t) {
                Some(list) => list.clone(),
                None => {
                    let mut acc: Vec<Poly> = Vec::new();
                    for i in t {
                        for p in declared.get(&vec![*i]).into_iter().flatten() {
                            if !acc.contains(p) {
                                acc.push(p.clone());
                            }
                        }
                    }
                    acc
                }
            };
            allowed.insert(t.clone(), list);
        }
        let cover = Cover { shape, vars, allowed };
        for t in cover.shape.tuples() {
            for s in subtuples(t) {
                for p in &cover.allowed[&s] {
                    if !cover.admits(t, std::slice::from_ref(p)) {
                        return Err(Error::NonFunctorial(format!(
                            "{p} is invertible on {s:?} but not on {t:?}"
                        )));
                    }
                }
            }
        }
        Ok(cover)
    }

    pub fn shape(&self) -> &CoverShape {
        &self.shape
    }

    pub fn vars(&self) -> &Arc<Vec<String>> {
        &self.vars
    }

    pub fn allowed(&self, t: &[usize]) -> &[Poly] {
        self.allowed.get(t).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Whether every denominator is invertible on the intersection `t`.
    pub fn admits(&self, t: &[usize], denominators: &[Poly]) -> bool {
        let allowed = self.allowed(t);
        denominators.iter().all(|d| divides_power_product(d, allowed))
    }
}

/// Reads a cover description:
///
/// ```text
/// indices 3
/// vars x y
/// tuple 0 1          # generators; faces are added
/// full               # or: every subset
/// allow 1 : x        # denominators invertible on U_1
/// allow 0 1 : x, y
/// ```
pub fn parse_cover_file(src: &str) -> Result<Cover> {
    let mut count = None;
    let mut vars: Vec<String> = Vec::new();
    let mut generators = Vec::new();
    let mut full = false;
    let mut allows: Vec<(usize, Vec<usize>, String)> = Vec::new();
    for (k, raw) in src.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (kw, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match kw {
            "indices" => {
                let n = rest.parse::<usize>().map_err(|_| Error::parse(line_no, "expected an index count"))?;
                if n == 0 {
                    return Err(Error::parse(line_no, "a cover needs at least one open"));
                }
                count = Some(n);
            }
            "vars" => vars = rest.split_whitespace().map(String::from).collect(),
            "full" => full = true,
            "tuple" => generators.push((line_no, parse_indices(rest, line_no)?)),
            "allow" => {
                let (t, exprs) = rest
                    .split_once(':')
                    .ok_or_else(|| Error::parse(line_no, "expected 'allow <indices> : <denominators>'"))?;
                allows.push((line_no, parse_indices(t, line_no)?, exprs.to_string()));
            }
            other => return Err(Error::parse(line_no, format!("unknown keyword '{other}'"))),
        }
    }
    let count = count.ok_or_else(|| Error::parse(0, "missing 'indices' line"))?;
    let shape = if full {
        CoverShape::full(count)
    } else {
        let mut gens = Vec::new();
        for (line, t) in generators {
            CoverShape::check_tuple(count, &t).map_err(|e| Error::parse(line, e.to_string()))?;
            gens.push(t);
        }
        CoverShape::closure(count, gens)?
    };
    let vars = Arc::new(vars);
    let mut declared: BTreeMap<Vec<usize>, Vec<Poly>> = BTreeMap::new();
    for (line, t, exprs) in allows {
        let list = declared.entry(t).or_default();
        for e in exprs.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let f = parse_expr(e, &vars).map_err(|err| relabel(err, line))?;
            let f = f.to_ratfunc_in(&vars).map_err(|err| relabel(err, line))?;
            let p = f.as_poly().ok_or_else(|| Error::parse(line, format!("denominator '{e}' is not a polynomial")))?;
            if p.is_constant() {
                return Err(Error::parse(line, format!("denominator '{e}' is constant")));
            }
            list.push(p);
        }
    }
    Cover::new(shape, vars, declared)
}

fn parse_indices(s: &str, line: usize) -> Result<Vec<usize>> {
    s.split_whitespace()
        .map(|w| w.parse::<usize>().map_err(|_| Error::parse(line, format!("bad index '{w}'"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_adds_faces() {
        let s = CoverShape::closure(3, [vec![0, 1, 2]]).unwrap();
        assert_eq!(s, CoverShape::full(3));
        assert_eq!(s.level(1), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
    }

    #[test]
    fn missing_face_rejected() {
        assert!(matches!(CoverShape::new(3, [vec![0, 1, 2]]), Err(Error::Shape(_))));
    }

    #[test]
    fn localized_plane() {
        let c = parse_cover_file("indices 2\nvars x y\ntuple 0 1\nallow 1 : x\n").unwrap();
        let x = Poly::var(&["x", "y"], 0);
        assert!(c.admits(&[0, 1], &[x.mul_poly(&x)]));
        assert!(!c.admits(&[0], &[x.clone()]));
        assert!(!c.admits(&[0, 1], &[x.add_poly(&Poly::var(&["x", "y"], 1))]));
    }

    #[test]
    fn nonfunctorial_rejected() {
        let r = parse_cover_file("indices 2\nvars x\ntuple 0 1\nallow 0 : x\nallow 0 1 : x + 1\n");
        assert!(matches!(r, Err(Error::NonFunctorial(_))));
    }
}
