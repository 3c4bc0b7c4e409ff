use std::fmt;

use crate::error::{Error, Result};

/// Weakly monotone map `[m] -> [n]`, stored by its images.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrdinalMap {
    target: usize,
    images: Vec<usize>,
}

impl fmt::Debug for OrdinalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]->[{}] {:?}", self.source(), self.target, self.images)
    }
}

impl OrdinalMap {
    pub fn new(target: usize, images: Vec<usize>) -> Result<Self> {
        if images.is_empty() {
            return Err(Error::Invalid("an ordinal map needs at least one image".into()));
        }
        if images.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Invalid(format!("images {images:?} are not monotone")));
        }
        if images.iter().any(|&x| x > target) {
            return Err(Error::Invalid(format!("images {images:?} exceed [{target}]")));
        }
        Ok(OrdinalMap { target, images })
    }

    pub fn identity(n: usize) -> Self {
        OrdinalMap { target: n, images: (0..=n).collect() }
    }

    /// `δ_i : [n-1] -> [n]`, skipping `i`.
    pub fn coface(n: usize, i: usize) -> Self {
        assert!(n >= 1 && i <= n, "coface δ_{i} into [{n}]");
        OrdinalMap { target: n, images: (0..=n).filter(|&x| x != i).collect() }
    }

    /// `σ_i : [n+1] -> [n]`, hitting `i` twice.
    pub fn codegeneracy(n: usize, i: usize) -> Self {
        assert!(i <= n, "codegeneracy σ_{i} onto [{n}]");
        let mut images: Vec<usize> = (0..=n).collect();
        images.insert(i, i);
        OrdinalMap { target: n, images }
    }

    pub fn source(&self) -> usize {
        self.images.len() - 1
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, j: usize) -> usize {
        self.images[j]
    }

    /// `then ∘ self`.
    pub fn then(&self, then: &OrdinalMap) -> Result<OrdinalMap> {
        ordinal_compose(self, then)
    }

    /// All maps `[m] -> [n]`, in lexicographic order of images.
    pub fn all(m: usize, n: usize) -> Vec<OrdinalMap> {
        let mut out = Vec::new();
        let mut cur = vec![0usize; m + 1];
        loop {
            out.push(OrdinalMap { target: n, images: cur.clone() });
            // next weakly increasing sequence
            let mut k = m + 1;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                if cur[k] < n {
                    let v = cur[k] + 1;
                    for c in &mut cur[k..] {
                        *c = v;
                    }
                    break;
                }
            }
        }
    }
}

/// The composite "first `f`, then `g`", i.e. `g ∘ f`.
pub fn ordinal_compose(f: &OrdinalMap, g: &OrdinalMap) -> Result<OrdinalMap> {
    if f.target != g.source() {
        return Err(Error::NotComposable(format!(
            "map into [{}] followed by a map out of [{}]",
            f.target,
            g.source()
        )));
    }
    Ok(OrdinalMap { target: g.target, images: f.images.iter().map(|&j| g.images[j]).collect() })
}

/// Canonical factorization `f = δ_{i_1} ∘ .. ∘ δ_{i_s} ∘ σ_{j_1} ∘ .. ∘ σ_{j_t}`
/// with `i_1 > .. > i_s` and `j_1 < .. < j_t`. Returns `(deltas, sigmas)`.
pub fn ordinal_factor(f: &OrdinalMap) -> (Vec<usize>, Vec<usize>) {
    let mut deltas: Vec<usize> = (0..=f.target).filter(|v| !f.images.contains(v)).collect();
    deltas.reverse();
    let sigmas = (0..f.source()).filter(|&j| f.images[j] == f.images[j + 1]).collect();
    (deltas, sigmas)
}

/// Inverse of [`ordinal_factor`]: the σ's act first, the last one listed first.
pub fn recompose(source: usize, deltas: &[usize], sigmas: &[usize]) -> Result<OrdinalMap> {
    let mut map = OrdinalMap::identity(source);
    for &j in sigmas.iter().rev() {
        let n = map.target;
        if n == 0 || j > n - 1 {
            return Err(Error::Invalid(format!("σ_{j} does not apply to [{n}]")));
        }
        map = ordinal_compose(&map, &OrdinalMap::codegeneracy(n - 1, j))?;
    }
    for &i in deltas.iter().rev() {
        let n = map.target + 1;
        if i > n {
            return Err(Error::Invalid(format!("δ_{i} does not apply to [{}]", n - 1)));
        }
        map = ordinal_compose(&map, &OrdinalMap::coface(n, i))?;
    }
    Ok(map)
}

/// One instance of a relation from the defining list of identities between
/// cofaces and codegeneracies. Both sides list their factors in the order
/// they act; an empty side is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationInstance {
    pub family: &'static str,
    pub i: usize,
    pub j: usize,
    pub lhs: Vec<OrdinalMap>,
    pub rhs: Vec<OrdinalMap>,
}

fn fold(source: usize, maps: &[OrdinalMap]) -> OrdinalMap {
    maps.iter()
        .fold(OrdinalMap::identity(source), |acc, m| ordinal_compose(&acc, m).expect("composable factors"))
}

impl RelationInstance {
    pub fn source(&self) -> usize {
        self.lhs[0].source()
    }

    pub fn holds(&self) -> bool {
        fold(self.source(), &self.lhs) == fold(self.source(), &self.rhs)
    }
}

fn rel(family: &'static str, i: usize, j: usize, lhs: [OrdinalMap; 2], rhs: Vec<OrdinalMap>) -> RelationInstance {
    RelationInstance { family, i, j, lhs: lhs.to_vec(), rhs }
}

/// Every instance of the five relation families whose maps stay within
/// `[0] .. [max]`.
pub fn relation_instances(max: usize) -> Vec<RelationInstance> {
    let mut out = Vec::new();
    // δ_i δ_j = δ_j δ_{i-1}, i > j, on [k-1] -> [k+1]
    for k in 1..max {
        for i in 0..=k + 1 {
            for j in 0..i.min(k + 1) {
                let lhs = [OrdinalMap::coface(k, j), OrdinalMap::coface(k + 1, i)];
                let r = vec![OrdinalMap::coface(k, i - 1), OrdinalMap::coface(k + 1, j)];
                out.push(rel("delta delta", i, j, lhs, r));
            }
        }
    }
    // σ_i σ_j = σ_j σ_{i+1}, i >= j, on [k+2] -> [k]
    for k in 0..max.saturating_sub(1) {
        for i in 0..=k {
            for j in 0..=i {
                let lhs = [OrdinalMap::codegeneracy(k + 1, j), OrdinalMap::codegeneracy(k, i)];
                let r = vec![OrdinalMap::codegeneracy(k + 1, i + 1), OrdinalMap::codegeneracy(k, j)];
                out.push(rel("sigma sigma", i, j, lhs, r));
            }
        }
    }
    // σ_i δ_j on [k] -> [k+1] -> [k]
    for k in 0..max {
        for i in 0..=k {
            for j in 0..=k + 1 {
                let lhs = [OrdinalMap::coface(k + 1, j), OrdinalMap::codegeneracy(k, i)];
                if i + 1 < j {
                    let r = vec![OrdinalMap::codegeneracy(k - 1, i), OrdinalMap::coface(k, j - 1)];
                    out.push(rel("sigma delta (i < j-1)", i, j, lhs, r));
                } else if i + 1 == j || i == j {
                    out.push(rel("sigma delta (identity)", i, j, lhs, Vec::new()));
                } else {
                    let r = vec![OrdinalMap::codegeneracy(k - 1, i - 1), OrdinalMap::coface(k, j)];
                    out.push(rel("sigma delta (i > j)", i, j, lhs, r));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_composites() {
        let a = ordinal_compose(&OrdinalMap::coface(1, 0), &OrdinalMap::coface(2, 1)).unwrap();
        let b = ordinal_compose(&OrdinalMap::coface(1, 0), &OrdinalMap::coface(2, 0)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.images(), &[2]);
        let id = ordinal_compose(&OrdinalMap::coface(1, 0), &OrdinalMap::codegeneracy(0, 0)).unwrap();
        assert_eq!(id, OrdinalMap::identity(0));
    }

    #[test]
    fn factor_examples() {
        assert_eq!(ordinal_factor(&OrdinalMap::identity(3)), (vec![], vec![]));
        assert_eq!(ordinal_factor(&OrdinalMap::coface(2, 2)), (vec![2], vec![]));
        let c = OrdinalMap::new(1, vec![1, 1, 1]).unwrap();
        let (d, s) = ordinal_factor(&c);
        assert_eq!(recompose(2, &d, &s).unwrap(), c);
    }

    #[test]
    fn enumeration_counts() {
        // C(m + n + 1, m + 1)
        assert_eq!(OrdinalMap::all(1, 2).len(), 6);
        assert_eq!(OrdinalMap::all(2, 1).len(), 4);
        assert_eq!(OrdinalMap::all(0, 0).len(), 1);
    }

    #[test]
    fn compose_mismatch() {
        let e = ordinal_compose(&OrdinalMap::identity(1), &OrdinalMap::identity(2));
        assert!(matches!(e, Err(Error::NotComposable(_))));
    }
}
