//! Baker–Campbell–Hausdorff series via the Varadarajan recursion
//!
//! ```text
//! Z_1 = X + Y
//! (n+1) Z_{n+1} = 1/2 [X - Y, Z_n]
//!     + sum_{p >= 1, 2p <= n} B_{2p}/(2p)! sum_{k_1+..+k_{2p} = n} [Z_{k_1}, [.., [Z_{k_{2p}}, X + Y]..]]
//! ```
//!
//! where `Z_n` is the homogeneous part of word length `n`.

use crate::formal::{bernoulli_numbers, factorial, int, rat, Rational};

/// A Lie algebra over the rationals, presented through its operations.
pub trait LieOps {
    type T: Clone;
    fn zero(&self) -> Self::T;
    fn is_zero(&self, a: &Self::T) -> bool;
    fn add(&self, a: &Self::T, b: &Self::T) -> Self::T;
    fn scale(&self, a: &Self::T, c: &Rational) -> Self::T;
    fn bracket(&self, a: &Self::T, b: &Self::T) -> Self::T;

    fn sub(&self, a: &Self::T, b: &Self::T) -> Self::T {
        self.add(a, &self.scale(b, &int(-1)))
    }
}

fn compositions(n: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if n == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 1..=n.saturating_sub(parts - 1) {
        for mut rest in compositions(n - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Homogeneous components `Z_1 ..= Z_len` of `log(exp X exp Y)`.
pub fn bch_components<L: LieOps>(lie: &L, x: &L::T, y: &L::T, len: usize) -> Vec<L::T> {
    let mut z: Vec<L::T> = Vec::with_capacity(len + 1);
    z.push(lie.zero());
    if len == 0 {
        return z;
    }
    let sum = lie.add(x, y);
    let diff = lie.sub(x, y);
    z.push(sum.clone());
    let bern = bernoulli_numbers(len);
    let half = rat(1, 2);
    for n in 1..len {
        let mut acc = lie.scale(&lie.bracket(&diff, &z[n]), &half);
        let mut p = 1;
        while 2 * p <= n {
            let coeff = &bern[2 * p] / factorial(2 * p);
            if !num_traits::Zero::is_zero(&coeff) {
                let mut inner = lie.zero();
                for ks in compositions(n, 2 * p) {
                    if ks.iter().any(|&k| lie.is_zero(&z[k])) {
                        continue;
                    }
                    let mut t = sum.clone();
                    for &k in ks.iter().rev() {
                        t = lie.bracket(&z[k], &t);
                    }
                    inner = lie.add(&inner, &t);
                }
                acc = lie.add(&acc, &lie.scale(&inner, &coeff));
            }
            p += 1;
        }
        z.push(lie.scale(&acc, &rat(1, (n + 1) as i64)));
    }
    z
}

/// `log(exp X exp Y)` truncated at word length `len`.
pub fn bch_with<L: LieOps>(lie: &L, x: &L::T, y: &L::T, len: usize) -> L::T {
    let z = bch_components(lie, x, y, len);
    z.iter().skip(1).fold(lie.zero(), |acc, t| lie.add(&acc, t))
}

/// `sum_{n <= len} ad(a)^n b / n!` scaled by `sign^n`.
pub fn exp_ad_with<L: LieOps>(lie: &L, a: &L::T, b: &L::T, sign: i64, len: usize) -> L::T {
    let mut term = b.clone();
    let mut acc = b.clone();
    for n in 1..=len {
        term = lie.scale(&lie.bracket(a, &term), &rat(sign, n as i64));
        if lie.is_zero(&term) {
            break;
        }
        acc = lie.add(&acc, &term);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_counts() {
        assert_eq!(compositions(4, 2).len(), 3);
        assert_eq!(compositions(3, 3), vec![vec![1, 1, 1]]);
        assert!(compositions(2, 3).is_empty());
    }

    /// Free Lie algebra on two letters, modelled by noncommutative
    /// polynomials with commutator bracket.
    #[derive(Clone)]
    struct Words;

    type Nc = std::collections::BTreeMap<Vec<u8>, Rational>;

    impl LieOps for Words {
        type T = Nc;
        fn zero(&self) -> Nc {
            Nc::new()
        }
        fn is_zero(&self, a: &Nc) -> bool {
            a.is_empty()
        }
        fn add(&self, a: &Nc, b: &Nc) -> Nc {
            let mut out = a.clone();
            for (k, v) in b {
                let e = out.entry(k.clone()).or_insert_with(|| int(0));
                *e += v;
                if num_traits::Zero::is_zero(e) {
                    out.remove(k);
                }
            }
            out
        }
        fn scale(&self, a: &Nc, c: &Rational) -> Nc {
            if num_traits::Zero::is_zero(c) {
                return Nc::new();
            }
            a.iter().map(|(k, v)| (k.clone(), v * c)).collect()
        }
        fn bracket(&self, a: &Nc, b: &Nc) -> Nc {
            let mut out = Nc::new();
            for (ka, va) in a {
                for (kb, vb) in b {
                    let mut ab = ka.clone();
                    ab.extend(kb);
                    let mut ba = kb.clone();
                    ba.extend(ka);
                    out = self.add(&out, &[(ab, va * vb)].into_iter().collect());
                    out = self.add(&out, &[(ba, -(va * vb))].into_iter().collect());
                }
            }
            out
        }
    }

    #[test]
    fn third_order_terms() {
        let x: Nc = [(vec![0], int(1))].into_iter().collect();
        let y: Nc = [(vec![1], int(1))].into_iter().collect();
        let z = bch_components(&Words, &x, &y, 3);
        let xy = Words.bracket(&x, &y);
        assert_eq!(z[2], Words.scale(&xy, &rat(1, 2)));
        // 1/12 [X,[X,Y]] - 1/12 [Y,[X,Y]]
        let expect = Words.sub(
            &Words.scale(&Words.bracket(&x, &xy), &rat(1, 12)),
            &Words.scale(&Words.bracket(&y, &xy), &rat(1, 12)),
        );
        assert_eq!(z[3], expect);
        // degree 4: -1/24 [Y,[X,[X,Y]]]
        let z4 = bch_components(&Words, &x, &y, 4);
        let expect4 = Words.scale(&Words.bracket(&y, &Words.bracket(&x, &xy)), &rat(-1, 24));
        assert_eq!(z4[4], expect4);
    }
}
