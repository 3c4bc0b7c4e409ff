use std::collections::BTreeMap;
use std::fmt;

use crate::dgla::{bch, bch_twisted, exp_ad, gauge_apply, twisted_differential, Dgla, GaugeElement, GradedElement};
use crate::error::{Error, Result};

pub type Edges<D> = BTreeMap<(usize, usize), GaugeElement<D>>;
pub type Fillers<D> = BTreeMap<(usize, usize, usize), GradedElement<D>>;

/// An `n`-simplex of the nerve: objects `x_a`, 1-cells `e_ab : x_a -> x_b`
/// for `a < b`, and 2-cells `u_abc : e_bc e_ab => e_ac` based at `x_a`.
pub struct NerveSimplex<D: Dgla> {
    objects: Vec<GradedElement<D>>,
    edges: Edges<D>,
    fillers: Fillers<D>,
}

impl<D: Dgla> Clone for NerveSimplex<D> {
    fn clone(&self) -> Self {
        NerveSimplex { objects: self.objects.clone(), edges: self.edges.clone(), fillers: self.fillers.clone() }
    }
}

impl<D: Dgla> PartialEq for NerveSimplex<D> {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects && self.edges == other.edges && self.fillers == other.fillers
    }
}

impl<D: Dgla> fmt::Debug for NerveSimplex<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NerveSimplex")
            .field("objects", &self.objects)
            .field("edges", &self.edges)
            .field("fillers", &self.fillers)
            .finish()
    }
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..=n).flat_map(move |a| (a + 1..=n).map(move |b| (a, b)))
}

fn triples(n: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    pairs(n).flat_map(move |(a, b)| (b + 1..=n).map(move |c| (a, b, c)))
}

fn quadruples(n: usize) -> impl Iterator<Item = [usize; 4]> {
    triples(n).flat_map(move |(a, b, c)| (c + 1..=n).map(move |d| [a, b, c, d]))
}

/// Whether `e_ab` carries `x_a` to `x_b`.
pub fn edge_condition<D: Dgla>(
    model: &D,
    xa: &GradedElement<D>,
    xb: &GradedElement<D>,
    e: &GaugeElement<D>,
) -> Result<bool> {
    Ok(gauge_apply(model, e, xa)? == *xb)
}

/// `e_12 e_01 exp(d_{x_0} u) = e_02`.
pub fn triangle_condition<D: Dgla>(
    model: &D,
    x0: &GradedElement<D>,
    e01: &GaugeElement<D>,
    e12: &GaugeElement<D>,
    e02: &GaugeElement<D>,
    u: &GradedElement<D>,
) -> Result<bool> {
    u.check_degree(-1)?;
    let du = GaugeElement::new(twisted_differential(model, x0, u)?)?;
    Ok(bch(model, &bch(model, e12, e01)?, &du)? == *e02)
}

/// The two composites `e_23 e_12 e_01 => e_03` agree:
/// `u_012 * u_023 = (e^{-ad e_01} u_123) * u_013` in the `x_0`-twisted group.
pub fn tetra_condition<D: Dgla>(
    model: &D,
    x0: &GradedElement<D>,
    e01: &GaugeElement<D>,
    [u012, u013, u023, u123]: [&GradedElement<D>; 4],
) -> Result<bool> {
    let left = bch_twisted(model, x0, u012, u023)?;
    let moved = exp_ad(model, e01.log(), u123, -1)?;
    let right = bch_twisted(model, x0, &moved, u013)?;
    Ok(left == right)
}

impl<D: Dgla> NerveSimplex<D> {
    /// Validates every edge, triangle and tetrahedron condition.
    pub fn new(model: &D, objects: Vec<GradedElement<D>>, edges: Edges<D>, fillers: Fillers<D>) -> Result<Self> {
        if objects.is_empty() {
            return Err(Error::Shape("a simplex needs at least one object".into()));
        }
        let s = NerveSimplex { objects, edges, fillers };
        let n = s.dimension();
        if s.edges.len() != pairs(n).count() || pairs(n).any(|p| !s.edges.contains_key(&p)) {
            return Err(Error::Shape(format!("a {n}-simplex needs exactly the 1-cells on pairs a < b <= {n}")));
        }
        if s.fillers.len() != triples(n).count() || triples(n).any(|t| !s.fillers.contains_key(&t)) {
            return Err(Error::Shape(format!("a {n}-simplex needs exactly the 2-cells on triples a < b < c <= {n}")));
        }
        for (&(a, b), e) in &s.edges {
            if !edge_condition(model, &s.objects[a], &s.objects[b], e)? {
                return Err(Error::Invalid(format!("1-cell {a}{b} does not carry x_{a} to x_{b}")));
            }
        }
        for (&(a, b, c), u) in &s.fillers {
            let (eab, ebc, eac) = (&s.edges[&(a, b)], &s.edges[&(b, c)], &s.edges[&(a, c)]);
            if !triangle_condition(model, &s.objects[a], eab, ebc, eac, u)? {
                return Err(Error::Invalid(format!("2-cell {a}{b}{c} has the wrong target")));
            }
        }
        for q in quadruples(n) {
            if !s.restrict(&q).tetra_commutes(model)? {
                return Err(Error::Invalid(format!("tetrahedron {q:?} does not commute")));
            }
        }
        Ok(s)
    }

    pub fn dimension(&self) -> usize {
        self.objects.len() - 1
    }

    pub fn objects(&self) -> &[GradedElement<D>] {
        &self.objects
    }

    pub fn edges(&self) -> &Edges<D> {
        &self.edges
    }

    pub fn fillers(&self) -> &Fillers<D> {
        &self.fillers
    }

    /// The subsimplex on the increasing vertex list `verts`, relabelled
    /// `0..verts.len()`.
    pub fn restrict(&self, verts: &[usize]) -> Self {
        let k = verts.len() - 1;
        NerveSimplex {
            objects: verts.iter().map(|&v| self.objects[v].clone()).collect(),
            edges: pairs(k).map(|(a, b)| ((a, b), self.edges[&(verts[a], verts[b])].clone())).collect(),
            fillers: triples(k)
                .map(|(a, b, c)| ((a, b, c), self.fillers[&(verts[a], verts[b], verts[c])].clone()))
                .collect(),
        }
    }

    /// Face `d_k`, omitting vertex `k`.
    pub fn face(&self, k: usize) -> Self {
        let verts: Vec<usize> = (0..=self.dimension()).filter(|&v| v != k).collect();
        self.restrict(&verts)
    }

    /// For a 3-simplex, whether its two pasted 2-cells agree.
    pub fn tetra_commutes(&self, model: &D) -> Result<bool> {
        if self.dimension() != 3 {
            return Err(Error::Shape(format!("tetrahedron condition on a {}-simplex", self.dimension())));
        }
        let f = |a, b, c| &self.fillers[&(a, b, c)];
        tetra_condition(model, &self.objects[0], &self.edges[&(0, 1)], [f(0, 1, 2), f(0, 1, 3), f(0, 2, 3), f(1, 2, 3)])
    }
}

/// A horn `Λ^{missing, dim}`: all data of a `dim`-simplex except the face
/// opposite `missing` and the interior. For `dim = 1` only the object at
/// `missing` is given; for `dim = 2` the edge opposite `missing` is absent;
/// for `dim = 3` the 2-cell opposite `missing` is absent.
pub struct Horn<D: Dgla> {
    pub dim: usize,
    pub missing: usize,
    pub objects: BTreeMap<usize, GradedElement<D>>,
    pub edges: Edges<D>,
    pub fillers: Fillers<D>,
}

impl<D: Dgla> Clone for Horn<D> {
    fn clone(&self) -> Self {
        Horn {
            dim: self.dim,
            missing: self.missing,
            objects: self.objects.clone(),
            edges: self.edges.clone(),
            fillers: self.fillers.clone(),
        }
    }
}

impl<D: Dgla> fmt::Debug for Horn<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Horn")
            .field("dim", &self.dim)
            .field("missing", &self.missing)
            .field("objects", &self.objects)
            .field("edges", &self.edges)
            .field("fillers", &self.fillers)
            .finish()
    }
}

impl<D: Dgla> Horn<D> {
    /// The horn obtained from a simplex by forgetting the face opposite `missing`.
    pub fn of_simplex(s: &NerveSimplex<D>, missing: usize) -> Result<Self> {
        let dim = s.dimension();
        if !(1..=3).contains(&dim) || missing > dim {
            return Err(Error::Shape(format!("no horn Λ^{{{missing},{dim}}} is supported")));
        }
        let mut objects: BTreeMap<usize, GradedElement<D>> = s.objects.iter().cloned().enumerate().collect();
        let mut edges = s.edges.clone();
        let mut fillers = s.fillers.clone();
        match dim {
            1 => objects.retain(|&k, _| k == missing),
            2 => {
                let face: Vec<usize> = (0..3).filter(|&v| v != missing).collect();
                edges.remove(&(face[0], face[1]));
                fillers.clear();
            }
            _ => {
                let face: Vec<usize> = (0..4).filter(|&v| v != missing).collect();
                fillers.remove(&(face[0], face[1], face[2]));
            }
        }
        Ok(Horn { dim, missing, objects, edges, fillers })
    }
}

fn horn_shape<D: Dgla>(h: &Horn<D>) -> Result<()> {
    let bad = |what: &str| Err(Error::Shape(format!("horn Λ^{{{},{}}}: {what}", h.missing, h.dim)));
    if !(1..=3).contains(&h.dim) || h.missing > h.dim {
        return bad("unsupported");
    }
    let n = h.dim;
    let expect_objects: Vec<usize> = if n == 1 { vec![h.missing] } else { (0..=n).collect() };
    if h.objects.keys().copied().collect::<Vec<_>>() != expect_objects {
        return bad("wrong objects");
    }
    let expect_edges: Vec<(usize, usize)> = match n {
        1 => vec![],
        2 => pairs(2).filter(|&(a, b)| a == h.missing || b == h.missing).collect(),
        _ => pairs(3).collect(),
    };
    if h.edges.keys().copied().collect::<Vec<_>>() != expect_edges {
        return bad("wrong 1-cells");
    }
    let expect_fillers: Vec<(usize, usize, usize)> = match n {
        3 => triples(3).filter(|&(a, b, c)| a == h.missing || b == h.missing || c == h.missing).collect(),
        _ => vec![],
    };
    if h.fillers.keys().copied().collect::<Vec<_>>() != expect_fillers {
        return bad("wrong 2-cells");
    }
    Ok(())
}

/// Fills a horn of dimension 1, 2 or 3. Fillers in dimension 2 have trivial
/// interior; in dimension 3 the missing 2-cell is forced.
pub fn nerve_horn_fill<D: Dgla>(model: &D, h: &Horn<D>) -> Result<NerveSimplex<D>> {
    horn_shape(h)?;
    let x = |k: usize| h.objects[&k].clone();
    let mut edges = h.edges.clone();
    let mut fillers = h.fillers.clone();
    match h.dim {
        1 => {
            let x0 = x(h.missing);
            let order = x0.order();
            edges.insert((0, 1), GaugeElement::identity(model, order));
            return NerveSimplex::new(model, vec![x0.clone(), x0], edges, fillers);
        }
        2 => {
            let e = |a, b| &h.edges[&(a, b)];
            let (key, value) = match h.missing {
                0 => ((1, 2), bch(model, e(0, 2), &e(0, 1).inverse())?),
                1 => ((0, 2), bch(model, e(1, 2), e(0, 1))?),
                _ => ((0, 1), bch(model, &e(1, 2).inverse(), e(0, 2))?),
            };
            edges.insert(key, value);
            fillers.insert((0, 1, 2), GradedElement::zero(model, -1, x(0).order()));
        }
        _ => {
            let x0 = x(0);
            let e01 = h.edges[&(0, 1)].log();
            let u = |a, b, c| &h.fillers[&(a, b, c)];
            let tw = |p: &GradedElement<D>, q: &GradedElement<D>| bch_twisted(model, &x0, p, q);
            let (key, value) = match h.missing {
                3 => {
                    let moved = exp_ad(model, e01, u(1, 2, 3), -1)?;
                    ((0, 1, 2), tw(&tw(&moved, u(0, 1, 3))?, &u(0, 2, 3).neg())?)
                }
                2 => {
                    let moved = exp_ad(model, e01, u(1, 2, 3), -1)?;
                    ((0, 1, 3), tw(&moved.neg(), &tw(u(0, 1, 2), u(0, 2, 3))?)?)
                }
                1 => {
                    let moved = exp_ad(model, e01, u(1, 2, 3), -1)?;
                    ((0, 2, 3), tw(&u(0, 1, 2).neg(), &tw(&moved, u(0, 1, 3))?)?)
                }
                _ => {
                    let at0 = tw(&tw(u(0, 1, 2), u(0, 2, 3))?, &u(0, 1, 3).neg())?;
                    ((1, 2, 3), exp_ad(model, e01, &at0, 1)?)
                }
            };
            fillers.insert(key, value);
        }
    }
    let objects = (0..=h.dim).map(x).collect();
    NerveSimplex::new(model, objects, edges, fillers)
        .map_err(|e| Error::Invalid(format!("horn Λ^{{{},{}}} has no filler: {e}", h.missing, h.dim)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebroid::{AlgebroidModel, PolyVector, PolyVectorModel};
    use crate::formal::{parse_poly, Poly};

    type M = PolyVectorModel<Poly>;

    fn p(s: &str) -> Poly {
        parse_poly(s, &["x", "y"]).unwrap()
    }

    fn vf(m: &M, i: usize, f: &str) -> GaugeElement<M> {
        GaugeElement::new(GradedElement::monomial(m, PolyVector::basis(&[i], p(f)), 1, 2)).unwrap()
    }

    fn fun(m: &M, f: &str) -> GradedElement<M> {
        GradedElement::monomial(m, PolyVector::function(p(f)), 1, 2)
    }

    /// A 3-simplex built from a chain of 1-cells and free 2-cells on the
    /// faces through 0, with the last face forced.
    fn tetra(m: &M) -> NerveSimplex<M> {
        let x0 = GradedElement::monomial(m, PolyVector::basis(&[0, 1], p("1 + x*y")), 1, 2);
        let e01 = vf(m, 0, "y^2");
        let e12 = vf(m, 1, "x");
        let e23 = vf(m, 0, "x*y");
        let x1 = gauge_apply(m, &e01, &x0).unwrap();
        let x2 = gauge_apply(m, &e12, &x1).unwrap();
        let x3 = gauge_apply(m, &e23, &x2).unwrap();
        let mut objects = BTreeMap::new();
        for (k, v) in [x0, x1, x2, x3].into_iter().enumerate() {
            objects.insert(k, v);
        }
        let mut edges = Edges::new();
        edges.insert((0, 1), e01.clone());
        edges.insert((1, 2), e12.clone());
        edges.insert((2, 3), e23.clone());
        let mut fillers = Fillers::new();
        let u012 = fun(m, "x");
        let u023 = fun(m, "y^2");
        let u123 = fun(m, "x*y");
        let with_twist = |e: GaugeElement<M>, x: &GradedElement<M>, u: &GradedElement<M>| {
            bch(m, &e, &GaugeElement::new(twisted_differential(m, x, u).unwrap()).unwrap()).unwrap()
        };
        edges.insert((0, 2), with_twist(bch(m, &e12, &e01).unwrap(), &objects[&0], &u012));
        edges.insert((1, 3), with_twist(bch(m, &e23, &e12).unwrap(), &objects[&1], &u123));
        edges.insert((0, 3), with_twist(bch(m, &e23, &edges[&(0, 2)]).unwrap(), &objects[&0], &u023));
        fillers.insert((0, 1, 2), u012);
        fillers.insert((0, 2, 3), u023);
        fillers.insert((1, 2, 3), u123);
        let h = Horn { dim: 3, missing: 2, objects, edges, fillers };
        nerve_horn_fill(m, &h).unwrap()
    }

    #[test]
    fn three_horns_recover_the_face() {
        let m = PolyVectorModel::new(AlgebroidModel::tangent(p("0")));
        let t = tetra(&m);
        assert!(t.tetra_commutes(&m).unwrap());
        for k in 0..4 {
            let h = Horn::of_simplex(&t, k).unwrap();
            assert_eq!(nerve_horn_fill(&m, &h).unwrap(), t, "missing face {k}");
        }
    }

    #[test]
    fn two_horns() {
        let m = PolyVectorModel::new(AlgebroidModel::tangent(p("0")));
        let t = tetra(&m).face(3);
        for k in 0..3 {
            let h = Horn::of_simplex(&t, k).unwrap();
            let s = nerve_horn_fill(&m, &h).unwrap();
            assert!(s.fillers()[&(0, 1, 2)].is_zero());
            assert_eq!(s.objects(), t.objects());
        }
    }

    #[test]
    fn broken_tetrahedron_rejected() {
        let m = PolyVectorModel::new(AlgebroidModel::tangent(p("0")));
        let t = tetra(&m);
        let mut fillers = t.fillers().clone();
        let u = fillers[&(0, 1, 3)].add(&fun(&m, "1"));
        fillers.insert((0, 1, 3), u);
        // a constant shifts the 2-cell without changing its target
        let r = NerveSimplex::new(&m, t.objects().to_vec(), t.edges().clone(), fillers);
        assert!(matches!(r, Err(Error::Invalid(_))));
    }
}
