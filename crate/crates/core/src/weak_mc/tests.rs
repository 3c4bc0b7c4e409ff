use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::algebroid::{moyal_generate, AlgebroidModel, PolyDiffModel, PolyVector, PolyVectorModel};
use crate::error::Error;
use crate::formal::{parse_poly, Additive, Poly};
use crate::random;
use crate::simplicial::{cech_build, Cover, CoverShape, SplittingOracle};

type M = PolyVectorModel<Poly>;

fn p(s: &str) -> Poly {
    parse_poly(s, &["x", "y"]).unwrap()
}

fn model() -> M {
    PolyVectorModel::new(AlgebroidModel::tangent(p("0")))
}

fn cech(shape: CoverShape) -> CosimplicialCech {
    cech_build(Cover::constant(shape), 3).unwrap()
}

fn sampler(m: &M) -> impl FnMut(&mut ChaCha8Rng, i32) -> PolyVector<Poly> + '_ {
    move |rng, d| random::polyvector(rng, &m.algebroid, d, 2, 2)
}

fn global_pi(m: &M, order: usize) -> GradedElement<M> {
    // every bivector on the plane is Poisson
    let coeffs = (0..=order)
        .map(|k| if k == 0 { PolyVector::zero(1) } else { PolyVector::basis(&[0, 1], p(&format!("{k} + x*y"))) })
        .collect();
    GradedElement::from_coeffs(m, 1, coeffs, order).unwrap()
}

#[test]
fn trivial_triple_passes_and_violation_is_located() {
    let m = model();
    let c = cech(CoverShape::full(3));
    let w = WeakMCTriple::global(&m, c.cover().shape(), &global_pi(&m, 2)).unwrap();
    assert!(weak_mc_check(&m, &c, &w).unwrap().passed());
    let mut a = w.a.clone();
    a.insert((0, 1, 2), GradedElement::monomial(&m, PolyVector::function(p("x")), 1, 2));
    let bad = w.with_a(a);
    let r = weak_mc_check(&m, &c, &bad).unwrap();
    // d vanishes on polyvectors, so d_Π(hx) = h^2 [π_1, x]
    assert_eq!(r.failure(WeakCondition::Cocycle), Some(&Failure { order: 2, tuple: vec![0, 1, 2] }));
    assert!(r.failure(WeakCondition::Gauge).is_none());
}

#[test]
fn equivalences_preserve_the_conditions() {
    let m = model();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for trial in 0..10 {
        let shape = random::cover_shape(&mut rng, 4);
        let c = cech(shape.clone());
        let w = WeakMCTriple::global(&m, &shape, &global_pi(&m, 2)).unwrap();
        let e1 = random::weak_equivalence(&mut rng, &m, &shape, 2, &mut sampler(&m));
        let w1 = weak_equiv_apply(&m, &e1, &w).unwrap();
        assert!(weak_mc_check(&m, &c, &w1).unwrap().passed(), "trial {trial}: {w1:?}");
        let e2 = random::weak_equivalence(&mut rng, &m, &shape, 2, &mut sampler(&m));
        let w2 = weak_equiv_apply(&m, &e2, &w1).unwrap();
        assert!(weak_mc_check(&m, &c, &w2).unwrap().passed(), "trial {trial}");
        let e12 = weak_equiv_compose(&m, &w, &e1, &e2).unwrap();
        assert_eq!(weak_equiv_apply(&m, &e12, &w).unwrap(), w2, "trial {trial}");
    }
}

#[test]
fn identity_equivalence_is_neutral() {
    let m = model();
    let shape = CoverShape::full(3);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let w0 = WeakMCTriple::global(&m, &shape, &global_pi(&m, 2)).unwrap();
    let w = weak_equiv_apply(&m, &random::weak_equivalence(&mut rng, &m, &shape, 2, &mut sampler(&m)), &w0).unwrap();
    assert_eq!(weak_equiv_apply(&m, &WeakEquivalence::identity(&m, &shape, 2), &w).unwrap(), w);
}

fn two_open_fixture(m: &M) -> (CosimplicialCech, WeakMCTriple<M>) {
    let c = cech(CoverShape::full(2));
    let mut w = WeakMCTriple::global(m, c.cover().shape(), &GradedElement::zero(m, 1, 2)).unwrap();
    let g = GaugeElement::new(GradedElement::monomial(m, PolyVector::basis(&[0], p("1")), 1, 2)).unwrap();
    w.g.insert((0, 1), g);
    (c, w)
}

#[test]
fn two_open_example() {
    let m = model();
    let (c, w) = two_open_fixture(&m);
    assert!(weak_mc_check(&m, &c, &w).unwrap().passed());
    let mut e = WeakEquivalence::identity(&m, c.cover().shape(), 2);
    e.gamma.insert(1, w.g(0, 1).inverse());
    let out = weak_equiv_apply(&m, &e, &w).unwrap();
    assert!(out.is_normal());
    let n = normalize_acyclic(&m, &c, &w, SplittingOracle::Cone).unwrap();
    assert_eq!(n.chain.len(), 1);
    assert_eq!(n.normal, out);
}

#[test]
fn three_open_normalization_kills_a() {
    let m = model();
    let shape = CoverShape::full(3);
    let c = cech(shape.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let w0 = WeakMCTriple::global(&m, &shape, &global_pi(&m, 2)).unwrap();
    let w = weak_equiv_apply(&m, &random::weak_equivalence(&mut rng, &m, &shape, 2, &mut sampler(&m)), &w0).unwrap();
    assert!(!w.is_normal());
    for oracle in [SplittingOracle::Cone, SplittingOracle::Linear] {
        let n = normalize_acyclic(&m, &c, &w, oracle).unwrap();
        assert!(n.normal.is_normal());
        assert!(weak_mc_check(&m, &c, &n.normal).unwrap().passed());
        let total = compose_chain(&m, &w, &n.chain).unwrap();
        assert_eq!(weak_equiv_apply(&m, &total, &w).unwrap(), n.normal);
    }
    let n = normalize_acyclic(&m, &c, &n_normal_input(&m, &shape), SplittingOracle::Cone).unwrap();
    assert!(n.chain.is_empty());
}

fn n_normal_input(m: &M, shape: &CoverShape) -> WeakMCTriple<M> {
    WeakMCTriple::global(m, shape, &global_pi(m, 2)).unwrap()
}

#[test]
fn circle_class_is_reported() {
    let m = model();
    let shape = CoverShape::closure(3, [vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
    let c = cech(shape.clone());
    let mut w = WeakMCTriple::global(&m, &shape, &GradedElement::zero(&m, 1, 2)).unwrap();
    let g = GaugeElement::new(GradedElement::monomial(&m, PolyVector::basis(&[0], p("1")), 1, 2)).unwrap();
    w.g.insert((0, 1), g);
    assert!(weak_mc_check(&m, &c, &w).unwrap().passed());
    for oracle in [SplittingOracle::Trivial, SplittingOracle::Cone, SplittingOracle::Linear] {
        match normalize_acyclic(&m, &c, &w, oracle) {
            Err(Error::Oracle(f)) => {
                assert_eq!(f.hbar_order, Some(1));
                assert_eq!(f.cochain_level, 1);
                assert_eq!(f.witness.iter().map(|(t, _)| t.clone()).collect::<Vec<_>>(), vec![vec![0, 1]]);
            }
            other => panic!("{oracle}: {other:?}"),
        }
    }
}

#[test]
fn tot_round_trip() {
    let m = model();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..5 {
        let shape = random::cover_shape(&mut rng, 4);
        let c = cech(shape.clone());
        let w0 = WeakMCTriple::global(&m, &shape, &global_pi(&m, 2)).unwrap();
        let e = random::weak_equivalence(&mut rng, &m, &shape, 2, &mut sampler(&m));
        let w = weak_equiv_apply(&m, &e, &w0).unwrap();
        let t = TotZeroSimplex::from_triple(&m, &c, &w).unwrap();
        t.verify(&m, &c).unwrap();
        assert_eq!(t.to_triple(&c).unwrap(), w);
        assert_eq!(TotZeroSimplex::from_triple(&m, &c, &t.to_triple(&c).unwrap()).unwrap(), t);
    }
}

#[test]
fn tot_rejects_broken_degeneracy() {
    let m = model();
    let (c, w) = two_open_fixture(&m);
    let mut t = TotZeroSimplex::from_triple(&m, &c, &w).unwrap();
    t.g.insert((0, 0), w.g(0, 1).clone());
    assert!(t.verify(&m, &c).is_err());
}

#[test]
fn promotion_deletes_constants_and_gauges_exact_parts() {
    let m = model();
    let shape = CoverShape::full(3);
    let c = cech(shape.clone());
    let w0 = WeakMCTriple::global(&m, &shape, &global_pi(&m, 3)).unwrap();
    // exact part from a random α at order 2, then a constant cocycle on top
    let mut e = WeakEquivalence::identity(&m, &shape, 3);
    e.alpha.insert((0, 1), GradedElement::monomial(&m, PolyVector::function(p("x^2 + y")), 2, 3));
    e.alpha.insert((1, 2), GradedElement::monomial(&m, PolyVector::function(p("x*y")), 2, 3));
    let w1 = weak_equiv_apply(&m, &e, &w0).unwrap();
    let mut a = w1.a.clone();
    let u = a[&(0, 1, 2)].add(&GradedElement::monomial(&m, PolyVector::function(p("5")), 2, 3));
    a.insert((0, 1, 2), u);
    let w = w1.with_a(a);
    assert!(weak_mc_check(&m, &c, &w).unwrap().passed());
    let out = promote_actual(&m, &c, &w, &ConstantFunctions, SplittingOracle::Linear).unwrap();
    assert!(out.actual.is_actual());
    assert!(weak_mc_check(&m, &c, &out.actual).unwrap().passed());
    assert_eq!(out.actual.pi_map(), w.pi_map());
    assert_eq!(out.steps.len(), 1);
    assert_eq!(out.steps[0].deleted[&(0, 1, 2)], PolyVector::function(p("5")));
}

#[test]
fn promotion_refuses_first_order_a() {
    let m = model();
    let c = cech(CoverShape::full(3));
    let w0 = WeakMCTriple::global(&m, c.cover().shape(), &global_pi(&m, 2)).unwrap();
    let mut a = w0.a.clone();
    a.insert((0, 1, 2), GradedElement::monomial(&m, PolyVector::function(p("1")), 1, 2));
    let w = w0.with_a(a);
    assert!(matches!(promote_actual(&m, &c, &w, &ConstantFunctions, SplittingOracle::Linear), Err(Error::Invalid(_))));
}

#[test]
fn first_order_of_moyal() {
    let pd = PolyDiffModel::new(p("0"));
    let c = cech(CoverShape::full(2));
    let pi = PolyVector::basis(&[0, 1], p("3/2"));
    let big = moyal_generate(&pd, &pi, 3).unwrap();
    let w = WeakMCTriple::global(&pd, c.cover().shape(), &big).unwrap();
    assert!(weak_mc_check(&pd, &c, &w).unwrap().passed());
    let f = skew_symmetrize_first_order(&c, &w).unwrap();
    assert_eq!(f.global(), Some(&pi));
    assert!(f.higher_order.is_empty());
}

#[test]
fn poisson_examples() {
    let m = model();
    let c = cech(CoverShape::full(2));
    let pis: BTreeMap<usize, PolyVector<Poly>> =
        [(0, PolyVector::basis(&[0, 1], p("x"))), (1, PolyVector::basis(&[0, 1], p("x")))].into_iter().collect();
    assert!(poisson_check(&m, &c, &pis).unwrap());

    let vars = ["a", "b", "c", "d"];
    let q = |s: &str| parse_poly(s, &vars).unwrap();
    let m4 = PolyVectorModel::new(AlgebroidModel::tangent(q("0")));
    let c1 = cech(CoverShape::full(1));
    let pi = PolyVector::basis(&[0, 1], q("c")).add(&PolyVector::basis(&[2, 3], q("1")));
    let one: BTreeMap<usize, PolyVector<Poly>> = [(0, pi)].into_iter().collect();
    assert!(!poisson_check(&m4, &c1, &one).unwrap());
}

#[test]
fn file_round_trip() {
    let m = model();
    let shape = CoverShape::full(3);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let w0 = WeakMCTriple::global(&m, &shape, &global_pi(&m, 2)).unwrap();
    let e = random::weak_equivalence(&mut rng, &m, &shape, 2, &mut sampler(&m));
    let w = weak_equiv_apply(&m, &e, &w0).unwrap();
    let text = format!("model polyvector x y\n{}", format_weak_mc(&m, &w));
    let back = parse_weak_mc_file(&m, &shape, &text, 2).unwrap();
    assert_eq!(back.triple, w);
    assert_eq!(back.header["model"], "polyvector x y");
    assert_eq!(parse_equivalence(&m, &shape, &format_equivalence(&m, &e), 2).unwrap(), e);
    let bad = parse_weak_mc_file(&m, &shape, "pi 0 : [x] h\n", 2);
    assert!(matches!(bad, Err(Error::Degree { .. })));
    let bad = parse_weak_mc_file(&m, &shape, "g 0 3 : [x] h\n", 2);
    assert!(matches!(bad, Err(Error::Parse { line: 1, .. })));
}
