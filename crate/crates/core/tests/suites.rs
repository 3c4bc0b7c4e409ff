use std::time::Instant;

use defq_core::algebroid::{parse_model_file, AlgebroidModel, PolyDiffModel, PolyVectorModel};
use defq_core::dgla::AbelianModel;
use defq_core::formal::{parse_poly, rat, Poly};
use defq_core::suites::{
    deligne_suite, gauge_orbit_suite, jacobi_suite, run_all, simplicial_suite, Fault, Faulty, SuiteOutcome,
};

fn plane() -> AlgebroidModel<Poly> {
    AlgebroidModel::tangent(parse_poly("0", &["x", "y"]).unwrap())
}

fn assert_ok(o: &SuiteOutcome) {
    assert!(o.passed(), "{} on {}: {:?}", o.suite, o.model, o.failure);
}

#[test]
fn simplicial_identities_up_to_five() {
    let o = simplicial_suite(5);
    assert_ok(&o);
    assert!(o.checks > 500);
}

#[test]
fn all_suites_pass_on_the_plane() {
    let t = Instant::now();
    let rep = run_all(&plane(), 20, 2, 1, Fault::None);
    assert!(rep.passed(), "{rep}");
    eprintln!("{:?}", t.elapsed());
}

#[test]
fn nonabelian_algebroid_passes() {
    let m: AlgebroidModel<Poly> =
        parse_model_file("vars x y\nrank 2\nanchor 1 y 1\nanchor 2 y x*y\nbracket 1 2 1 x\n").unwrap();
    let rep = run_all(&m, 15, 2, 4, Fault::None);
    assert!(rep.passed(), "{rep}");
    // no polydifferential model for a non-tangent algebroid
    assert!(rep.outcomes.iter().all(|o| !o.model.contains("polydiff")));
}

#[test]
fn sign_fault_is_caught_with_a_small_witness() {
    let rep = run_all(&plane(), 20, 2, 1, Fault::Sign);
    assert!(!rep.passed());
    let failed: Vec<&SuiteOutcome> = rep.outcomes.iter().filter(|o| !o.passed()).collect();
    assert!(failed.iter().any(|o| o.suite == "cartan"));
    assert!(failed.iter().any(|o| o.suite == "jacobi"));
    assert!(failed.iter().any(|o| o.suite == "gauge-orbit"));
    let text = rep.to_string();
    assert!(text.contains("FAILED") && text.contains("law "), "{text}");
    // witnesses are shrunk: a minimal antisymmetry violation has single terms
    let w = failed.iter().find(|o| o.suite == "jacobi").unwrap().failure.as_ref().unwrap();
    assert!(w.inputs.iter().all(|(_, v)| !v.contains(';')), "{w:?}");
}

#[test]
fn fault_wrapper_alone() {
    let pv = PolyVectorModel::new(plane());
    assert_ok(&jacobi_suite(&pv, 10, 3));
    assert!(!jacobi_suite(&Faulty(pv), 10, 3).passed());
}

#[test]
fn reports_are_reproducible() {
    let a = run_all(&plane(), 5, 2, 9, Fault::Sign);
    let b = run_all(&plane(), 5, 2, 9, Fault::Sign);
    assert_eq!(a.to_string(), b.to_string());
    assert_ne!(a.to_string(), run_all(&plane(), 5, 2, 10, Fault::Sign).to_string());
}

#[test]
fn each_model_family() {
    let ab = AbelianModel::koszul(vec![rat(1, 1), rat(0, 1), rat(3, 2)]);
    let pd = PolyDiffModel::new(parse_poly("0", &["x", "y"]).unwrap());
    for o in [
        gauge_orbit_suite(&ab, 20, 3, 2),
        deligne_suite(&ab, 10, 2, 2),
        gauge_orbit_suite(&pd, 10, 3, 2),
        deligne_suite(&pd, 5, 2, 2),
    ] {
        assert_ok(&o);
    }
}
