//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use defq_cli::run_args;
use defq_core::algebroid::{
    parse_model_file, skew_symmetrize, AlgebroidModel, PolyDiffModel, PolyVector, PolyVectorModel,
};
use defq_core::dgla::{AbelianModel, GradedElement};
use defq_core::formal::{parse_poly, rat, Additive, Poly, Ring};
use defq_core::notation::parse_element;
use defq_core::random;
use defq_core::simplicial::{
    cech_build, parse_cover_file, relation_instances, Cover, CoverShape, OrdinalMap, SplittingOracle,
};
use defq_core::suites::{cartan_suite, deligne_suite, gauge_orbit_suite, simplicial_suite, standard_symplectic, Fault};
use defq_core::weak_mc::{
    compose_chain, normalize_acyclic, parse_weak_mc_file, promote_actual, skew_symmetrize_first_order,
    weak_equiv_apply, weak_mc_check, ConstantFunctions, TotZeroSimplex, WeakEquivalence, WeakMCTriple,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

const SEED: u64 = 20_240_601;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn plane_zero() -> Poly {
    parse_poly("0", &["x", "y"]).unwrap()
}

fn plane() -> AlgebroidModel<Poly> {
    AlgebroidModel::tangent(plane_zero())
}

fn koszul() -> AbelianModel {
    AbelianModel::koszul(vec![rat(1, 1), rat(2, 1), rat(-1, 1)])
}

fn nonabelian() -> AlgebroidModel<Poly> {
    parse_model_file(&std::fs::read_to_string(fixture("nonabelian.model")).unwrap()).unwrap()
}

/// Result of one criterion: pass flag and a one-line summary.
type Verdict = (bool, String);

fn gauge_orbit_closure() -> Verdict {
    let start = Instant::now();
    let outcomes = [
        gauge_orbit_suite(&koszul(), 200, 3, SEED),
        gauge_orbit_suite(&PolyDiffModel::new(plane_zero()), 200, 3, SEED),
        gauge_orbit_suite(&PolyVectorModel::new(plane()), 200, 3, SEED),
    ];
    let elapsed = start.elapsed();
    let failed: Vec<String> = outcomes.iter().filter(|o| !o.passed()).map(|o| format!("{:?}", o.failure)).collect();
    let fast = elapsed < Duration::from_secs(30);
    let checks: usize = outcomes.iter().map(|o| o.checks).sum();
    (
        failed.is_empty() && fast,
        format!("3 models x 200 pairs at N=3, {checks} checks in {:.1}s (limit 30s) {}", elapsed.as_secs_f64(), failed.join(" ")),
    )
}

fn deligne_laws() -> Verdict {
    let outcomes = [
        deligne_suite(&koszul(), 100, 2, SEED),
        deligne_suite(&PolyVectorModel::new(plane()), 100, 2, SEED),
        deligne_suite(&PolyDiffModel::new(plane_zero()), 100, 2, SEED),
    ];
    let failed: Vec<String> = outcomes
        .iter()
        .filter(|o| !o.passed())
        .map(|o| format!("{} {:?}", o.model, o.failure))
        .collect();
    let checks: usize = outcomes.iter().map(|o| o.checks).sum();
    (failed.is_empty(), format!("3 models x 100 diagrams at N=2, {checks} law checks {}", failed.join(" ")))
}

fn weak_mc_machinery() -> Verdict {
    let m = PolyVectorModel::new(plane());
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut problems = Vec::new();
    for trial in 0..100 {
        let count = rng.gen_range(1..=4);
        let shape = random::cover_shape(&mut rng, count);
        let cech = cech_build(Cover::constant(shape.clone()), 3).unwrap();
        // every bivector on the plane is Poisson, so a global one is MC
        let pi = random::series(&mut rng, &m, 1, 2, &mut |r: &mut ChaCha8Rng, d| {
            random::polyvector(r, &m.algebroid, d, 2, 2)
        });
        let mut sample = |r: &mut ChaCha8Rng, d| random::polyvector(r, &m.algebroid, d, 1, 2);
        let w0 = WeakMCTriple::global(&m, &shape, &pi).unwrap();
        let w = weak_equiv_apply(&m, &random::weak_equivalence(&mut rng, &m, &shape, 2, &mut sample), &w0).unwrap();
        let e = random::weak_equivalence(&mut rng, &m, &shape, 2, &mut sample);
        let w2 = weak_equiv_apply(&m, &e, &w).unwrap();
        if !weak_mc_check(&m, &cech, &w).unwrap().passed() || !weak_mc_check(&m, &cech, &w2).unwrap().passed() {
            problems.push(format!("trial {trial}: weak MC conditions lost"));
            continue;
        }
        let tot = TotZeroSimplex::from_triple(&m, &cech, &w2).unwrap();
        if tot.verify(&m, &cech).is_err() || tot.to_triple(&cech).unwrap() != w2 {
            problems.push(format!("trial {trial}: Tot round trip"));
        }
    }
    (problems.is_empty(), format!("100 trials on covers of 1..4 opens at N=2 {}", problems.join("; ")))
}

fn json_run(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["defq", "--format", "json"];
    full.extend_from_slice(args);
    let out = run_args(full);
    (out.code, serde_json::from_str(&out.stdout).unwrap_or(Value::Null))
}

fn acyclic_normalization() -> Verdict {
    let mut problems = Vec::new();
    for (file, oracle) in [("two_open.wmc", "cone"), ("two_open.wmc", "linear"), ("three_open.wmc", "cone"), ("three_open.wmc", "linear")] {
        let path = fixture(file);
        let (code, v) = json_run(&["normalize", path.to_str().unwrap(), "--oracle", oracle]);
        let r = &v["recheck"];
        let clean = r["chain_reproduces"] == true
            && r["normal"] == true
            && r["conditions"].as_array().is_some_and(|c| c.iter().all(|x| x["failure"].is_null()));
        if code != 0 || !clean {
            problems.push(format!("{file}/{oracle}: exit {code}"));
        }
        if file == "two_open.wmc" && v["normal_form"] != "pi 0 : 0\npi 1 : 0\ng 0 1 : 0\n" {
            problems.push(format!("two-open normal form {}", v["normal_form"]));
        }
    }

    // the same through the library, re-verified here
    let m = PolyVectorModel::new(plane());
    for file in ["two_open.wmc", "three_open.wmc"] {
        let cover_name = if file.starts_with("two") { "two_open.cover" } else { "three_open.cover" };
        let cover = parse_cover_file(&std::fs::read_to_string(fixture(cover_name)).unwrap()).unwrap();
        let cech = cech_build(cover, 3).unwrap();
        let src = std::fs::read_to_string(fixture(file)).unwrap();
        let w = parse_weak_mc_file(&m, cech.cover().shape(), &src, 2).unwrap().triple;
        let n = normalize_acyclic(&m, &cech, &w, SplittingOracle::Linear).unwrap();
        let total = compose_chain(&m, &w, &n.chain).unwrap();
        if weak_equiv_apply(&m, &total, &w).unwrap() != n.normal || !n.normal.is_normal() {
            problems.push(format!("{file}: library chain does not re-verify"));
        }
    }

    // the circle: c_01 = ∂x, c_12 = c_02 = 0. Coboundaries b_j - b_i have
    // c_01 + c_12 - c_02 = 0, and here that sum is ∂x, so the class is
    // nonzero and the witness must be exactly c.
    let dx = PolyVector::basis(&[0], plane_zero().one_like());
    let (c01, c12, c02) = (dx.clone(), PolyVector::zero(0), PolyVector::zero(0));
    assert!(!c01.add(&c12).sub(&c02).is_zero());
    let path = fixture("circle.wmc");
    for oracle in ["trivial", "cone", "linear"] {
        let (code, v) = json_run(&["normalize", path.to_str().unwrap(), "--oracle", oracle]);
        let f = &v["oracle_failure"];
        let witness: Vec<(Value, Value)> = f["witness"]
            .as_array()
            .map(|w| w.iter().map(|x| (x["tuple"].clone(), x["value"].clone())).collect())
            .unwrap_or_default();
        let expected = vec![(serde_json::json!([0, 1]), Value::String(dx.to_string()))];
        if code != 4 || f["hbar_order"] != 1 || f["cochain_level"] != 1 || witness != expected {
            problems.push(format!("circle/{oracle}: exit {code}, {f}"));
        }
    }
    (problems.is_empty(), format!("two-open, three-open and circle fixtures {}", problems.join("; ")))
}

/// `(f ⋆ g)` truncated at `h^order`, computed from the operators directly.
fn star(pd: &PolyDiffModel<Poly>, pi: &GradedElement<PolyDiffModel<Poly>>, f: &[Poly], g: &[Poly]) -> Vec<Poly> {
    let n = pi.order();
    let mut out = vec![pd.zero_coeff().clone(); n + 1];
    for i in 0..=n {
        for j in 0..=n - i {
            for k in 0..=n - i - j {
                let v = if k == 0 { f[i].mul(&g[j]) } else { pd.evaluate(pi.coeff(k), &[f[i].clone(), g[j].clone()]).unwrap() };
                out[i + j + k] = out[i + j + k].add(&v);
            }
        }
    }
    out
}

fn quantization_witness() -> Verdict {
    let set: [(&[&str], &str); 6] = [
        (&["x"], "0"),
        (&["x", "y"], "[x, y] 1"),
        (&["x", "y"], "[x, y] -3/2"),
        (&["x", "y", "z"], "[x, y] 1; [y, z] 2; [x, z] -1/3"),
        (&["x", "y", "z", "w"], "[x, y] 1; [z, w] 1"),
        (&["x", "y", "z", "w"], "[x, y] 2; [x, z] -1; [x, w] 1/2; [y, z] 3; [y, w] -1; [z, w] 5/7"),
    ];
    let dir = std::env::temp_dir().join(format!("defq-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let mut problems = Vec::new();
    for (n, (vars, src)) in set.iter().enumerate() {
        let mut args = vec!["defq", "moyal", "--order", "3", "--pi", src, "--vars"];
        args.extend_from_slice(vars);
        let gen = run_args(args);
        let file = dir.join(format!("moyal{n}.elem"));
        std::fs::write(&file, &gen.stdout).unwrap();
        let check = run_args(["defq", "check-mc", file.to_str().unwrap()]);
        if gen.code != 0 || check.code != 0 || !check.stdout.contains("residual 0 through h^3") {
            problems.push(format!("{src}: check-mc exit {}", check.code));
        }

        let zero = Poly::zero(vars);
        let pv = PolyVectorModel::new(AlgebroidModel::tangent(zero.clone()));
        let pd = PolyDiffModel::new(zero.clone());
        let bivector = parse_element(&pv, src, 1, 0).unwrap().coeff(0).clone();
        let star_product = defq_core::algebroid::moyal_generate(&pd, &bivector, 3).unwrap();

        // associativity evaluated on polynomials
        let p = |s: &str| {
            let mut f = vec![zero.clone(); 4];
            f[0] = parse_poly(s, vars).unwrap();
            f
        };
        let v = vars.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        let samples = [
            format!("{}^3 + {}", v[0], v[v.len() - 1]),
            format!("{}^2*{}^2", v[v.len() - 1], v[0]),
            format!("{}*{} + 2", v[0], v[v.len() / 2]),
        ];
        let (f, g, k) = (p(&samples[0]), p(&samples[1]), p(&samples[2]));
        let left = star(&pd, &star_product, &star(&pd, &star_product, &f, &g), &k);
        let right = star(&pd, &star_product, &f, &star(&pd, &star_product, &g, &k));
        if left != right {
            problems.push(format!("{src}: not associative"));
        }

        // first-order skew-symmetrization returns π
        let shape = CoverShape::full(1);
        let cech = cech_build(Cover::constant(shape.clone()), 3).unwrap();
        let w = WeakMCTriple::global(&pd, &shape, &star_product).unwrap();
        let first = skew_symmetrize_first_order(&cech, &w).unwrap();
        let direct = skew_symmetrize(star_product.coeff(1)).unwrap();
        if first.global() != Some(&bivector) || direct.bivector != bivector || direct.higher_order.is_some() {
            problems.push(format!("{src}: skew round trip"));
        }
    }
    std::fs::remove_dir_all(&dir).ok();
    (problems.is_empty(), format!("{} constant bivectors on 1..4 variables at N=3 {}", set.len(), problems.join("; ")))
}

fn promotion() -> Verdict {
    let pd = PolyDiffModel::new(plane_zero());
    let p = |s: &str| parse_poly(s, &["x", "y"]).unwrap();
    let pv = PolyVectorModel::new(plane());
    let pi_const = parse_element(&pv, "[x, y] 1", 1, 0).unwrap().coeff(0).clone();
    let star_product = defq_core::algebroid::moyal_generate(&pd, &pi_const, 3).unwrap();
    let shape = CoverShape::full(3);
    let cech = cech_build(Cover::constant(shape.clone()), 3).unwrap();
    let w0 = WeakMCTriple::global(&pd, &shape, &star_product).unwrap();
    // exact part from α at order 2, then a constant cocycle on top
    let mut e = WeakEquivalence::identity(&pd, &shape, 3);
    let func = |s: &str| defq_core::algebroid::PolyDiff::function(p(s));
    e.alpha.insert((0, 1), GradedElement::monomial(&pd, func("x^2 + y"), 2, 3));
    e.alpha.insert((1, 2), GradedElement::monomial(&pd, func("x*y"), 2, 3));
    let w1 = weak_equiv_apply(&pd, &e, &w0).unwrap();
    let mut a = w1.a_map().clone();
    let u = a[&(0, 1, 2)].add(&GradedElement::monomial(&pd, func("5"), 2, 3));
    a.insert((0, 1, 2), u);
    let w = WeakMCTriple::new(&shape, w1.pi_map().clone(), w1.g_map().clone(), a).unwrap();

    let mut problems = Vec::new();
    if !weak_mc_check(&pd, &cech, &w).unwrap().passed() || w.a(0, 1, 2).is_zero_mod(3) {
        problems.push("fixture is not a weak quantization with a at h^2".to_string());
    }
    match promote_actual(&pd, &cech, &w, &ConstantFunctions, SplittingOracle::Linear) {
        Ok(out) => {
            if !out.actual.is_actual() {
                problems.push("a is not 1".into());
            }
            if !weak_mc_check(&pd, &cech, &out.actual).unwrap().passed() {
                problems.push("conditions fail after promotion".into());
            }
            let before = skew_symmetrize_first_order(&cech, &w).unwrap();
            let after = skew_symmetrize_first_order(&cech, &out.actual).unwrap();
            if before != after || after.global() != Some(&pi_const) {
                problems.push("Poisson structure changed".into());
            }
            let deleted: Vec<_> = out.steps.iter().flat_map(|s| s.deleted.values().cloned()).collect();
            if deleted != vec![func("5")] {
                problems.push(format!("deleted invariant parts {deleted:?}"));
            }
        }
        Err(e) => problems.push(e.to_string()),
    }
    (problems.is_empty(), format!("Moyal plane on 3 opens, exact + constant a at h^2 {}", problems.join("; ")))
}

fn cartan_calculus() -> Verdict {
    let names: BTreeSet<&str> = [
        "cartan formula",
        "lie derivative commutator",
        "lie derivative and contraction",
        "d squared",
        "J intertwining",
    ]
    .into_iter()
    .collect();
    let mut problems = Vec::new();
    for (label, model) in [("tangent", plane()), ("nonabelian rank 2", nonabelian())] {
        let pi = standard_symplectic(&model);
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        let rep = defq_core::algebroid::cartan_check(
            &model,
            pi.as_ref(),
            200,
            &mut rng,
            defq_core::algebroid::CartanFault::None,
        );
        let seen: BTreeSet<&str> = rep.checks.iter().filter(|(_, n)| *n > 0).map(|(s, _)| s.as_str()).collect();
        if !rep.passed() || seen != names {
            problems.push(format!("{label}: {:?} {:?}", rep.checks, rep.failures.first().map(|w| &w.detail)));
        }
        // the suite wrapper agrees
        if !cartan_suite(&model, 20, SEED, Fault::None).passed() {
            problems.push(format!("{label}: suite"));
        }
    }
    (problems.is_empty(), format!("200 trials on the tangent and a nonabelian rank-2 algebroid {}", problems.join("; ")))
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn simplicial_identities() -> Verdict {
    let o = simplicial_suite(5);
    let families: BTreeSet<&str> = relation_instances(5).iter().map(|r| r.family).collect();
    // monotone maps [m] -> [n] correspond to multisets: C(m + n + 1, m + 1)
    let counts_ok = (0..=5).all(|m| (0..=5).all(|n| OrdinalMap::all(m, n).len() == binomial(m + n + 1, m + 1)));
    (
        o.passed() && counts_ok && families.len() == 5,
        format!("{} checks over m, n <= 5, {} relation families {:?}", o.checks, families.len(), o.failure),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 8] = [
        ("gauge-orbit closure", gauge_orbit_closure),
        ("Deligne 2-groupoid laws", deligne_laws),
        ("weak MC machinery", weak_mc_machinery),
        ("acyclic normalization", acyclic_normalization),
        ("quantization witness", quantization_witness),
        ("promotion", promotion),
        ("Cartan calculus", cartan_calculus),
        ("simplicial identities", simplicial_identities),
    ];
    let mut all = true;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let (ok, detail) = run();
        all &= ok;
        println!("criterion {} {:<26} {}  {}", k + 1, name, if ok { "PASS" } else { "FAIL" }, detail.trim_end());
    }
    if !all {
        std::process::exit(1);
    }
}
