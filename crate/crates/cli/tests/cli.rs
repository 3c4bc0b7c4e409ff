use std::path::PathBuf;
use std::process::Command;

use defq_cli::{run_args, Output};
use defq_core::algebroid::PolyDiffModel;
use defq_core::dgla::mc_residual;
use defq_core::formal::{parse_poly, Additive, Poly, Ring};
use defq_core::notation::parse_element;
use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    run_args(std::iter::once("defq").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = run(&full);
    (out.code, serde_json::from_str(&out.stdout).expect("json report"))
}

#[test]
fn moyal_fixture_is_mc_through_h3() {
    let out = run(&["check-mc", &fixture("moyal.elem")]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.ends_with("residual 0 through h^3\n"), "{}", out.stdout);
}

#[test]
fn zero_and_koszul_elements_pass() {
    assert_eq!(run(&["check-mc", &fixture("zero.elem")]).code, 0);
    let out = run(&["check-mc", &fixture("koszul.elem")]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert!(out.stdout.contains("residual 0 through h^2"));
}

#[test]
fn symmetric_pi_fails_at_h2() {
    let (code, v) = json(&["check-mc", &fixture("symmetric.elem")]);
    assert_eq!(code, 1);
    assert_eq!(v["first_nonzero"], 2);
    assert_eq!(v["mc"], false);
    for k in [0, 1, 3] {
        assert_eq!(v["residual"][k]["value"], "0");
    }
    assert_ne!(v["residual"][2]["value"], "0");
}

#[test]
fn symmetric_residual_matches_direct_expansion() {
    // B(f, g) = f_x g_y + f_y g_x; the h^2 residual is the associator
    // B(B(f,g),k) - B(f,B(g,k)) of the product m + hB.
    let vars = ["x", "y"];
    let p = |s: &str| parse_poly(s, &vars).unwrap();
    let b = |f: &Poly, g: &Poly| f.derivative(0).mul(&g.derivative(1)).add(&f.derivative(1).mul(&g.derivative(0)));
    let pd = PolyDiffModel::new(p("0"));
    let pi = parse_element(&pd, "[x | y] h; [y | x] h", 1, 3).unwrap();
    let r = mc_residual(&pd, &pi).unwrap();
    for (f, g, k) in [("x^2", "y", "y"), ("x*y + 1", "x^2*y", "y^3 - x"), ("x^3", "x*y^2", "x + y")] {
        let (f, g, k) = (p(f), p(g), p(k));
        let expected = b(&b(&f, &g), &k).sub(&b(&f, &b(&g, &k)));
        assert_eq!(pd.evaluate(r.coeff(2), &[f, g, k]).unwrap(), expected);
    }
}

#[test]
fn input_errors_have_their_exit_codes() {
    let dir = std::env::temp_dir().join(format!("defq-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let write = |name: &str, text: &str| {
        let path = dir.join(name);
        std::fs::write(&path, text).unwrap();
        path.display().to_string()
    };
    let degree = write("degree.elem", "model polyvector x y\npi : [x] h\n");
    assert_eq!(run(&["check-mc", &degree]).code, 3);
    let parse = write("parse.elem", "model polyvector x y\n\npi : [x, y] h +\n");
    let (code, v) = json(&["check-mc", &parse]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "parse");
    assert_eq!(v["error"]["line"], 3);
    let model = write("model.elem", "model tensor x\npi : 0\n");
    assert_eq!(run(&["check-mc", &model]).code, 2);
    assert_eq!(run(&["check-mc", "/nonexistent/file.elem"]).code, 2);
    assert_eq!(run(&["normalize", &fixture("two_open.wmc"), "--oracle", "magic"]).code, 2);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn trivial_cover_normalizes_to_itself() {
    let (code, v) = json(&["normalize", &fixture("one_open.wmc")]);
    assert_eq!(code, 0);
    assert_eq!(v["chain"], Value::Array(Vec::new()));
    assert_eq!(v["normal_form"], "pi 0 : [x,y] h + (x*y)*h^2\n");
    assert_eq!(v["composite"], "gamma 0 : 0\n");
}

#[test]
fn two_open_fixture_reaches_zero() {
    let out = run(&["normalize", &fixture("two_open.wmc"), "--oracle", "cone"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("normal form\npi 0 : 0\npi 1 : 0\ng 0 1 : 0\n"), "{}", out.stdout);
    assert!(out.stdout.contains("gamma 1 : [x] (-1)*h\n"));
    assert!(out.stdout.ends_with("normalized\n"));
}

#[test]
fn three_open_fixture_rechecks() {
    for oracle in ["cone", "linear"] {
        let (code, v) = json(&["normalize", &fixture("three_open.wmc"), "--oracle", oracle]);
        assert_eq!(code, 0, "{v}");
        assert_eq!(v["recheck"]["chain_reproduces"], true);
        assert_eq!(v["recheck"]["normal"], true);
        assert!(!v["chain"].as_array().unwrap().is_empty());
    }
}

#[test]
fn cover_with_denominators_uses_fractions() {
    let out = run(&["normalize", &fixture("punctured.wmc")]);
    assert_eq!(out.code, 0, "{}{}", out.stdout, out.stderr);
    assert!(out.stdout.contains("gamma 1 : [x] (-1/x)*h"), "{}", out.stdout);
    // 1/x is not invertible on the first open
    let out = run(&["normalize", &fixture("punctured.wmc"), "--cover", &fixture("two_open.cover")]);
    assert_ne!(out.code, 0);
}

#[test]
fn circle_reports_the_cocycle() {
    let out = run(&["normalize", &fixture("circle.wmc"), "--oracle", "linear"]);
    assert_eq!(out.code, 4);
    assert!(out.stdout.contains("oracle failure\nlinear oracle:"), "{}", out.stdout);
    assert!(out.stdout.contains("cocycle at level 1\n  [0, 1] : (1)*e1\n"), "{}", out.stdout);
    let (code, v) = json(&["normalize", &fixture("circle.wmc"), "--oracle", "trivial"]);
    assert_eq!(code, 4);
    assert_eq!(v["status"], "oracle failure");
    assert_eq!(v["oracle_failure"]["hbar_order"], 1);
}

#[test]
fn suite_passes_and_fault_is_caught() {
    let ok = run(&["verify-suite", "--trials", "10", "--order", "2"]);
    assert_eq!(ok.code, 0, "{}", ok.stdout);
    assert!(ok.stdout.ends_with("all suites passed\n"));
    let (code, v) = json(&["verify-suite", "--trials", "10", "--order", "2", "--inject-fault"]);
    assert_eq!(code, 1);
    assert_eq!(v["fault"], "sign");
    let failed: Vec<&Value> = v["outcomes"].as_array().unwrap().iter().filter(|o| o["passed"] == false).collect();
    assert!(!failed.is_empty());
    assert!(failed.iter().all(|o| !o["witness"]["law"].as_str().unwrap().is_empty()));
}

#[test]
fn suite_on_a_model_file() {
    let out = run(&["verify-suite", &fixture("nonabelian.model"), "--trials", "8", "--order", "2"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert!(out.stdout.contains("algebroid rank 2 over x,y"));
}

#[test]
fn reports_are_byte_identical_for_a_seed() {
    let args = ["--format", "json", "verify-suite", "--trials", "6", "--order", "2", "--seed", "17", "--inject-fault"];
    assert_eq!(run(&args), run(&args));
    let other = ["--format", "json", "verify-suite", "--trials", "6", "--order", "2", "--seed", "18", "--inject-fault"];
    assert_ne!(run(&args).stdout, run(&other).stdout);
    let n = ["normalize", &fixture("three_open.wmc")];
    assert_eq!(run(&n), run(&n));
}

#[test]
fn moyal_output_is_an_element_file() {
    let out = run(&["moyal", "--vars", "x", "y", "--pi", "[x, y] 1", "--order", "2"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout, "model polydiff x y\norder 2\npi : [x^2|y^2] (1/2)*h^2; [x|y] h\n");
    assert_eq!(run(&["moyal", "--vars", "x", "y", "--pi", "[x, y] x"]).code, 2);
}

#[test]
fn json_reports_carry_the_common_fields() {
    for args in [
        vec!["check-mc", "FIX:moyal.elem"],
        vec!["normalize", "FIX:two_open.wmc"],
        vec!["verify-suite", "--trials", "2", "--order", "1"],
        vec!["moyal", "--vars", "x", "y", "--pi", "[x, y] 1"],
    ] {
        let args: Vec<String> =
            args.iter().map(|a| a.strip_prefix("FIX:").map(fixture).unwrap_or_else(|| a.to_string())).collect();
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let (code, v) = json(&refs);
        assert_eq!(v["command"], args[0]);
        assert_eq!(v["exit_code"], code);
        assert_eq!(v["status"], "ok");
    }
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_defq");
    let code = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code();
    assert_eq!(code(&["check-mc", &fixture("moyal.elem")]), Some(0));
    assert_eq!(code(&["check-mc", &fixture("symmetric.elem")]), Some(1));
    assert_eq!(code(&["normalize", &fixture("circle.wmc")]), Some(4));
    assert_eq!(code(&["frobnicate"]), Some(2));
    assert_eq!(code(&["--help"]), Some(0));
}

#[test]
fn default_suite_passes_at_200_trials() {
    let bin = env!("CARGO_BIN_EXE_defq");
    let out = Command::new(bin).args(["verify-suite", "--trials", "200"]).output().unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(out.status.code(), Some(0), "{stdout}");
    assert!(stdout.starts_with("seed 0 order 3\n"));
}
