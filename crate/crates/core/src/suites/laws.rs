use super::shrink::{minimize, shrink_series, Shrink};
use super::{suite_rng, SuiteModel, SuiteOutcome, Witness};
use crate::deligne::{hcompose, hinverse, two_cell_target, vcompose, vinverse, DelOneCell, DelTwoCell};
use crate::dgla::{bch, gauge_apply, is_mc, mc_residual, Dgla, GaugeElement, GradedElement};
use crate::error::Result;
use crate::formal::Additive;
use crate::notation::{format_element, ElementNotation};
use crate::simplicial::{ordinal_factor, recompose, relation_instances, OrdinalMap};

use rand::Rng;

fn koszul<T: Additive>(x: T, e: i32) -> T {
    if e.rem_euclid(2) == 1 {
        x.neg()
    } else {
        x
    }
}

fn plain<D: ElementNotation>(model: &D, x: &D::Elem) -> String {
    let terms = model.split_terms(x);
    if terms.is_empty() {
        return "0".into();
    }
    terms.into_iter().map(|(b, c)| format!("[{b}] {c}")).collect::<Vec<_>>().join("; ")
}

/// Every coface/codegeneracy relation on `[0] .. [max]`, and the unique
/// factorization of every monotone map between them.
pub fn simplicial_suite(max: usize) -> SuiteOutcome {
    let mut checks = 0;
    let mut failure = None;
    for (trial, r) in relation_instances(max).into_iter().enumerate() {
        checks += 1;
        if !r.holds() {
            failure = Some(Witness {
                law: r.family.to_string(),
                trial,
                inputs: vec![("i".into(), r.i.to_string()), ("j".into(), r.j.to_string())],
                detail: format!("{:?} vs {:?}", r.lhs, r.rhs),
            });
            break;
        }
    }
    let mut trial = checks;
    'maps: for m in 0..=max {
        for n in 0..=max {
            for f in OrdinalMap::all(m, n) {
                checks += 1;
                trial += 1;
                let (deltas, sigmas) = ordinal_factor(&f);
                let back = recompose(m, &deltas, &sigmas);
                let sorted = deltas.windows(2).all(|w| w[0] > w[1]) && sigmas.windows(2).all(|w| w[0] < w[1]);
                if failure.is_none() && (back.as_ref().ok() != Some(&f) || !sorted) {
                    failure = Some(Witness {
                        law: "factorization".into(),
                        trial,
                        inputs: vec![("f".into(), format!("{f:?}"))],
                        detail: format!("deltas {deltas:?}, sigmas {sigmas:?} give {back:?}"),
                    });
                    break 'maps;
                }
            }
        }
    }
    SuiteOutcome { suite: "simplicial".into(), model: format!("[0]..[{max}]"), trials: checks, checks, failure }
}

type ElemLaw<D> = (&'static str, fn(&D, &[<D as Dgla>::Elem]) -> Option<String>);

fn elem_laws<D: Dgla>() -> Vec<ElemLaw<D>> {
    vec![
        ("antisymmetry", |m, x| {
            let (a, b) = (m.degree_of(&x[0]), m.degree_of(&x[1]));
            let s = m.bracket(&x[0], &x[1]).add(&koszul(m.bracket(&x[1], &x[0]), a * b));
            (!s.is_zero()).then(|| "[x,y] + (-1)^{|x||y|} [y,x] is nonzero".into())
        }),
        ("jacobi", |m, x| {
            let (a, b, c) = (m.degree_of(&x[0]), m.degree_of(&x[1]), m.degree_of(&x[2]));
            let t1 = koszul(m.bracket(&x[0], &m.bracket(&x[1], &x[2])), a * c);
            let t2 = koszul(m.bracket(&x[1], &m.bracket(&x[2], &x[0])), a * b);
            let t3 = koszul(m.bracket(&x[2], &m.bracket(&x[0], &x[1])), b * c);
            (!t1.add(&t2).add(&t3).is_zero()).then(|| "graded Jacobi sum is nonzero".into())
        }),
        ("leibniz", |m, x| {
            let a = m.degree_of(&x[0]);
            let lhs = m.differential(&m.bracket(&x[0], &x[1]));
            let rhs = m
                .bracket(&m.differential(&x[0]), &x[1])
                .add(&koszul(m.bracket(&x[0], &m.differential(&x[1])), a));
            (!lhs.sub(&rhs).is_zero()).then(|| "d[x,y] - [dx,y] - (-1)^{|x|} [x,dy] is nonzero".into())
        }),
        ("d squared", |m, x| {
            let dd = m.differential(&m.differential(&x[0]));
            (!dd.is_zero()).then(|| "d d x is nonzero".into())
        }),
    ]
}

fn elem_witness<D: SuiteModel>(model: &D, law: ElemLaw<D>, trial: usize, xs: Vec<D::Elem>) -> Witness {
    let small = minimize(xs, |x| x.shrink(), |x| law.1(model, x).is_some());
    Witness {
        law: law.0.into(),
        trial,
        inputs: ["x", "y", "z"].iter().zip(&small).map(|(n, x)| (n.to_string(), plain(model, x))).collect(),
        detail: law.1(model, &small).unwrap_or_default(),
    }
}

/// Graded antisymmetry, Jacobi, the Leibniz rule and `d² = 0` on random
/// homogeneous elements.
pub fn jacobi_suite<D: SuiteModel>(model: &D, trials: usize, seed: u64) -> SuiteOutcome {
    let mut rng = suite_rng(seed, 2);
    let degrees = model.degrees();
    let mut checks = 0;
    let mut failure = None;
    'trials: for trial in 0..trials {
        let xs: Vec<D::Elem> = (0..3)
            .map(|_| {
                let d = degrees[rng.gen_range(0..degrees.len())];
                model.sample(&mut rng, d)
            })
            .collect();
        for law in elem_laws::<D>() {
            checks += 1;
            if law.1(model, &xs).is_some() {
                failure = Some(elem_witness(model, law, trial, xs));
                break 'trials;
            }
        }
    }
    SuiteOutcome { suite: "jacobi".into(), model: model.name(), trials, checks, failure }
}

type SeriesLaw<D> = (&'static str, fn(&D, &[GradedElement<D>]) -> Result<Option<String>>);

fn verdict<D: Dgla>(law: &SeriesLaw<D>, model: &D, xs: &[GradedElement<D>]) -> Option<String> {
    match law.1(model, xs) {
        Ok(v) => v,
        Err(e) => Some(format!("error: {e}")),
    }
}

fn series_witness<D: SuiteModel>(
    model: &D,
    law: &SeriesLaw<D>,
    names: &[&str],
    trial: usize,
    xs: Vec<GradedElement<D>>,
) -> Witness {
    // shrinking keeps the object Maurer–Cartan
    let fails = |x: &[GradedElement<D>]| is_mc(model, &x[0]).unwrap_or(false) && verdict(law, model, x).is_some();
    let small = minimize(xs, |x| shrink_series(model, x), fails);
    Witness {
        law: law.0.into(),
        trial,
        inputs: names.iter().zip(&small).map(|(n, x)| (n.to_string(), format_element(model, x))).collect(),
        detail: verdict(law, model, &small).unwrap_or_default(),
    }
}

fn gauge<D: Dgla>(x: &GradedElement<D>) -> Result<GaugeElement<D>> {
    GaugeElement::new(x.clone())
}

fn gauge_laws<D: Dgla>() -> Vec<SeriesLaw<D>> {
    vec![
        ("orbit closure", |m, x| {
            let moved = gauge_apply(m, &gauge(&x[1])?, &x[0])?;
            let r = mc_residual(m, &moved)?;
            Ok(r.valuation().map(|k| format!("residual of exp(q1).pi is nonzero at h^{k}")))
        }),
        ("group action", |m, x| {
            let (q1, q2) = (gauge(&x[1])?, gauge(&x[2])?);
            let once = gauge_apply(m, &bch(m, &q2, &q1)?, &x[0])?;
            let twice = gauge_apply(m, &q2, &gauge_apply(m, &q1, &x[0])?)?;
            Ok((once != twice).then(|| "exp(bch(q2,q1)).pi differs from exp(q2).(exp(q1).pi)".into()))
        }),
        ("inverse", |m, x| {
            let q = gauge(&x[1])?;
            let back = gauge_apply(m, &q.inverse(), &gauge_apply(m, &q, &x[0])?)?;
            Ok((back != x[0]).then(|| "exp(-q1).(exp(q1).pi) differs from pi".into()))
        }),
    ]
}

/// Gauge orbits of Maurer–Cartan elements stay Maurer–Cartan, and the
/// action is a group action.
pub fn gauge_orbit_suite<D: SuiteModel>(model: &D, trials: usize, order: usize, seed: u64) -> SuiteOutcome {
    let mut rng = suite_rng(seed, 3);
    let mut checks = 0;
    let mut failure = None;
    let names = ["pi", "q1", "q2"];
    'trials: for trial in 0..trials {
        let pi = model.sample_mc(&mut rng, order);
        checks += 1;
        if !is_mc(model, &pi).unwrap_or(false) {
            failure = Some(Witness {
                law: "sampled element is Maurer-Cartan".into(),
                trial,
                inputs: vec![("pi".into(), format_element(model, &pi))],
                detail: "sampler produced a non-MC element".into(),
            });
            break;
        }
        let mut sample0 = |r: &mut rand_chacha::ChaCha8Rng, d: i32| model.sample(r, d);
        let q1 = crate::random::series(&mut rng, model, 0, order, &mut sample0);
        let q2 = crate::random::series(&mut rng, model, 0, order, &mut sample0);
        let xs = vec![pi, q1, q2];
        for law in gauge_laws::<D>() {
            checks += 1;
            if verdict(&law, model, &xs).is_some() {
                failure = Some(series_witness(model, &law, &names, trial, xs));
                break 'trials;
            }
        }
    }
    SuiteOutcome { suite: "gauge-orbit".into(), model: model.name(), trials, checks, failure }
}

/// A random diagram: 1-cells `c: pi -> pi'`, `c'`, `c''` in a row, three
/// stacked 2-cells over `c`, two over `c'`, one over `c''`.
struct Diagram<D: Dgla> {
    c: DelOneCell<D>,
    alpha: [DelTwoCell<D>; 3],
    beta: [DelTwoCell<D>; 2],
    gamma: DelTwoCell<D>,
}

const DIAGRAM_INPUTS: [&str; 10] = ["pi", "q", "q'", "q''", "u1", "u2", "u3", "v1", "v2", "w"];

fn diagram<D: Dgla>(m: &D, x: &[GradedElement<D>]) -> Result<Diagram<D>> {
    let c = DelOneCell::new(m, &x[0], gauge(&x[1])?)?;
    let c1 = DelOneCell::new(m, c.target(), gauge(&x[2])?)?;
    let c2 = DelOneCell::new(m, c1.target(), gauge(&x[3])?)?;
    let stack = |base: &DelOneCell<D>, us: &[GradedElement<D>]| -> Result<Vec<DelTwoCell<D>>> {
        let mut out: Vec<DelTwoCell<D>> = Vec::new();
        for u in us {
            let over = match out.last() {
                Some(prev) => two_cell_target(m, prev)?,
                None => base.clone(),
            };
            out.push(DelTwoCell::new(over, u.clone())?);
        }
        Ok(out)
    };
    let a = stack(&c, &x[4..7])?;
    let b = stack(&c1, &x[7..9])?;
    let g = stack(&c2, &x[9..10])?;
    Ok(Diagram {
        c,
        alpha: [a[0].clone(), a[1].clone(), a[2].clone()],
        beta: [b[0].clone(), b[1].clone()],
        gamma: g[0].clone(),
    })
}

fn differ<T: PartialEq>(a: &T, b: &T, what: &str) -> Option<String> {
    (a != b).then(|| what.to_string())
}

fn deligne_laws<D: Dgla>() -> Vec<SeriesLaw<D>> {
    vec![
        ("vertical unit", |m, x| {
            let d = diagram(m, x)?;
            let a = &d.alpha[0];
            let left = vcompose(m, &DelTwoCell::identity(m, &two_cell_target(m, a)?), a)?;
            let right = vcompose(m, a, &DelTwoCell::identity(m, &d.c))?;
            Ok(differ(&left, a, "1 . a != a").or_else(|| differ(&right, a, "a . 1 != a")))
        }),
        ("vertical inverse", |m, x| {
            let d = diagram(m, x)?;
            let a = &d.alpha[0];
            let inv = vinverse(m, a)?;
            let left = vcompose(m, &inv, a)?;
            let right = vcompose(m, a, &inv)?;
            Ok(differ(&left, &DelTwoCell::identity(m, &d.c), "a^-1 . a != 1")
                .or_else(|| differ(&right, &DelTwoCell::identity(m, inv.source()), "a . a^-1 != 1")))
        }),
        ("vertical associativity", |m, x| {
            let d = diagram(m, x)?;
            let [a1, a2, a3] = &d.alpha;
            let left = vcompose(m, &vcompose(m, a3, a2)?, a1)?;
            let right = vcompose(m, a3, &vcompose(m, a2, a1)?)?;
            Ok(differ(&left, &right, "(a3 . a2) . a1 != a3 . (a2 . a1)"))
        }),
        ("horizontal unit", |m, x| {
            let d = diagram(m, x)?;
            let a = &d.alpha[0];
            let at_source = DelTwoCell::identity(m, &DelOneCell::identity(m, d.c.source()));
            let at_target = DelTwoCell::identity(m, &DelOneCell::identity(m, d.c.target()));
            Ok(differ(&hcompose(m, a, &at_source)?, a, "a * 1 != a")
                .or_else(|| differ(&hcompose(m, &at_target, a).ok()?, a, "1 * a != a")))
        }),
        ("horizontal inverse", |m, x| {
            let d = diagram(m, x)?;
            let a = &d.alpha[0];
            let inv = hinverse(m, a)?;
            let at_source = DelTwoCell::identity(m, &DelOneCell::identity(m, d.c.source()));
            let at_target = DelTwoCell::identity(m, &DelOneCell::identity(m, d.c.target()));
            Ok(differ(&hcompose(m, &inv, a)?, &at_source, "a^-1 * a != 1")
                .or_else(|| differ(&hcompose(m, a, &inv).ok()?, &at_target, "a * a^-1 != 1")))
        }),
        ("horizontal associativity", |m, x| {
            let d = diagram(m, x)?;
            let (a, b, g) = (&d.alpha[0], &d.beta[0], &d.gamma);
            let left = hcompose(m, &hcompose(m, g, b)?, a)?;
            let right = hcompose(m, g, &hcompose(m, b, a)?)?;
            Ok(differ(&left, &right, "(g * b) * a != g * (b * a)"))
        }),
        ("interchange", |m, x| {
            let d = diagram(m, x)?;
            let [a1, a2, _] = &d.alpha;
            let [b1, b2] = &d.beta;
            let left = hcompose(m, &vcompose(m, b2, b1)?, &vcompose(m, a2, a1)?)?;
            let right = vcompose(m, &hcompose(m, b2, a2)?, &hcompose(m, b1, a1)?)?;
            Ok(differ(&left, &right, "(b2 . b1) * (a2 . a1) != (b2 * a2) . (b1 * a1)"))
        }),
    ]
}

/// Unit, inverse and associativity for both compositions of the Deligne
/// 2-groupoid, and the interchange law.
pub fn deligne_suite<D: SuiteModel>(model: &D, trials: usize, order: usize, seed: u64) -> SuiteOutcome {
    let mut rng = suite_rng(seed, 4);
    let mut checks = 0;
    let mut failure = None;
    'trials: for trial in 0..trials {
        let pi = model.sample_mc(&mut rng, order);
        let mut sample = |r: &mut rand_chacha::ChaCha8Rng, d: i32| model.sample(r, d);
        let mut xs = vec![pi];
        for k in 1..DIAGRAM_INPUTS.len() {
            let degree = if k <= 3 { 0 } else { -1 };
            xs.push(crate::random::series(&mut rng, model, degree, order, &mut sample));
        }
        for law in deligne_laws::<D>() {
            checks += 1;
            if verdict(&law, model, &xs).is_some() {
                failure = Some(series_witness(model, &law, &DIAGRAM_INPUTS, trial, xs));
                break 'trials;
            }
        }
    }
    SuiteOutcome { suite: "2-groupoid".into(), model: model.name(), trials, checks, failure }
}
