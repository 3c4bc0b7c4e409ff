//! Seeded randomized checks of the algebraic laws, with greedy shrinking of
//! the first failing input in each suite.

mod laws;
mod shrink;

use std::fmt;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use laws::{deligne_suite, gauge_orbit_suite, jacobi_suite, simplicial_suite};
pub use shrink::{minimize, shrink_series, Shrink};

use crate::algebroid::{cartan_check, moyal_generate, AlgebroidModel, CartanFault, PolyDiffModel, PolyVector, PolyVectorModel};
use crate::dgla::{AbelianModel, CochainVector, Dgla, GradedElement};
use crate::formal::{rat, Additive, CoeffRing, Poly, RatFunc};
use crate::notation::ElementNotation;
use crate::random;

/// Deliberate errors for negative controls.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Fault {
    #[default]
    None,
    /// Negates `[x, y]` whenever `|x| > |y|`, and flips the sign of the
    /// Lie derivative in the Cartan suite.
    Sign,
}

/// A model with [`Fault::Sign`] built into its bracket.
pub struct Faulty<D>(pub D);

impl<D: Dgla> Dgla for Faulty<D> {
    type Elem = D::Elem;

    fn name(&self) -> String {
        format!("{} (sign fault)", self.0.name())
    }
    fn degree_of(&self, x: &Self::Elem) -> i32 {
        self.0.degree_of(x)
    }
    fn zero(&self, degree: i32) -> Self::Elem {
        self.0.zero(degree)
    }
    fn differential(&self, x: &Self::Elem) -> Self::Elem {
        self.0.differential(x)
    }
    fn bracket(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        let b = self.0.bracket(x, y);
        if self.0.degree_of(x) > self.0.degree_of(y) {
            b.neg()
        } else {
            b
        }
    }
    fn is_quantum_type(&self) -> bool {
        self.0.is_quantum_type()
    }
    fn denominators(&self, x: &Self::Elem) -> Vec<Poly> {
        self.0.denominators(x)
    }
}

impl<D: ElementNotation> ElementNotation for Faulty<D> {
    fn coefficient_vars(&self) -> Vec<String> {
        self.0.coefficient_vars()
    }
    fn basis_term(&self, basis: &str, coeff: &RatFunc) -> std::result::Result<Self::Elem, String> {
        self.0.basis_term(basis, coeff)
    }
    fn split_terms(&self, x: &Self::Elem) -> Vec<(String, String)> {
        self.0.split_terms(x)
    }
}

/// What the law suites need from a model: samplers and a source of
/// Maurer–Cartan elements.
pub trait SuiteModel: ElementNotation + Dgla<Elem: Shrink> {
    fn sample(&self, rng: &mut dyn RngCore, degree: i32) -> Self::Elem;
    /// A Maurer–Cartan element in `h g^1[[h]]` truncated at `h^order`.
    fn sample_mc(&self, rng: &mut dyn RngCore, order: usize) -> GradedElement<Self>
    where
        Self: Sized;
    /// Degrees sampled by the Jacobi suite.
    fn degrees(&self) -> Vec<i32>;
}

impl<D: SuiteModel> SuiteModel for Faulty<D> {
    fn sample(&self, rng: &mut dyn RngCore, degree: i32) -> Self::Elem {
        self.0.sample(rng, degree)
    }
    fn sample_mc(&self, rng: &mut dyn RngCore, order: usize) -> GradedElement<Self> {
        let pi = self.0.sample_mc(rng, order);
        let coeffs = (0..=order).map(|k| pi.coeff(k).clone()).collect();
        GradedElement::from_coeffs(self, 1, coeffs, order).expect("degree 1")
    }
    fn degrees(&self) -> Vec<i32> {
        self.0.degrees()
    }
}

impl SuiteModel for AbelianModel {
    fn sample(&self, rng: &mut dyn RngCore, degree: i32) -> CochainVector {
        let entries = (0..self.dim(degree)).map(|_| random::rational(rng)).collect();
        CochainVector { degree, entries }
    }
    fn sample_mc(&self, rng: &mut dyn RngCore, order: usize) -> GradedElement<Self> {
        // coboundaries are cocycles, and the bracket vanishes
        let coeffs = std::iter::once(self.zero(1))
            .chain((1..=order).map(|_| self.differential(&self.sample(rng, 0))))
            .collect();
        GradedElement::from_coeffs(self, 1, coeffs, order).expect("degree 1")
    }
    fn degrees(&self) -> Vec<i32> {
        (-1..=2).filter(|&k| self.dim(k) > 0).collect()
    }
}

fn scaled_series<D: Dgla>(model: &D, rng: &mut dyn RngCore, x: &D::Elem, order: usize) -> GradedElement<D> {
    let coeffs = std::iter::once(model.zero(1))
        .chain((1..=order).map(|_| if rng.gen_bool(0.8) { x.scale(&random::rational(rng)) } else { model.zero(1) }))
        .collect();
    GradedElement::from_coeffs(model, 1, coeffs, order).expect("degree 1")
}

impl<C: CoeffRing> SuiteModel for PolyVectorModel<C> {
    fn sample(&self, rng: &mut dyn RngCore, degree: i32) -> PolyVector<C> {
        random::polyvector(rng, &self.algebroid, degree, 2, 2)
    }
    fn sample_mc(&self, rng: &mut dyn RngCore, order: usize) -> GradedElement<Self> {
        // series in a single Poisson bivector
        let a = &self.algebroid;
        let poisson = |p: &PolyVector<C>| a.schouten(p, p).is_zero();
        let mut pi = (0..8).map(|_| self.sample(rng, 1)).find(|p| poisson(p));
        if pi.is_none() && a.rank() >= 2 {
            let e = PolyVector::basis(&[0, 1], a.zero_coeff().one_like());
            pi = poisson(&e).then_some(e);
        }
        let pi = pi.unwrap_or_else(|| PolyVector::zero(1));
        scaled_series(self, rng, &pi, order)
    }
    fn degrees(&self) -> Vec<i32> {
        (-1..self.algebroid.rank() as i32).collect()
    }
}

impl<C: CoeffRing> SuiteModel for PolyDiffModel<C> {
    fn sample(&self, rng: &mut dyn RngCore, degree: i32) -> crate::algebroid::PolyDiff<C> {
        // nested brackets of higher operators grow fast; keep them small
        if degree >= 1 {
            random::polydiff(rng, self, degree, 2, 1, 1, true)
        } else {
            random::polydiff(rng, self, degree, 2, 2, 2, true)
        }
    }
    fn sample_mc(&self, rng: &mut dyn RngCore, order: usize) -> GradedElement<Self> {
        let n = self.nvars();
        let mut pi = PolyVector::zero(1);
        for a in 0..n {
            for b in a + 1..n {
                if rng.gen_bool(0.7) {
                    let c = self.zero_coeff().constant(&random::rational(rng));
                    pi = pi.add(&PolyVector::basis(&[a, b], c));
                }
            }
        }
        moyal_generate(self, &pi, order).expect("constant bivector")
    }
    fn degrees(&self) -> Vec<i32> {
        vec![-1, 0, 1]
    }
}

/// The smallest failing input found for a law.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub law: String,
    pub trial: usize,
    /// Named inputs, in element notation.
    pub inputs: Vec<(String, String)>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteOutcome {
    pub suite: String,
    pub model: String,
    pub trials: usize,
    pub checks: usize,
    pub failure: Option<Witness>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SuiteReport {
    pub seed: u64,
    pub order: usize,
    pub outcomes: Vec<SuiteOutcome>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(SuiteOutcome::passed)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "seed {} order {}", self.seed, self.order)?;
        for o in &self.outcomes {
            let status = if o.passed() { "ok" } else { "FAILED" };
            writeln!(f, "{:<12} {:<36} {:>5} trials {:>6} checks  {status}", o.suite, o.model, o.trials, o.checks)?;
            if let Some(w) = &o.failure {
                writeln!(f, "  law {} failed at trial {}", w.law, w.trial)?;
                for (name, value) in &w.inputs {
                    writeln!(f, "    {name} = {value}")?;
                }
                writeln!(f, "    {}", w.detail)?;
            }
        }
        Ok(())
    }
}

/// Seed of the generator for suite number `index`, so suites do not share
/// random streams.
pub fn suite_rng(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(index))
}

/// A nondegenerate constant bivector `e_1∧e_2 + e_3∧e_4 + ..`, when the rank
/// is even and it is Poisson and invertible.
pub fn standard_symplectic<C: CoeffRing>(model: &AlgebroidModel<C>) -> Option<PolyVector<C>> {
    let r = model.rank();
    if r == 0 || r % 2 == 1 {
        return None;
    }
    let one = model.zero_coeff().one_like();
    let pi = (0..r / 2).fold(PolyVector::zero(1), |acc, i| acc.add(&PolyVector::basis(&[2 * i, 2 * i + 1], one.clone())));
    (model.schouten(&pi, &pi).is_zero() && model.sharp_and_j(&pi).is_ok()).then_some(pi)
}

/// Cartan calculus on an algebroid, including `J`-intertwining when
/// [`standard_symplectic`] applies. Not shrunk: the identities are checked on
/// forms and polyvectors drawn inside the check.
pub fn cartan_suite<C: CoeffRing>(model: &AlgebroidModel<C>, trials: usize, seed: u64, fault: Fault) -> SuiteOutcome {
    let mut rng = suite_rng(seed, 1);
    let pi = standard_symplectic(model);
    let fault = match fault {
        Fault::None => CartanFault::None,
        Fault::Sign => CartanFault::FlipLieDerivative,
    };
    let rep = cartan_check(model, pi.as_ref(), trials, &mut rng, fault);
    SuiteOutcome {
        suite: "cartan".into(),
        model: format!("algebroid rank {} over {}", model.rank(), model.vars().join(",")),
        trials,
        checks: rep.checks.iter().map(|(_, n)| n).sum(),
        failure: rep.failures.first().map(|w| Witness {
            law: w.identity.clone(),
            trial: w.trial,
            inputs: Vec::new(),
            detail: w.detail.clone(),
        }),
    }
}

/// The model-dependent suites for one model.
pub fn dgla_suites<D: SuiteModel>(model: &D, trials: usize, order: usize, seed: u64) -> Vec<SuiteOutcome> {
    vec![
        jacobi_suite(model, trials, seed),
        gauge_orbit_suite(model, trials, order, seed),
        deligne_suite(model, trials, order, seed),
    ]
}

type Job<'a> = Box<dyn FnOnce() -> SuiteOutcome + Send + 'a>;

fn dgla_jobs<'a, D: SuiteModel + Sync>(model: &'a D, trials: usize, order: usize, seed: u64) -> Vec<Job<'a>> {
    vec![
        Box::new(move || jacobi_suite(model, trials, seed)),
        Box::new(move || gauge_orbit_suite(model, trials, order, seed)),
        Box::new(move || deligne_suite(model, trials, order, seed)),
    ]
}

/// Every suite on the algebroid's polyvector model, its polydifferential
/// model when the algebroid is the tangent one, and the Koszul complex.
/// Suites run on separate threads; outcomes keep a fixed order.
pub fn run_all(
    algebroid: &AlgebroidModel<Poly>,
    trials: usize,
    order: usize,
    seed: u64,
    fault: Fault,
) -> SuiteReport {
    let abelian = AbelianModel::koszul(vec![rat(1, 1), rat(2, 1), rat(-1, 1)]);
    let pv = PolyVectorModel::new(algebroid.clone());
    let pd = PolyDiffModel::for_algebroid(algebroid).ok();
    let faulty = (Faulty(abelian.clone()), Faulty(pv.clone()), pd.clone().map(Faulty));
    let mut jobs: Vec<Job<'_>> = vec![
        Box::new(|| simplicial_suite(5)),
        Box::new(move || cartan_suite(algebroid, trials, seed, fault)),
    ];
    match fault {
        Fault::None => {
            jobs.extend(dgla_jobs(&abelian, trials, order, seed));
            jobs.extend(dgla_jobs(&pv, trials, order, seed));
            if let Some(pd) = &pd {
                jobs.extend(dgla_jobs(pd, trials, order, seed));
            }
        }
        Fault::Sign => {
            jobs.extend(dgla_jobs(&faulty.0, trials, order, seed));
            jobs.extend(dgla_jobs(&faulty.1, trials, order, seed));
            if let Some(pd) = &faulty.2 {
                jobs.extend(dgla_jobs(pd, trials, order, seed));
            }
        }
    }
    let outcomes = std::thread::scope(|s| {
        let handles: Vec<_> = jobs.into_iter().map(|job| s.spawn(job)).collect();
        handles.into_iter().map(|h| h.join().expect("suite thread panicked")).collect()
    });
    SuiteReport { seed, order, outcomes }
}
