use rand::Rng;

use super::forms::forms_equal;
use super::{AlgebroidModel, LForm, PolyVector};
use crate::formal::{Additive, CoeffRing};
use crate::random;

/// Deliberate sign error for negative controls.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CartanFault {
    #[default]
    None,
    /// Uses `d ι_u - (-1)^k ι_u d` for the Lie derivative.
    FlipLieDerivative,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanWitness {
    pub identity: String,
    pub trial: usize,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CartanReport {
    pub trials: usize,
    /// Number of checks per identity, in a fixed order.
    pub checks: Vec<(String, usize)>,
    pub failures: Vec<CartanWitness>,
}

impl CartanReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn count(&mut self, name: &str) {
        match self.checks.iter_mut().find(|(n, _)| n == name) {
            Some((_, c)) => *c += 1,
            None => self.checks.push((name.to_string(), 1)),
        }
    }
}

fn signed<C: CoeffRing>(f: LForm<C>, odd: bool) -> LForm<C> {
    if odd {
        f.neg()
    } else {
        f
    }
}

/// `a + b`, where a zero operand may carry any degree label.
fn plus<C: CoeffRing>(a: &LForm<C>, b: &LForm<C>) -> LForm<C> {
    if a.is_zero() {
        b.clone()
    } else if b.is_zero() {
        a.clone()
    } else {
        a.add(b)
    }
}

struct Calculus<'a, C> {
    model: &'a AlgebroidModel<C>,
    fault: CartanFault,
}

impl<C: CoeffRing> Calculus<'_, C> {
    fn d(&self, eta: &LForm<C>) -> LForm<C> {
        self.model.lde_rham(eta)
    }

    fn iota(&self, u: &PolyVector<C>, eta: &LForm<C>) -> LForm<C> {
        self.model.contract(u, eta)
    }

    fn lie(&self, u: &PolyVector<C>, eta: &LForm<C>) -> LForm<C> {
        let odd = u.degree().rem_euclid(2) == 1;
        let odd = match self.fault {
            CartanFault::None => odd,
            CartanFault::FlipLieDerivative => !odd,
        };
        plus(&self.d(&self.iota(u, eta)), &signed(self.iota(u, &self.d(eta)), odd))
    }
}

/// Randomized check of the Cartan calculus on `model`:
///
/// ```text
/// L_u = d ι_u + (-1)^k ι_u d           (against the classical formula for k <= 0)
/// L_u L_v - (-1)^{kl} L_v L_u = L_{[u,v]}
/// L_u ι_v - (-1)^{k(l+1)} ι_v L_u = (-1)^k ι_{[u,v]}
/// d d = 0
/// ```
///
/// When `pi` is given it must be symplectic, and `J([u, π]) = ± d J(u)` is
/// checked as well.
pub fn cartan_check<C: CoeffRing, R: Rng + ?Sized>(
    model: &AlgebroidModel<C>,
    pi: Option<&PolyVector<C>>,
    trials: usize,
    rng: &mut R,
    fault: CartanFault,
) -> CartanReport {
    let calc = Calculus { model, fault };
    let symplectic = pi.and_then(|p| model.sharp_and_j(p).ok().map(|s| (p, s)));
    let mut report = CartanReport { trials, ..Default::default() };
    let r = model.rank();
    let max_k = (r as i32 - 1).min(1);
    for trial in 0..trials {
        let k = rng.gen_range(-1..=max_k);
        let l = rng.gen_range(-1..=max_k);
        let p = rng.gen_range(0..=r);
        let u = random::polyvector(rng, model, k, 2, 2);
        let v = random::polyvector(rng, model, l, 2, 2);
        let eta = random::form(rng, model, p, 2, 2);
        let fail = |name: &str, detail: String| {
            report_failure(name, trial, detail)
        };
        let mut failures = Vec::new();

        // first identity against an independent formula
        if k <= 0 {
            let lhs = calc.lie(&u, &eta);
            let rhs = if k == 0 {
                model.lie_derivative_vector(&u, &eta)
            } else {
                // L_f η = df ∧ η
                let f = u.terms().values().next().cloned().unwrap_or_else(|| model.zero_coeff().clone());
                calc.d(&LForm::function(f)).wedge(&eta)
            };
            if !forms_equal(&lhs, &rhs) {
                failures.push(fail("cartan formula", format!("u = {u}, eta = {eta}: {lhs} vs {rhs}")));
            }
        }
        report.count("cartan formula");

        let uv = model.schouten(&u, &v);
        // [L_u, L_v] = L_[u,v]
        {
            let a = calc.lie(&u, &calc.lie(&v, &eta));
            let b = calc.lie(&v, &calc.lie(&u, &eta));
            let lhs = plus(&a, &signed(b, (k * l).rem_euclid(2) == 0));
            let rhs = calc.lie(&uv, &eta);
            if !forms_equal(&lhs, &rhs) {
                failures.push(fail("lie derivative commutator", format!("u = {u}, v = {v}, eta = {eta}")));
            }
            report.count("lie derivative commutator");
        }
        // [L_u, ι_v] = (-1)^k ι_[u,v]
        {
            let a = calc.lie(&u, &calc.iota(&v, &eta));
            let b = calc.iota(&v, &calc.lie(&u, &eta));
            let lhs = plus(&a, &signed(b, (k * (l + 1)).rem_euclid(2) == 0));
            let rhs = signed(calc.iota(&uv, &eta), k.rem_euclid(2) == 1);
            if !forms_equal(&lhs, &rhs) {
                failures.push(fail("lie derivative and contraction", format!("u = {u}, v = {v}, eta = {eta}")));
            }
            report.count("lie derivative and contraction");
        }
        // d^2 = 0
        {
            let dd = calc.d(&calc.d(&eta));
            if !dd.is_zero() {
                failures.push(fail("d squared", format!("eta = {eta}: {dd}")));
            }
            report.count("d squared");
        }
        if let Some((pi, s)) = &symplectic {
            if !s.intertwines(model, pi, &u) {
                failures.push(fail("J intertwining", format!("u = {u}")));
            }
            report.count("J intertwining");
        }
        report.failures.extend(failures);
    }
    report
}

fn report_failure(name: &str, trial: usize, detail: String) -> CartanWitness {
    CartanWitness { identity: name.to_string(), trial, detail }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebroid::parse_model_file;
    use crate::formal::{parse_poly, Poly};
    use rand::SeedableRng;

    #[test]
    fn flat_plane_passes() {
        let m = AlgebroidModel::tangent(parse_poly("0", &["x", "y"]).unwrap());
        let pi = PolyVector::basis(&[0, 1], parse_poly("1", &["x", "y"]).unwrap());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let rep = cartan_check(&m, Some(&pi), 30, &mut rng, CartanFault::None);
        assert!(rep.passed(), "{:?}", rep.failures.first());
    }

    #[test]
    fn nonabelian_passes_and_fault_is_caught() {
        let m: AlgebroidModel<Poly> =
            parse_model_file("vars x y\nrank 2\nanchor 1 y 1\nanchor 2 y x*y\nbracket 1 2 1 x\n").unwrap();
        let pi = PolyVector::basis(&[0, 1], parse_poly("1", &["x", "y"]).unwrap());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let rep = cartan_check(&m, Some(&pi), 30, &mut rng, CartanFault::None);
        assert!(rep.passed(), "{:?}", rep.failures.first());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let bad = cartan_check(&m, Some(&pi), 30, &mut rng, CartanFault::FlipLieDerivative);
        assert!(!bad.passed());
    }
}
