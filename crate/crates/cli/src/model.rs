//! The `model` header line shared by element and triple files.
//!
//! ```text
//! model polyvector x y               # tangent algebroid on x, y
//! model polyvector from lie.model    # algebroid from a model file
//! model polydiff x y                 # polydifferential operators on k[x, y]
//! model abelian koszul 1 2 -1        # Koszul complex of a vector in Q^3
//! ```
//!
//! Paths are relative to the file containing the header.

use std::path::{Path, PathBuf};

use defq_core::algebroid::{parse_model_file, AlgebroidModel, PolyDiffModel, PolyVectorModel};
use defq_core::dgla::AbelianModel;
use defq_core::formal::{parse_poly, Poly, Rational};
use defq_core::notation::ElementNotation;
use defq_core::simplicial::{CoeffCoordinates, LinearDgla};

use crate::CliError;

#[derive(Clone, Debug, PartialEq)]
pub enum Algebroid {
    Tangent(Vec<String>),
    File { shown: String, text: String },
}

#[derive(Clone, Debug, PartialEq)]
pub enum ModelSpec {
    PolyVector(Algebroid),
    PolyDiff(Algebroid),
    Abelian(Vec<Rational>),
}

/// Work done against whichever model a file names.
pub trait ModelJob {
    type Output;
    fn run<D: LinearDgla + ElementNotation>(self, model: &D) -> Result<Self::Output, CliError>;
}

fn rational(word: &str, line: usize) -> Result<Rational, CliError> {
    let p = parse_poly(word, &[] as &[&str]).map_err(|_| CliError::parse(line, format!("bad rational '{word}'")))?;
    Ok(p.constant_term())
}

impl ModelSpec {
    /// Parses the words after `model`.
    pub fn parse(rest: &str, base: &Path, line: usize) -> Result<Self, CliError> {
        let words: Vec<&str> = rest.split_whitespace().collect();
        let algebroid = |words: &[&str]| -> Result<Algebroid, CliError> {
            match words {
                ["from", path] => {
                    let full: PathBuf = base.join(path);
                    let text = std::fs::read_to_string(&full).map_err(|e| CliError::io(&full, e))?;
                    Ok(Algebroid::File { shown: path.to_string(), text })
                }
                [] => Err(CliError::parse(line, "a model needs variables or 'from <file>'")),
                vars => Ok(Algebroid::Tangent(vars.iter().map(|s| s.to_string()).collect())),
            }
        };
        match words.as_slice() {
            ["polyvector", rest @ ..] => Ok(ModelSpec::PolyVector(algebroid(rest)?)),
            ["polydiff", rest @ ..] => Ok(ModelSpec::PolyDiff(algebroid(rest)?)),
            ["abelian", "koszul", a, b, c] => Ok(ModelSpec::Abelian(vec![
                rational(a, line)?,
                rational(b, line)?,
                rational(c, line)?,
            ])),
            ["abelian", ..] => Err(CliError::parse(line, "expected 'abelian koszul <a> <b> <c>'")),
            _ => Err(CliError::parse(line, format!("unknown model '{rest}'"))),
        }
    }

    /// The header line, normalized.
    pub fn describe(&self) -> String {
        let alg = |a: &Algebroid| match a {
            Algebroid::Tangent(v) => v.join(" "),
            Algebroid::File { shown, .. } => format!("from {shown}"),
        };
        match self {
            ModelSpec::PolyVector(a) => format!("polyvector {}", alg(a)),
            ModelSpec::PolyDiff(a) => format!("polydiff {}", alg(a)),
            ModelSpec::Abelian(v) => {
                format!("abelian koszul {}", v.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(" "))
            }
        }
    }

    fn algebroid<C: CoeffCoordinates>(a: &Algebroid) -> Result<AlgebroidModel<C>, CliError> {
        Ok(match a {
            Algebroid::Tangent(vars) => AlgebroidModel::tangent(C::from_poly(Poly::zero(vars))),
            Algebroid::File { text, .. } => parse_model_file(text)?,
        })
    }

    /// Variables of the coefficient ring.
    pub fn vars(&self) -> Result<Vec<String>, CliError> {
        Ok(match self {
            ModelSpec::PolyVector(a) | ModelSpec::PolyDiff(a) => Self::algebroid::<Poly>(a)?.vars().to_vec(),
            ModelSpec::Abelian(_) => Vec::new(),
        })
    }

    /// Builds the model over coefficients `C` and runs `job` on it.
    pub fn dispatch<C: CoeffCoordinates, J: ModelJob>(&self, job: J) -> Result<J::Output, CliError> {
        match self {
            ModelSpec::PolyVector(a) => job.run(&PolyVectorModel::new(Self::algebroid::<C>(a)?)),
            ModelSpec::PolyDiff(a) => job.run(&PolyDiffModel::for_algebroid(&Self::algebroid::<C>(a)?)?),
            ModelSpec::Abelian(v) => job.run(&AbelianModel::koszul(v.clone())),
        }
    }
}
