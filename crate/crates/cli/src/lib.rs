//! Batch front end for `defq-core`.
//!
//! Every command writes a report to stdout, either as text or as one JSON
//! object (`--format json`), and exits with
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | ok |
//! | 1 | a checked property failed |
//! | 2 | parse error in an input file or flag |
//! | 3 | type or degree error |
//! | 4 | a splitting oracle failed |
//!
//! Reports depend only on the inputs, the flags and the seed.
//!
//! # JSON schema
//!
//! All objects carry
//!
//! - `command`: the subcommand name.
//! - `status`: `"ok"`, `"property failure"`, `"oracle failure"` or `"error"`.
//! - `exit_code`: the process exit code.
//!
//! Errors add `error`, an object with
//!
//! - `kind`: `"parse"`, `"degree"`, `"oracle"`, `"io"` or `"type"`.
//! - `message`: the error text.
//! - `file`: the input file involved, or `null`.
//! - `line`: 1-based line for parse errors, or `null`.
//!
//! `check-mc` adds
//!
//! - `model`: the normalized `model` header.
//! - `dgla`: the name of the graded Lie algebra built from it.
//! - `order`: the truncation order `N`.
//! - `residual`: one object per `h`-order `0..=N`, each with `order` and
//!   `value`, the coefficient of `dΠ + ½[Π,Π]` at that order in element
//!   notation (`"0"` when it vanishes).
//! - `mc`: whether the residual vanishes through `h^N`.
//! - `first_nonzero`: the lowest order with a nonzero residual, or `null`.
//!
//! `normalize` adds
//!
//! - `model`, `order`: as above.
//! - `cover`: the number of opens, `opens`, and the intersections, `tuples`.
//! - `oracle`: `"trivial"`, `"cone"` or `"linear"`.
//! - `input_check`: one object per condition (`maurer-cartan`, `gauge`,
//!   `cocycle`, `tetrahedron`) with `condition`, `checked` (tuples checked)
//!   and `failure`, which is `null` or `{ order, tuple }`.
//! - `normal_form`: the text of the normalized triple file.
//! - `chain`: the texts of the equivalence files, in the order applied.
//! - `composite`: the text of the composed equivalence.
//! - `recheck`: `chain_reproduces` (the composite sends the input to the
//!   normal form), `normal` (`g = 1` and `a = 1`) and `conditions`, shaped
//!   like `input_check`.
//! - `oracle_failure`: `null`, or `{ oracle, reason, hbar_order,
//!   cochain_level, witness }` where `witness` lists `{ tuple, value }`.
//!
//! `verify-suite` adds
//!
//! - `seed`, `order`, `trials`: as run.
//! - `fault`: `"none"` or `"sign"`.
//! - `outcomes`: one object per suite run with `suite`, `model`, `trials`,
//!   `checks`, `passed` and `witness`. The witness is `null` or `{ law,
//!   trial, inputs, detail }`, with `inputs` a list of `{ name, value }`.
//!
//! `moyal` adds `model`, `order`, `pi` (the star product in element
//! notation), `mc` and `file` (an element file accepted by `check-mc`).

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use defq_core::error::Error;
use serde_json::{json, Value};
use thiserror::Error as ThisError;

pub mod check;
pub mod model;
pub mod moyal;
pub mod normalize;
pub mod suite;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PROPERTY: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_DEGREE: i32 = 3;
pub const EXIT_ORACLE: i32 = 4;

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", path.display())]
    InFile { path: PathBuf, source: Error },
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    pub fn parse(line: usize, message: impl Into<String>) -> Self {
        CliError::Core(Error::parse(line, message))
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), source }
    }

    /// Attaches a file name to errors raised while reading it.
    pub fn in_file(self, path: &Path) -> Self {
        match self {
            CliError::Core(source) => CliError::InFile { path: path.to_path_buf(), source },
            other => other,
        }
    }

    fn core(&self) -> Option<&Error> {
        match self {
            CliError::Io { .. } => None,
            CliError::InFile { source, .. } | CliError::Core(source) => Some(source),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.core() {
            None => "io",
            Some(Error::Parse { .. } | Error::Invalid(_)) => "parse",
            Some(Error::Degree { .. }) => "degree",
            Some(Error::Oracle(_)) => "oracle",
            Some(_) => "type",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind() {
            "io" | "parse" => EXIT_PARSE,
            "oracle" => EXIT_ORACLE,
            _ => EXIT_DEGREE,
        }
    }

    fn to_json(&self) -> Value {
        let file = match self {
            CliError::Io { path, .. } | CliError::InFile { path, .. } => Some(path.display().to_string()),
            CliError::Core(_) => None,
        };
        let line = match self.core() {
            Some(Error::Parse { line, .. }) if *line > 0 => Some(*line),
            _ => None,
        };
        json!({ "kind": self.kind(), "message": self.to_string(), "file": file, "line": line })
    }
}

pub(crate) fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

/// Directory that relative paths inside `file` are resolved against.
pub(crate) fn base_dir(file: &Path) -> PathBuf {
    file.parent().map(Path::to_path_buf).unwrap_or_default()
}

/// A finished command: its report in both formats and its exit code.
pub struct Report {
    pub text: String,
    pub json: Value,
    pub code: i32,
}

impl Report {
    fn status(code: i32) -> &'static str {
        match code {
            EXIT_OK => "ok",
            EXIT_PROPERTY => "property failure",
            EXIT_ORACLE => "oracle failure",
            _ => "error",
        }
    }

    /// Adds the common `command`, `status` and `exit_code` fields.
    pub(crate) fn new(command: &str, text: String, mut fields: Value, code: i32) -> Self {
        let obj = fields.as_object_mut().expect("report fields form an object");
        obj.insert("command".into(), json!(command));
        obj.insert("status".into(), json!(Self::status(code)));
        obj.insert("exit_code".into(), json!(code));
        Report { text, json: fields, code }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "defq", version, about = "Exact checks for formal deformations and weak Maurer-Cartan data")]
pub struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the Maurer-Cartan equation for an element file.
    CheckMc {
        file: PathBuf,
        /// Truncation order; defaults to the file's `order` line, then 3.
        #[arg(long)]
        order: Option<usize>,
    },
    /// Bring a weak Maurer-Cartan triple to the form (Π', 1, 1).
    Normalize {
        file: PathBuf,
        /// Cover file; defaults to the file's `cover` line.
        #[arg(long)]
        cover: Option<PathBuf>,
        #[arg(long, default_value = "linear", value_parser = parse_oracle)]
        oracle: defq_core::simplicial::SplittingOracle,
        #[arg(long)]
        order: Option<usize>,
    },
    /// Run the randomized law suites.
    VerifySuite {
        /// Algebroid model file; the tangent algebroid of the plane if absent.
        model: Option<PathBuf>,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        order: usize,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Print the Moyal star product of a constant bivector as an element file.
    Moyal {
        /// Coordinate names.
        #[arg(long, num_args = 1.., required = true)]
        vars: Vec<String>,
        /// The bivector, e.g. "[x, y] 1".
        #[arg(long)]
        pi: String,
        #[arg(long, default_value_t = 3)]
        order: usize,
    },
}

fn parse_oracle(s: &str) -> Result<defq_core::simplicial::SplittingOracle, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::CheckMc { .. } => "check-mc",
            Command::Normalize { .. } => "normalize",
            Command::VerifySuite { .. } => "verify-suite",
            Command::Moyal { .. } => "moyal",
        }
    }
}

/// What the process should print and its exit code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

pub fn execute(cli: &Cli) -> Output {
    let result = match &cli.command {
        Command::CheckMc { file, order } => check::run(file, *order),
        Command::Normalize { file, cover, oracle, order } => normalize::run(file, cover.as_deref(), *oracle, *order),
        Command::VerifySuite { model, trials, seed, order, inject_fault } => {
            suite::run(model.as_deref(), *trials, *seed, *order, *inject_fault)
        }
        Command::Moyal { vars, pi, order } => moyal::run(vars, pi, *order),
    };
    match (result, cli.format) {
        (Ok(r), Format::Text) => Output { stdout: r.text, stderr: String::new(), code: r.code },
        (Ok(r), Format::Json) => Output { stdout: to_json_line(&r.json), stderr: String::new(), code: r.code },
        (Err(e), Format::Text) => Output { stdout: String::new(), stderr: format!("error: {e}\n"), code: e.exit_code() },
        (Err(e), Format::Json) => {
            let code = e.exit_code();
            let r = Report::new(cli.command.name(), String::new(), json!({ "error": e.to_json() }), code);
            Output { stdout: to_json_line(&r.json), stderr: String::new(), code }
        }
    }
}

fn to_json_line(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

/// Parses `args` (program name first) and runs the command. Usage errors
/// exit with code 2.
pub fn run_args<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                Output { stdout: String::new(), stderr: text, code }
            } else {
                Output { stdout: text, stderr: String::new(), code }
            }
        }
    }
}
