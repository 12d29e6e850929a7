use thiserror::Error;

use crate::pauli::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("qubit count mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("{n} qubits exceeds the supported maximum of {max}")]
    TooManyQubits { n: usize, max: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid Pauli string {0:?}")]
    PauliSyntax(String),

    #[error("invalid stabilizer code: {}", render_violations(.0))]
    InvalidCode(Vec<Violation>),

    #[error("generators {first} and {second} do not commute")]
    NonCommuting { first: usize, second: usize },

    #[error("generator {0} is linearly dependent on the others")]
    DependentGenerators(usize),

    #[error("unknown code {0:?}")]
    UnknownCode(String),

    #[error("code is not CSS: generator {0} mixes X and Z support")]
    NotCss(usize),

    #[error("{what} = {value} exceeds the limit of {limit}")]
    GuardExceeded { what: &'static str, value: usize, limit: usize },

    #[error("product {context} has imaginary phase; the generators do not describe a valid stabilizer group")]
    ImaginaryPhase { context: String },

    #[error("post-selection undefined: success weight {weight:e} is not positive")]
    UndefinedPostSelection { weight: f64 },

    #[error("parameter {name} = {value} is out of range ({range})")]
    ParameterOutOfRange { name: &'static str, value: f64, range: &'static str },

    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid threshold bracket: {0}")]
    BracketInvalid(String),

    #[error("no stable nontrivial fixed point: {0}")]
    NoStableFixedPoint(String),

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("target error {target:e} is unreachable from raw error {raw:e} in the {regime} regime")]
    Unreachable { regime: &'static str, raw: f64, target: f64 },

    #[error("io error on {path}: {message}")]
    Io { path: String, message: String },
}

fn render_violations(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}
