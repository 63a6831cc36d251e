use thiserror::Error;

use crate::gate::GateKind;
use crate::rnl::ParseError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{kind} takes {expected} lines, got {got}")]
    ArityMismatch {
        kind: GateKind,
        expected: usize,
        got: usize,
    },
    #[error("table for arity {arity} must have {expected} entries, got {got}")]
    TableLength {
        arity: usize,
        expected: usize,
        got: usize,
    },
    #[error("a circuit needs at least one line")]
    EmptyCircuit,
    #[error("line {index} appears more than once in a gate application")]
    DuplicateLine { index: usize },
    #[error("line {index} is out of range for a {lines}-line circuit")]
    LineOutOfRange { index: usize, lines: usize },
    #[error("invalid signal name {0:?}")]
    InvalidName(String),
    #[error("input name {0:?} is declared twice")]
    DuplicateInputName(String),
    #[error("output name {0:?} is declared twice")]
    DuplicateOutputName(String),
    #[error("no value given for input {0:?}")]
    MissingInput(String),
    #[error("circuit has no input named {0:?}")]
    UnknownInput(String),
    #[error("assignment has {got} bits, circuit has {expected} lines")]
    AssignmentLength { expected: usize, got: usize },
    #[error("refusing to enumerate 2^{inputs} rows: limit is 2^{cap}")]
    EnumerationCap { inputs: usize, cap: usize },
    #[error("{what} must be at least {min}, got {got}")]
    Width {
        what: &'static str,
        min: usize,
        got: usize,
    },
    #[error("{what} must be at most {max}, got {got}")]
    TooWide {
        what: &'static str,
        max: usize,
        got: usize,
    },
    #[error("circuit does not match the function interface: {0}")]
    InterfaceMismatch(String),
    #[error("unknown function spec {0:?}")]
    UnknownSpec(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub type Result<T> = std::result::Result<T, Error>;
