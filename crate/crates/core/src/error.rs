use thiserror::Error;

/// Errors raised anywhere between loading a model and producing a verdict.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown species `{0}`")]
    UnknownSpecies(String),

    #[error("duplicate species `{0}`")]
    DuplicateSpecies(String),

    #[error("invalid reaction: {0}")]
    InvalidReaction(String),

    #[error("invalid process: {0}")]
    InvalidProcess(String),

    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("{path}: {msg}")]
    Io { path: String, msg: String },

    #[error("model file line {line}: {msg}")]
    ModelFile { line: usize, msg: String },

    #[error("invalid interval [{0}, {1}]")]
    InvalidInterval(f64, f64),

    #[error("unbounded temporal interval (resolve it against a horizon first)")]
    Unbounded,

    #[error("division by zero while evaluating `{0}`")]
    DivisionByZero(String),

    #[error("integration blow-up at t = {0}")]
    BlowUp(f64),

    #[error("invalid signal: {0}")]
    InvalidSignal(String),

    #[error("signal lengths differ ({0} vs {1})")]
    LengthMismatch(f64, f64),

    #[error("time {t} outside signal of length {len}")]
    OutOfRange { t: f64, len: f64 },

    #[error("bounding ball of an empty set")]
    EmptySet,

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
