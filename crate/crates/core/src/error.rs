use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid Airy order n = {0}: need n >= 2")]
    InvalidOrder(usize),

    #[error("twist rho = {rho} is only supported for n = 2 (got n = {n})")]
    UnsupportedTwist { n: usize, rho: String },

    #[error("size limit exceeded: {what} = {size} > cap {cap}")]
    SizeLimit { what: &'static str, size: u128, cap: u128 },

    #[error("cohomology did not stabilize below truncation ceiling {ceiling} (last dims {history:?})")]
    StabilityFailure { ceiling: usize, history: Vec<(usize, usize)> },

    #[error("incompatible exponent lattices: step {left} vs {right}")]
    StepMismatch { left: String, right: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Inconsistency(_) | Error::StabilityFailure { .. } => 3,
            Error::Parse(_) => 64,
            _ => 1,
        }
    }
}
