use std::fmt;

use thiserror::Error;

/// Which of the two necessary conditions for the sheared tensile branch failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum BifurcationCondition {
    /// `eta^2 > zeta^2 + iota^2 / beta^2`
    ModulusOrdering,
    /// The sheared dilatation must lie strictly below the limiting dilatation.
    LimitingDilatation,
}

impl fmt::Display for BifurcationCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BifurcationCondition::ModulusOrdering => write!(f, "eta^2 > zeta^2 + iota^2/beta^2 fails"),
            BifurcationCondition::LimitingDilatation => {
                write!(f, "sheared dilatation does not lie below the limiting dilatation")
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("NonPositiveParameter: `{0}` must be positive")]
    NonPositiveParameter(&'static str),
    #[error("NonFiniteParameter: `{0}` must be finite")]
    NonFiniteParameter(&'static str),
    #[error("DefinitenessViolation: beta^2 eta^2 - iota^2 = {0} must be positive")]
    DefinitenessViolation(f64),
    #[error("StrainOutOfRange: Q(u, v) = {0} is not below 1")]
    StrainOutOfRange(f64),
    #[error("NonOrthonormalFrame: deviation {0:e} exceeds tolerance")]
    NonOrthonormalFrame(f64),
    #[error("BelowThreshold: N = {thrust} does not exceed N_thresh = {threshold}")]
    BelowThreshold { thrust: f64, threshold: f64 },
    #[error("NoBifurcation: {0}")]
    NoBifurcation(BifurcationCondition),
    #[error("DegenerateCouple: M1 = 0, use the pure-twist family instead")]
    DegenerateCouple,
    #[error("InvalidArgument: {0}")]
    InvalidArgument(String),
    #[error("I/O error: {0}")]
    Io(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Whether the error comes from reading or decoding input, as opposed to the model.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Io(_) | Error::Parse(_))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
