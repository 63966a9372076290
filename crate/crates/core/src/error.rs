use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("insufficient quotients: need {needed}, have {available}")]
    InsufficientQuotients { needed: usize, available: usize },

    #[error("invalid quotient at index {index}: {detail}")]
    InvalidQuotient { index: usize, detail: String },

    #[error("no quotients")]
    NoQuotients,

    #[error("quotient a_{index} would need {bits} bits, above the cap of {cap} bits")]
    QuotientTooLarge { index: usize, bits: u64, cap: u64 },

    #[error("insufficient precision at q = {q}: {detail}")]
    InsufficientPrecision { q: String, detail: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("below admissible index: k = {k} has log log q_k <= 0")]
    BelowAdmissibleIndex { k: usize },

    #[error("insufficient depth: {admissible} admissible indices, need at least {required}")]
    InsufficientDepth { admissible: usize, required: usize },

    #[error("phi below one: phi(q_{k}) = {value}")]
    PhiBelowOne { k: usize, value: f64 },

    #[error("invalid gap sequence: {0}")]
    InvalidGapSequence(String),

    #[error("invalid index sequence: {0}")]
    InvalidIndexSequence(String),

    #[error("phi evaluation error: {0}")]
    PhiEvaluation(String),

    #[error("invalid step function: {0}")]
    InvalidStep(String),

    /// Malformed specification file; `field` names the offending key.
    #[error("field `{field}`: {message}")]
    SpecField { field: String, message: String },

    #[error("csv output: {0}")]
    Csv(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn field(field: &str, message: impl Into<String>) -> Self {
        Error::SpecField {
            field: field.to_string(),
            message: message.into(),
        }
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Csv(e.to_string())
    }
}
