use thiserror::Error;

/// Errors raised by the algebra engine and the problem-file front end.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown variable `{name}` at byte {pos}")]
    UnknownVariable { name: String, pos: usize },

    #[error("invalid ring: {0}")]
    InvalidRing(String),

    #[error("element is not homogeneous: {0}")]
    NotHomogeneous(String),

    #[error("ambient mismatch: {0}")]
    AmbientMismatch(String),

    #[error("containment fails in degree {degree}")]
    NotContained { degree: i32 },

    #[error("quotient is not of finite length within degree bound {bound}")]
    NotFinite { bound: i32 },

    /// A computation needed a degree or filtration index past the working bound.
    #[error("{what}: working bound {bound} exhausted (try {hint})")]
    BoundExhausted {
        what: String,
        bound: i64,
        hint: String,
    },

    #[error("search exhausted after {tries} candidates: {last}")]
    SearchExhausted { tries: usize, last: String },

    #[error("hypothesis not met: {0}")]
    Hypothesis(String),

    /// An internal cross-check failed. Results computed so far cannot be trusted.
    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("{0}")]
    Input(String),
}

impl Error {
    pub(crate) fn bound(what: impl Into<String>, bound: i64, hint: impl Into<String>) -> Self {
        Error::BoundExhausted {
            what: what.into(),
            bound,
            hint: hint.into(),
        }
    }

    /// True for errors caused by truncation rather than by a wrong input or a refuted claim.
    pub fn is_inconclusive(&self) -> bool {
        matches!(
            self,
            Error::BoundExhausted { .. } | Error::SearchExhausted { .. } | Error::NotFinite { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
