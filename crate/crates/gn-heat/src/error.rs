//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A physical precondition was violated (e.g. non-positive temperature).
    #[error("domain error: {0}")]
    Domain(String),

    /// A theory tag was paired with a state of the wrong shape.
    #[error("theory/state mismatch: {0}")]
    TheoryStateMismatch(String),

    /// A scenario or config failed validation before any stepping.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// The solution left its admissible set (NaN/Inf or θ ≤ 0) mid-run.
    #[error("blow-up at t = {t}{}: {detail}", location.map(|x| format!(", x = {x}")).unwrap_or_default())]
    BlowUp {
        /// Last valid time before the failure was detected.
        t: f64,
        location: Option<f64>,
        detail: String,
    },

    /// A measurement had too little signal to be meaningful.
    #[error("insufficient signal: {0}")]
    InsufficientSignal(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
