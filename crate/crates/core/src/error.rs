use thiserror::Error;

/// Errors raised by the simulator.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum OmitError {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: String, reason: String },

    #[error("singular geometry: {0}")]
    SingularGeometry(String),

    #[error("branch `{requested}` not available ({available} real non-negative root(s))")]
    BranchNotAvailable {
        requested: &'static str,
        available: usize,
    },

    #[error("numerical inconsistency: {0}")]
    NumericalInconsistency(String),

    #[error("singular linear system: {0}")]
    Singular(String),

    #[error("undefined ratio: {0}")]
    UndefinedRatio(&'static str),

    #[error("transmission phase undefined: |t| = {0:e}")]
    PhaseUndefined(f64),

    #[error("eigenvalue solver did not converge")]
    EigenNonConvergence,

    #[error("integration diverged at t = {time:e} s")]
    Divergence { time: f64 },

    #[error("harmonic window invalid: {0}")]
    Window(String),

    #[error("config error{}: {msg}", line.map(|l| format!(" (line {l})")).unwrap_or_default())]
    Config { line: Option<usize>, msg: String },

    #[error("invalid scan: {0}")]
    Scan(String),

    #[error("I/O error: {0}")]
    Io(String),
}

impl OmitError {
    pub(crate) fn param(field: impl Into<String>, reason: impl Into<String>) -> Self {
        OmitError::InvalidParameter {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn config(line: Option<usize>, msg: impl Into<String>) -> Self {
        OmitError::Config {
            line,
            msg: msg.into(),
        }
    }

    /// Errors a user can fix by editing the configuration or command line.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            OmitError::InvalidParameter { .. }
                | OmitError::Config { .. }
                | OmitError::Scan(_)
                | OmitError::BranchNotAvailable { .. }
        )
    }
}

impl From<std::io::Error> for OmitError {
    fn from(e: std::io::Error) -> Self {
        OmitError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, OmitError>;
