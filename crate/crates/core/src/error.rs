use thiserror::Error;

use crate::dynamics::AtomState;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A tabulated curve was evaluated outside its supported range.
    #[error("range error: z = {z:e} m outside [{lo:e}, {hi:e}] m")]
    Range { z: f64, lo: f64, hi: f64 },

    #[error("quadrature did not converge: estimated relative error {achieved:e} after {intervals} intervals")]
    Quadrature { achieved: f64, intervals: usize },

    #[error("no evanescent solution: {0}")]
    NoEvanescent(String),

    #[error("integration failed at t = {:e} s: {reason}", last.t)]
    Integration { reason: String, last: AtomState },

    /// An operation was called on input that violates its contract.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_)
            | Error::NoEvanescent(_)
            | Error::Contract(_)
            | Error::Config(_)
            | Error::Io { .. } => 2,
            Error::Range { .. } | Error::Quadrature { .. } | Error::Integration { .. } => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Range { .. } => "range",
            Error::Quadrature { .. } => "quadrature",
            Error::NoEvanescent(_) => "no_evanescent_solution",
            Error::Integration { .. } => "integration",
            Error::Contract(_) => "contract",
            Error::Config(_) => "config",
            Error::Io { .. } => "io",
        }
    }

    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}

pub(crate) fn require_positive(name: &str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be positive and finite, got {value:e}")))
    }
}
