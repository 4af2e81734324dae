use thiserror::Error;

/// Errors raised by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("argument {0} is within 1e-12 of a pole of the gamma function")]
    Pole(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("{what} did not converge: {detail}")]
    NonConvergence { what: &'static str, detail: String },
    #[error("tolerance {tol:e} not achievable: {detail}")]
    ToleranceNotAchievable { tol: f64, detail: String },
    #[error("overflow: {0}")]
    Overflow(String),
    #[error("regime error: {0}")]
    Regime(String),
    #[error("scope error: {0}")]
    Scope(String),
    #[error("contour abscissa c = {c} outside ({c0}, 1)")]
    Contour { c: f64, c0: f64 },
    #[error("|arg z| = {arg} outside the convergence sector {limit}")]
    Sector { arg: f64, limit: f64 },
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("statistical check failed: {0}")]
    Statistical(String),
}

impl Error {
    /// True for errors caused by the caller's parameters rather than numerics.
    pub fn is_parameter_error(&self) -> bool {
        matches!(
            self,
            Error::Parameter(_)
                | Error::Pole(_)
                | Error::Domain(_)
                | Error::Regime(_)
                | Error::Scope(_)
                | Error::Contour { .. }
                | Error::Sector { .. }
        )
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parameter(_) => "parameter",
            Error::Pole(_) => "pole",
            Error::Domain(_) => "domain",
            Error::NonConvergence { .. } => "non-convergence",
            Error::ToleranceNotAchievable { .. } => "tolerance-not-achievable",
            Error::Overflow(_) => "overflow",
            Error::Regime(_) => "regime",
            Error::Scope(_) => "scope",
            Error::Contour { .. } => "contour",
            Error::Sector { .. } => "sector",
            Error::Budget(_) => "budget",
            Error::Statistical(_) => "statistical",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param(msg: impl Into<String>) -> Error {
    Error::Parameter(msg.into())
}
