use thiserror::Error;

/// Broad classes of failure, used by the command-line front-end to pick an
/// exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Validation,
    Numerical,
    Certification,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {what} = {value} is outside {expected}")]
    Domain {
        what: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("invalid two-interval set: need -1 < alpha < beta < 1, got alpha = {alpha}, beta = {beta}")]
    InvalidSet { alpha: f64, beta: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degenerate geometry: modulus k = {k} is too close to 0 or 1")]
    DegenerateGeometry { k: f64 },

    #[error("argument {re} + {im}i is within 1e-10 of a pole")]
    PoleProximity { re: f64, im: f64 },

    #[error("{what} did not converge within {cap} iterations")]
    IterationCap { what: &'static str, cap: usize },

    #[error("{what} did not converge")]
    NonConvergence { what: &'static str },

    #[error("interpolation conditioning: held-out residual {residual:e} exceeds {limit:e}")]
    Conditioning { residual: f64, limit: f64 },

    #[error("no theta labelling satisfies the Pell identity (best excess {excess:e})")]
    BranchMismatch { excess: f64 },

    #[error("zero count mismatch in {context}: expected {expected}, found {found}")]
    ZeroCount {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("zeros do not respect the gap partition at index {gap_index}")]
    Partition { gap_index: usize },

    #[error("frame is not degenerate for degree {degree} (sigma/K = {sigma_over_k:e})")]
    NotDegenerate { degree: usize, sigma_over_k: f64 },

    #[error("certification failed: {reason}")]
    Certification {
        reason: String,
        analytic: String,
        oracle: String,
    },
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Domain { .. } | Error::InvalidSet { .. } | Error::InvalidInput(_) => {
                ErrorClass::Validation
            }
            Error::Certification { .. } => ErrorClass::Certification,
            _ => ErrorClass::Numerical,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
