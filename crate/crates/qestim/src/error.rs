use thiserror::Error;

/// Errors for quantum state, measurement, and grid computations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("estimator has {0} values but the measurement has {1} outcomes")]
    EstimatorLength(usize, usize),

    #[error("not Hermitian (max |X - X†| entry = {0:.3e})")]
    NotHermitian(f64),

    #[error("not positive semi-definite (min eigenvalue = {0:.3e})")]
    NotPositive(f64),

    #[error("trace is {0}, expected 1")]
    InvalidTrace(f64),

    #[error("measurement elements do not sum to identity (max deviation = {0:.3e})")]
    Incomplete(f64),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("degenerate density: Fisher information {0:.3e} is not positive")]
    DegenerateDensity(f64),

    #[error("aliasing risk: boundary amplitude is {0:.3e} of the peak (limit {1:.1e})")]
    Aliasing(f64, f64),

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
