use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degree {degree} exceeds the configured maximum {max}")]
    DegreeOverflow { degree: usize, max: usize },

    #[error("argument {0} is outside the range of direct evaluation (|Im z| > 700)")]
    ArgumentOverflow(Complex64),

    #[error("non-finite value produced in {0}")]
    NonFinite(&'static str),

    #[error("continued fraction for degree {degree} at z = {z} did not converge")]
    NonConvergence { degree: usize, z: Complex64 },

    #[error("invalid mode (n = {n}, m = {m})")]
    InvalidMode { n: usize, m: i64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("outgoing wave functions are singular at the origin")]
    OriginEvaluation,

    #[error("evaluation point at radius {radius} lies inside the scatterer (outer radius {outer})")]
    InteriorPoint { radius: f64, outer: f64 },

    #[error("expected {expected} samples, got {got}")]
    SampleMismatch { expected: usize, got: usize },

    #[error("quadrature of degree {degree} is under-resolved (relative change {change:e} on doubling)")]
    UnderResolvedQuadrature { degree: usize, change: f64 },

    #[error("root polishing failed near omega = {omega}")]
    RootPolish { omega: f64 },

    #[error("ill-conditioned system: {0}")]
    IllConditioned(String),

    #[error("omega = {omega} is within {margin:e} of a {family} eigenvalue of the core")]
    EigenvalueProximity {
        omega: f64,
        family: &'static str,
        margin: f64,
    },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code used by the command line driver.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::InvalidInput(_) | Error::InvalidMode { .. } => 2,
            Error::Json(_) | Error::Io(_) => 2,
            Error::EigenvalueProximity { .. } | Error::Hypothesis(_) => 4,
            _ => 3,
        }
    }
}
