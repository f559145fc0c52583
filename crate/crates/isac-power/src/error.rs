use std::path::PathBuf;

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A value or dimension violated a documented precondition.
    #[error("invalid input: {0}")]
    Invalid(String),

    /// Hermitian factorization failed: the matrix is not positive
    /// (semi)definite within tolerance.
    #[error("matrix is not positive semidefinite (Cholesky factorization failed)")]
    NotPositiveSemidefinite,

    /// The requested SCNR threshold exceeds the maximum attainable value
    /// `P_T * gamma_0` for this realization.
    #[error("SCNR threshold exceeds the maximum feasible value by {margin:.6e} (linear)")]
    InfeasibleThreshold {
        /// How far above the feasibility limit the request lies (linear units).
        margin: f64,
    },

    /// The SCA subproblem has no feasible point at the current linearization.
    #[error("SCA subproblem is infeasible at the current linearization")]
    SubproblemInfeasible,

    /// Configuration file problems.
    #[error(transparent)]
    Config(#[from] ConfigError),

    /// Filesystem errors, annotated with the offending path.
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A CSV file could not be interpreted.
    #[error("malformed CSV: {0}")]
    Csv(String),

    /// A chart column name does not exist in the CSV header.
    #[error("unknown column: {0}")]
    UnknownColumn(String),
}

/// Errors raised while loading or validating a run configuration.
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Syntax errors and missing keys, as reported by the JSON parser.
    #[error("cannot parse config: {0}")]
    Parse(String),

    #[error("config key `{key}` out of range: {detail}")]
    OutOfRange { key: &'static str, detail: String },

    #[error("angles_deg lists {got} angles but k_paths = {expected} requires at least that many")]
    AngleCount { expected: usize, got: usize },

    #[error("angles_deg contains duplicate entries")]
    DuplicateAngles,

    #[error("unknown solver `{0}` (expected sca, closed-form, sc or cc)")]
    UnknownSolver(String),
}

impl Error {
    /// Process exit code for the CLI: 0 ok, 2 config, 3 infeasible, 4 I/O,
    /// 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 2,
            Error::InfeasibleThreshold { .. } => 3,
            Error::Io { .. } => 4,
            _ => 1,
        }
    }
}
