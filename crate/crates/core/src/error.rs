use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("bit width {0} outside the supported range 1..=16")]
    WidthOutOfRange(usize),

    #[error("function is neither one-to-one nor two-to-one with a hidden period: {0}")]
    UnsupportedClass(String),

    #[error("function has a table representation and is not CNOT-realizable")]
    NotCnotRealizable,

    #[error("{qubits} qubits exceeds the simulator cap of {cap}")]
    TooManyQubits { qubits: usize, cap: usize },

    #[error("operator dimension {0} exceeds the dense cap of 256")]
    DimensionOverflow(usize),

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("symmetry group enumeration is limited to n <= 4, got n = {0}")]
    GroupTooLarge(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate kernel: leading eigenvalue {0:e} is not positive")]
    DegenerateKernel(f64),

    #[error("{solver} did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence {
        solver: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("could not draw {wanted} distinct functions after {attempts} attempts")]
    UniquenessExhausted { wanted: usize, attempts: usize },

    #[error("unknown {kind} '{name}' (registered: {available})")]
    UnknownStrategy {
        kind: &'static str,
        name: String,
        available: String,
    },

    #[error("{kind} '{name}' is already registered")]
    DuplicateStrategy { kind: &'static str, name: String },

    #[error("manifest error: {0}")]
    Manifest(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit status for command-line drivers: 2 for configuration
    /// problems, 3 for bad or unusable data, 4 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_)
            | Error::InvalidParameter(_)
            | Error::UnknownStrategy { .. }
            | Error::DuplicateStrategy { .. }
            | Error::WidthOutOfRange(_)
            | Error::TooManyQubits { .. }
            | Error::GroupTooLarge(_)
            | Error::DimensionOverflow(_) => 2,
            Error::NonConvergence { .. } | Error::DegenerateKernel(_) => 4,
            Error::UnsupportedClass(_)
            | Error::NotCnotRealizable
            | Error::InvalidDistribution(_)
            | Error::UniquenessExhausted { .. }
            | Error::Manifest(_)
            | Error::Io(_)
            | Error::Json(_)
            | Error::Csv(_) => 3,
        }
    }
}
