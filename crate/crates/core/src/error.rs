use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid quantum numbers: {0}")]
    InvalidQuantumNumbers(String),

    #[error("unknown level: {0}")]
    UnknownLevel(String),

    #[error("level {0} has no dipole-allowed decay channels in this scheme")]
    NoDecayChannels(String),

    #[error("decay network orphans population from {level}: outflow {outflow} vs redistributed {inflow}")]
    OrphanedPopulation {
        level: String,
        outflow: f64,
        inflow: f64,
    },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-unique steady state: null space of dimension {nullity} beyond the trace constraint")]
    NonUniqueSteadyState { nullity: usize },

    #[error("steady-state residual {residual:e} exceeds tolerance {tolerance:e}")]
    Residual { residual: f64, tolerance: f64 },

    #[error("unstable time step: trace drift {drift:e} (try a smaller dt)")]
    UnstableStep { drift: f64 },

    #[error("ill-conditioned inversion: {0}")]
    IllConditioned(String),

    #[error("inconsistent samples: {reason} (residual {residual:e})")]
    InconsistentSamples { reason: String, residual: f64 },

    #[error("solve failed at delta_s = {detuning}, v = {velocity} m/s: {source}")]
    Cell {
        detuning: f64,
        velocity: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// Process exit code: 2 for I/O failures, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) => 2,
            Error::Csv(e) if e.is_io_error() => 2,
            _ => 1,
        }
    }
}
