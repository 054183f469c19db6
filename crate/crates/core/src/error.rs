use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid chain parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{n_qubits} qubits exceeds the dense-matrix cap of {cap}")]
    QubitCapExceeded { n_qubits: usize, cap: usize },

    #[error("qubit index {index} out of range for a {n_qubits}-qubit chain")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("neighbor qubit {neighbor} of target {target} has no basis state assigned")]
    NeighborUnspecified { target: usize, neighbor: usize },

    #[error("operator is not Hermitian (max |H - H^†| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("duration must be non-negative, got {0} ns")]
    NegativeDuration(f64),

    #[error("invalid quantum state: {0}")]
    InvalidState(String),

    #[error("qubit {qubit} is entangled (purity {purity:.9}), cannot inject a new state")]
    EntangledQubit { qubit: usize, purity: f64 },

    #[error("infeasible gate design: {0}")]
    Infeasible(String),

    #[error("qubits {left} and {right} are not adjacent")]
    NonAdjacent { left: usize, right: usize },

    #[error("invalid channel layout: {0}")]
    InvalidLayout(String),

    #[error("schedule does not match the chain: {0}")]
    ScheduleMismatch(String),

    #[error("occupancy of qubit {qubit} is indeterminate in window {window}")]
    OccupancyIndeterminate { qubit: usize, window: usize },

    #[error("input is not a computational basis state: {0}")]
    NonBasisInput(String),

    #[error("configuration error at `{location}`: {message}")]
    Config { location: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn param(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }

    /// True for errors that come from the physics rather than from bad input files.
    pub fn is_physics(&self) -> bool {
        matches!(
            self,
            Error::Infeasible(_)
                | Error::InvalidParameter { .. }
                | Error::InvalidLayout(_)
                | Error::NonAdjacent { .. }
        )
    }
}
