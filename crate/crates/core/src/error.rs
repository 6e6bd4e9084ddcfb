use thiserror::Error;

/// Errors raised by the engine. Every variant is a caller-side domain error.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix dimension must be at least 1")]
    ZeroDimension,
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("entry buffer of length {len} is not a square matrix")]
    NotSquare { len: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("tolerance must be nonnegative, got {0}")]
    NegativeTolerance(f64),
    #[error("qubit count {0} outside 1..={max}", max = crate::MAX_QUBITS)]
    QubitCount(usize),
    #[error("qubit index {qubit} out of range for {n} qubits")]
    QubitOutOfRange { qubit: usize, n: usize },
    #[error("gate targets repeat qubit {0}")]
    RepeatedTarget(usize),
    #[error("rotation angle is not finite")]
    NonFiniteAngle,
    #[error("outcome must be 0 or 1, got {0}")]
    InvalidOutcome(u8),
    #[error("qubit {0} listed twice in a joint outcome")]
    DuplicateQubit(usize),
    #[error("conditioning on a zero-measure branch (qubit {qubit}, outcome {outcome})")]
    ZeroMeasureBranch { qubit: usize, outcome: u8 },
    #[error("remote operation touches the watched qubit {0}")]
    WatchedQubitTouched(usize),
    #[error("strategy weights must be nonnegative and sum to one")]
    InvalidDistribution,
    #[error("witness count {0} outside 0..=10")]
    WitnessCount(usize),
    #[error("protocol wins question pair ({qa}, {qb}) with probability {got}, expected the optimal quantum value")]
    ProtocolVerification { qa: u8, qb: u8, got: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;
