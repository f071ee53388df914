use crate::cluster::Site;
use crate::statevec::Label;

/// Errors produced by the simulator, the pattern executors and the compiler.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("duplicate qubit label {0}")]
    DuplicateLabel(Label),
    #[error("unknown qubit label {0}")]
    UnknownLabel(Label),
    #[error("amplitude vector of length {len} does not match {qubits} labels")]
    LengthMismatch { len: usize, qubits: usize },
    #[error("state is not normalised (norm² = {0})")]
    NotNormalized(f64),
    #[error("gate is not unitary (max deviation {0:.3e})")]
    NonUnitary(f64),
    #[error("a two-qubit operation needs two distinct qubits, got {0} twice")]
    SameQubit(Label),
    #[error("impossible branch: outcome {outcome} has probability {probability:.3e}")]
    ImpossibleBranch { outcome: u8, probability: f64 },
    #[error("label sets differ: {0}")]
    LabelMismatch(String),
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error("input has {got} qubits but the geometry has {expected} rows")]
    ArityMismatch { expected: usize, got: usize },
    #[error("column {column} incomplete: site {site} was not measured")]
    ColumnIncomplete { column: usize, site: Site },
    #[error("invalid measurement pattern: {0}")]
    InvalidPattern(String),
    #[error("pattern not adaptive-ready: {0}")]
    NotAdaptiveReady(String),
    #[error("phase/branch inconsistency: extracted matrix deviates from unitarity by {0:.3e}")]
    PhaseInconsistency(f64),
    #[error("invalid gate: {0}")]
    InvalidGate(String),
    #[error("circuit width must be at least 1")]
    ZeroWidth,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
