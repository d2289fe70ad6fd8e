use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("FCIDUMP header: {0}")]
    FcidumpHeader(String),
    #[error("FCIDUMP line {line}: {message}")]
    FcidumpRecord { line: usize, message: String },
    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },
    #[error("invalid integrals: {0}")]
    InvalidIntegrals(String),
    #[error("invalid active space: {0}")]
    InvalidActiveSpace(String),
    #[error("requested {requested} roots but the sector only has {available} states")]
    TooManyRoots { requested: usize, available: usize },
    #[error("{qubits} qubits exceeds the dense limit of {limit}")]
    TooManyQubits { qubits: usize, limit: usize },
    #[error("qubit count mismatch: expected {expected}, found {found}")]
    QubitMismatch { expected: usize, found: usize },
    #[error("operator is not anti-Hermitian")]
    NotAntiHermitian,
    #[error("operator is not Hermitian")]
    NotHermitian,
    #[error("term {0} is not diagonal in the measurement basis")]
    NotDiagonal(String),
    #[error("matrix is not orthogonal (deviation {0:e})")]
    NotOrthogonal(f64),
    #[error("matrix is not symmetric (deviation {0:e})")]
    NotSymmetric(f64),
    #[error("excitation {0} annihilates the reference determinant")]
    InvalidExcitation(String),
    #[error("Jastrow pair ({0}, {1}) is outside the locality mask")]
    MaskViolation(usize, usize),
    #[error("shot budget {budget} cannot give {settings} settings a floor of {floor}")]
    InfeasibleFloor {
        budget: u64,
        settings: usize,
        floor: u64,
    },
    #[error("readout assignment for qubit {0} is singular (epsilon = 0.5)")]
    SingularAssignment(usize),
    #[error("probability {0} is outside [0, 1]")]
    InvalidProbability(f64),
    #[error("postselection rejected every shot")]
    EmptySector,
    #[error("shot plan does not match the basis: {0}")]
    PlanMismatch(String),
    #[error("{0}")]
    Parse(String),
    #[error("need at least {needed} data points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("empty operator pool")]
    EmptyPool,
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
