use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} qubits, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("qubit index {index} out of range for {num_qubits}-qubit register")]
    QubitIndexOutOfRange { index: usize, num_qubits: usize },

    #[error("permutation is not a bijection on the qubit register")]
    InvalidPermutation,

    #[error("{what} on {qubits} qubits exceeds the dense cap of {cap} qubits")]
    DenseCapExceeded {
        what: &'static str,
        qubits: usize,
        cap: usize,
    },

    #[error("operator is not unitary (deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("operator is not a valid density operator: {reason}")]
    NotDensity { reason: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid stabilizer group: {0}")]
    InvalidStabilizer(String),

    #[error("operator is not a logical operator of the code")]
    NotLogical,

    #[error("qubit subset is not cleanable")]
    NotCleanable,

    #[error("no stabilizer element cleans the operator off the given subset")]
    NoCleaningSolution,

    #[error("exhaustive search budget exceeded: {0}")]
    SearchBudget(String),

    #[error("unknown builtin code `{0}`")]
    UnknownCode(String),

    #[error("unknown gate `{0}`")]
    UnknownGate(String),

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("invalid scheme parameters: {0}")]
    InvalidScheme(String),

    #[error("erasure pattern of {erased} qubits exceeds the correctable budget d-1 = {budget}")]
    PatternTooLarge { erased: usize, budget: usize },

    #[error("recovery failed: {0}")]
    RecoveryFailed(String),

    #[error("decoded projection weight {weight:.6} below threshold; key mismatch or corrupted ciphertext")]
    KeyMismatch { weight: f64 },

    #[error("key-pair enumeration of {pairs} pairs exceeds the budget; enable sampling")]
    EnumerationBudget { pairs: u128 },

    #[error("logical basis states factor inconsistently across subset {0:?}")]
    MisalignedFactorization(Vec<usize>),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
