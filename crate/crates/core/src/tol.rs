//! Central numeric tolerances.
//!
//! Every structural check (hermiticity, unitarity, orthonormality, GF(2)
//! cross-validation against dense matrices) uses [`STRUCTURAL`]; end-to-end
//! equalities that accumulate a full pipeline of floating-point work use
//! [`END_TO_END`]. Keeping them in one place gives a single reproducibility
//! knob.

/// Structural checks: hermiticity, unitarity, state normalization.
pub const STRUCTURAL: f64 = 1e-10;

/// End-to-end equalities: encode/evaluate/decode pipelines, logical-action
/// verification, Gram-identity cross-checks.
pub const END_TO_END: f64 = 1e-9;

/// Trace preservation under partial trace.
pub const TRACE_PRESERVATION: f64 = 1e-12;

/// Second singular value below this means Schmidt rank 1 (product state).
pub const SCHMIDT_RANK: f64 = 1e-9;

/// Eigenvalues above this count toward a density operator's rank.
pub const RANK_CUTOFF: f64 = 1e-10;

/// Decoded-projection weight below 1 minus this signals a key mismatch.
pub const DECODE_WEIGHT: f64 = 1e-6;

/// State vectors larger than this many qubits are refused.
pub const MAX_STATE_QUBITS: usize = 22;

/// Dense operators larger than this many qubits are refused.
pub const MAX_OPERATOR_QUBITS: usize = 12;
