//! qclab-core: a desk-scale laboratory for small quantum error-correcting codes.
//!
//! The crate is organized around dense complex linear algebra over ordered
//! qubit registers ([`qla`]), GF(2) Pauli/stabilizer machinery ([`pauli`],
//! [`stab`], [`clifford`]), concrete codespaces with error-correction
//! checks ([`codes`]), transversal-gate verification ([`transversal`]), a
//! code-based homomorphic-encryption simulator with exact and factorized
//! security estimators ([`qhe`]), and closed-form information bounds
//! ([`bounds`]).
//!
//! Everything is deterministic: randomized routines take explicit 64-bit
//! seeds and use a portable counter-based generator, so identical inputs
//! produce bit-identical outputs across runs and platforms.

pub mod bounds;
pub mod clifford;
pub mod codes;
pub mod error;
pub mod gf2;
pub mod pauli;
pub mod qhe;
pub mod qla;
pub mod stab;
pub mod testing;
pub mod tol;
pub mod transversal;

pub use error::{Error, Result};
pub use qla::{DenseOperator, DenseState};
