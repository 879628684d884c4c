//! Product operators across code subsystems and verification of their
//! logical action.
//!
//! An r-block register is laid out block-major: block b occupies qubits
//! [b*n, (b+1)*n). Subsystem i collects qubit i of every block, so a product
//! operator's factor i acts on the qubit tuple (i, n+i, 2n+i, ...), with
//! block 0 on the factor's most significant qubit.

use num_complex::Complex64;

use crate::codes::CodeSpace;
use crate::error::{Error, Result};
use crate::qla::{DenseOperator, DenseState};
use crate::tol;

/// Seed for the pseudo-random superposition probes; fixed so verification is
/// reproducible.
const PROBE_SEED: u64 = 0x70b3_57a1_e5;

/// Candidate transversal gate: one unitary factor per physical subsystem,
/// each acting on the r qubits the subsystem holds across the blocks.
#[derive(Debug, Clone)]
pub struct ProductOperator {
    num_blocks: usize,
    factors: Vec<DenseOperator>,
}

impl ProductOperator {
    pub fn new(num_blocks: usize, factors: Vec<DenseOperator>) -> Result<Self> {
        if num_blocks == 0 || factors.is_empty() {
            return Err(Error::Domain("empty product operator".into()));
        }
        for f in &factors {
            if f.num_qubits() != num_blocks {
                return Err(Error::DimensionMismatch {
                    expected: num_blocks,
                    got: f.num_qubits(),
                });
            }
            f.assert_unitary()?;
        }
        Ok(Self {
            num_blocks,
            factors,
        })
    }

    /// The same factor on every subsystem.
    pub fn uniform(n_physical: usize, factor: DenseOperator) -> Result<Self> {
        let num_blocks = factor.num_qubits();
        Self::new(num_blocks, vec![factor; n_physical])
    }

    pub fn num_blocks(&self) -> usize {
        self.num_blocks
    }

    pub fn n_physical(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[DenseOperator] {
        &self.factors
    }

    /// All factors equal (no per-subsystem variation).
    pub fn is_strongly_transversal(&self) -> bool {
        self.factors.iter().all(|f| {
            f.sub(&self.factors[0])
                .map(|d| d.frobenius_norm() <= tol::STRUCTURAL)
                .unwrap_or(false)
        })
    }

    /// Qubit tuple of subsystem `i` in the block-major register.
    pub fn subsystem_targets(&self, i: usize) -> Vec<usize> {
        let n = self.n_physical();
        (0..self.num_blocks).map(|b| b * n + i).collect()
    }

    /// Applies every factor to a block-major register state.
    pub fn apply(&self, state: &DenseState) -> Result<DenseState> {
        self.apply_subsystems(state, &(0..self.n_physical()).collect::<Vec<_>>())
    }

    /// Applies only the factors of the listed subsystems.
    pub fn apply_subsystems(&self, state: &DenseState, subsystems: &[usize]) -> Result<DenseState> {
        let n = self.n_physical();
        let expected = n * self.num_blocks;
        if state.num_qubits() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: state.num_qubits(),
            });
        }
        let mut out = state.clone();
        for &i in subsystems {
            if i >= n {
                return Err(Error::QubitIndexOutOfRange {
                    index: i,
                    num_qubits: n,
                });
            }
            out = out.apply_gate(&self.factors[i], &self.subsystem_targets(i))?;
        }
        Ok(out)
    }

    /// Dense matrix on the block-major register (small systems only).
    pub fn dense_realization(&self) -> Result<DenseOperator> {
        let n = self.n_physical();
        let r = self.num_blocks;
        let mut kron = DenseOperator::identity(0);
        for f in &self.factors {
            kron = kron.tensor(f)?;
        }
        // kron lives subsystem-major: subsystem i, block b at qubit i*r + b.
        // Send it to block-major position b*n + i.
        let mut perm = vec![0usize; n * r];
        for i in 0..n {
            for b in 0..r {
                perm[i * r + b] = b * n + i;
            }
        }
        kron.permute_qubits(&perm)
    }
}

/// Encodes an r-qubit input across r code blocks (block-major).
pub fn encode_logical(code: &CodeSpace, input: &DenseState) -> Result<DenseState> {
    let r = input.num_qubits();
    let n = code.n_physical();
    if n * r > tol::MAX_STATE_QUBITS {
        return Err(Error::DenseCapExceeded {
            what: "encoded register",
            qubits: n * r,
            cap: tol::MAX_STATE_QUBITS,
        });
    }
    let dim = 1usize << (n * r);
    let mut acc = vec![Complex64::ZERO; dim];
    for x in 0..(1usize << r) {
        let amp = input.amplitude(x);
        if amp.norm() < 1e-300 {
            continue;
        }
        let mut block = DenseState::basis(0, 0)?;
        for b in 0..r {
            let bit = (x >> (r - 1 - b)) & 1;
            let factor = if bit == 0 {
                code.logical_zero()
            } else {
                code.logical_one()
            };
            block = block.tensor(factor)?;
        }
        for (i, v) in block.amplitudes().iter().enumerate() {
            acc[i] += amp * v;
        }
    }
    DenseState::from_amplitudes(n * r, &acc)
}

/// Outcome of probing a physical operator against a target logical gate.
#[derive(Debug, Clone)]
pub struct LogicalCheck {
    pub logical: bool,
    /// Common global phase when `logical` holds.
    pub phase: Complex64,
    /// Largest residual across probes after dividing out the common phase.
    pub max_residual: f64,
}

/// Probes whether `apply` acts as `target` on the code: all 2^r encoded
/// computational inputs plus r+1 seeded random superpositions, with one
/// shared global phase.
pub fn is_logical(
    code: &CodeSpace,
    apply: impl Fn(&DenseState) -> Result<DenseState>,
    target: &DenseOperator,
) -> Result<LogicalCheck> {
    target.assert_unitary()?;
    let r = target.num_qubits();
    let mut probes: Vec<DenseState> = (0..(1usize << r))
        .map(|x| DenseState::basis(r, x))
        .collect::<Result<_>>()?;
    let mut rng = crate::testing::rng(PROBE_SEED ^ r as u64);
    for _ in 0..=r {
        probes.push(crate::testing::random_state(r, &mut rng));
    }

    let mut phase = Complex64::ONE;
    let mut have_phase = false;
    let mut max_residual = 0.0f64;
    for probe in &probes {
        let encoded = encode_logical(code, probe)?;
        let out = apply(&encoded)?;
        let expected = encode_logical(code, &target.apply(probe)?)?;
        let overlap = expected.inner(&out)?;
        if (overlap.norm() - 1.0).abs() > tol::END_TO_END {
            return Ok(LogicalCheck {
                logical: false,
                phase: Complex64::ONE,
                max_residual: f64::MAX,
            });
        }
        if !have_phase {
            phase = overlap / overlap.norm();
            have_phase = true;
        }
        let residual = out.sub(&expected.scale(phase))?.norm();
        max_residual = max_residual.max(residual);
        if residual > tol::END_TO_END {
            return Ok(LogicalCheck {
                logical: false,
                phase,
                max_residual,
            });
        }
    }
    Ok(LogicalCheck {
        logical: true,
        phase,
        max_residual,
    })
}

/// Full verification report for a product operator.
#[derive(Debug, Clone)]
pub struct TransversalReport {
    pub logical: bool,
    pub phase: Complex64,
    pub max_residual: f64,
    pub strongly_transversal: bool,
}

pub fn verify_transversal(
    code: &CodeSpace,
    op: &ProductOperator,
    target: &DenseOperator,
) -> Result<TransversalReport> {
    if op.n_physical() != code.n_physical() {
        return Err(Error::DimensionMismatch {
            expected: code.n_physical(),
            got: op.n_physical(),
        });
    }
    if op.num_blocks() != target.num_qubits() {
        return Err(Error::DimensionMismatch {
            expected: op.num_blocks(),
            got: target.num_qubits(),
        });
    }
    let check = is_logical(code, |state| op.apply(state), target)?;
    Ok(TransversalReport {
        logical: check.logical,
        phase: check.phase,
        max_residual: check.max_residual,
        strongly_transversal: op.is_strongly_transversal(),
    })
}

/// A library hit from [`strongly_transversal_search`].
#[derive(Debug, Clone)]
pub struct SearchHit {
    pub name: String,
    pub report: TransversalReport,
}

/// Tries u^{tensor n} for every library entry against the target.
pub fn strongly_transversal_search(
    code: &CodeSpace,
    target: &DenseOperator,
    library: &[(String, DenseOperator)],
) -> Result<Vec<SearchHit>> {
    let mut hits = Vec::new();
    for (name, u) in library {
        if u.num_qubits() != target.num_qubits() {
            continue;
        }
        let op = ProductOperator::uniform(code.n_physical(), u.clone())?;
        let report = verify_transversal(code, &op, target)?;
        if report.logical {
            hits.push(SearchHit {
                name: name.clone(),
                report,
            });
        }
    }
    Ok(hits)
}
