//! Erasure recovery.
//!
//! Two routes are provided. [`erasure_recover`] applies the transpose
//! recovery channel built from the code projector and the erasure channel to
//! a density operator on the full register; it is exact for correctable
//! erasure patterns. [`ErasureDecoder`] realizes the same recovery as an
//! isometry on the kept qubits of a state vector, which scales to
//! multi-block registers where densities are out of reach. The two routes
//! are cross-checked in the tests.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qla::{DenseOperator, DenseState};
use crate::tol;

use super::CodeSpace;

fn validate_pattern(code: &CodeSpace, erased: &[usize]) -> Result<Vec<usize>> {
    let n = code.n_physical();
    let mut sorted = erased.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != erased.len() {
        return Err(Error::Domain("repeated qubit in erasure pattern".into()));
    }
    for &q in &sorted {
        if q >= n {
            return Err(Error::QubitIndexOutOfRange {
                index: q,
                num_qubits: n,
            });
        }
    }
    if sorted.len() >= n {
        return Err(Error::Domain("cannot erase the whole register".into()));
    }
    Ok(sorted)
}

/// Transpose-channel recovery: traces out the erased qubits, conjugates by
/// the inverse square root of the code's erased-marginal, re-embeds fresh
/// qubits, and projects back through the code projector.
///
/// For inputs of the form (V on erased) |psi_L>, the output is |psi_L><psi_L|
/// exactly, up to numerical tolerance.
pub fn erasure_recover(
    code: &CodeSpace,
    erased: &[usize],
    corrupted: &DenseOperator,
) -> Result<DenseOperator> {
    let n = code.n_physical();
    if corrupted.num_qubits() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: corrupted.num_qubits(),
        });
    }
    let erased = validate_pattern(code, erased)?;
    let d = code.distance()?;
    if erased.len() + 1 > d {
        return Err(Error::PatternTooLarge {
            erased: erased.len(),
            budget: d - 1,
        });
    }
    if erased.is_empty() {
        return Ok(corrupted.clone());
    }
    let keep: Vec<usize> = (0..n).filter(|q| !erased.contains(q)).collect();

    let projector = code.projector()?;
    let sigma = projector.scale(Complex64::new(0.5, 0.0));
    let sqrt_sigma = projector.scale(Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0));

    // Marginal of the reference state on the kept qubits, pseudo-inverted on
    // its support.
    let marginal = sigma.partial_trace(&keep)?;
    let max_eig = marginal
        .hermitian_eigenvalues()
        .into_iter()
        .fold(0.0f64, f64::max);
    let cutoff = max_eig * 1e-12;
    let whitener = marginal.hermitian_map(|e| if e > cutoff { 1.0 / e.sqrt() } else { 0.0 });

    let tau = corrupted.partial_trace(&keep)?;
    let conditioned = whitener.mul(&tau)?.mul(&whitener)?;

    // Adjoint of the erasure channel: tensor with identity on the erased
    // qubits, then put everything back in register order.
    let embedded = conditioned.tensor(&DenseOperator::identity(erased.len()))?;
    let mut perm = vec![0usize; n];
    for (pos, &q) in keep.iter().enumerate() {
        perm[pos] = q;
    }
    for (pos, &q) in erased.iter().enumerate() {
        perm[keep.len() + pos] = q;
    }
    let embedded = embedded.permute_qubits(&perm)?;

    let out = sqrt_sigma.mul(&embedded)?.mul(&sqrt_sigma)?;
    let trace = out.trace().re;
    if trace < 1e-9 {
        return Err(Error::RecoveryFailed(
            "recovered state has vanishing trace".into(),
        ));
    }
    Ok(out.scale(Complex64::new(1.0 / trace, 0.0)))
}

/// Isometric erasure decoder acting on the kept qubits of one code block.
///
/// Applying [`ErasureDecoder::matrix`] to the kept qubits maps any state of
/// the form (V on erased) |psi_L> to |psi> on a fresh logical qubit,
/// tensored with junk that carries whatever V did. The decoder is built from
/// the Gram structure of the logical basis viewed from the kept qubits; its
/// construction fails exactly when the pattern is not erasure-correctable.
#[derive(Debug, Clone)]
pub struct ErasureDecoder {
    erased: Vec<usize>,
    keep: Vec<usize>,
    /// (2 * 2^{|erased|}) x 2^{|keep|}; rows indexed by (logical bit, junk).
    matrix: DMatrix<Complex64>,
}

impl ErasureDecoder {
    pub fn build(code: &CodeSpace, erased: &[usize]) -> Result<Self> {
        let n = code.n_physical();
        let erased = validate_pattern(code, erased)?;
        let keep: Vec<usize> = (0..n).filter(|q| !erased.contains(q)).collect();
        let em = 1usize << erased.len();
        let km = 1usize << keep.len();

        // u[i][k][t]: amplitude of logical state i at erased index k, kept
        // index t.
        let mut u = vec![vec![vec![Complex64::ZERO; km]; em]; 2];
        for (i, state) in [code.logical_zero(), code.logical_one()].iter().enumerate() {
            for k in 0..em {
                for t in 0..km {
                    let mut idx = 0usize;
                    for (pos, &q) in erased.iter().enumerate() {
                        let bit = (k >> (erased.len() - 1 - pos)) & 1;
                        idx |= bit << (n - 1 - q);
                    }
                    for (pos, &q) in keep.iter().enumerate() {
                        let bit = (t >> (keep.len() - 1 - pos)) & 1;
                        idx |= bit << (n - 1 - q);
                    }
                    u[i][k][t] = state.amplitude(idx);
                }
            }
        }

        // Gram matrices of the kept-side vectors; correctability demands the
        // two diagonal blocks agree and the cross block vanishes.
        let inner = |a: &[Complex64], b: &[Complex64]| -> Complex64 {
            a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
        };
        let mut gram = DMatrix::<Complex64>::zeros(em, em);
        for l in 0..em {
            for k in 0..em {
                gram[(l, k)] = inner(&u[0][l], &u[0][k]);
                let g1 = inner(&u[1][l], &u[1][k]);
                if (gram[(l, k)] - g1).norm() > tol::END_TO_END {
                    return Err(Error::RecoveryFailed(format!(
                        "pattern {erased:?} is not erasure-correctable (diagonal mismatch {:.3e})",
                        (gram[(l, k)] - g1).norm()
                    )));
                }
                let cross = inner(&u[0][l], &u[1][k]);
                if cross.norm() > tol::END_TO_END {
                    return Err(Error::RecoveryFailed(format!(
                        "pattern {erased:?} is not erasure-correctable (cross overlap {:.3e})",
                        cross.norm()
                    )));
                }
            }
        }

        let eig = nalgebra::SymmetricEigen::new(gram);
        let mut matrix = DMatrix::<Complex64>::zeros(2 * em, km);
        for alpha in 0..em {
            let lambda = eig.eigenvalues[alpha];
            if lambda <= 1e-12 {
                continue;
            }
            let scale = 1.0 / lambda.sqrt();
            for i in 0..2 {
                // w_{i,alpha}[t] = scale * sum_l v_alpha[l] u[i][l][t]
                let row = i * em + alpha;
                for t in 0..km {
                    let mut w = Complex64::ZERO;
                    for l in 0..em {
                        w += eig.eigenvectors[(l, alpha)] * u[i][l][t];
                    }
                    // decoder rows are bras
                    matrix[(row, t)] = (w * Complex64::new(scale, 0.0)).conj();
                }
            }
        }

        Ok(Self {
            erased,
            keep,
            matrix,
        })
    }

    pub fn erased(&self) -> &[usize] {
        &self.erased
    }

    pub fn keep(&self) -> &[usize] {
        &self.keep
    }

    /// Output register width: one logical qubit plus |erased| junk qubits.
    pub fn output_qubits(&self) -> usize {
        1 + self.erased.len()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// Decodes the block whose kept qubits sit at `targets` (absolute
    /// indices, in the order of [`Self::keep`]); the replacement qubits land
    /// at the front of the output register.
    pub fn apply(&self, state: &DenseState, targets: &[usize]) -> Result<DenseState> {
        if targets.len() != self.keep.len() {
            return Err(Error::DimensionMismatch {
                expected: self.keep.len(),
                got: targets.len(),
            });
        }
        state.apply_isometry(&self.matrix, targets)
    }
}
