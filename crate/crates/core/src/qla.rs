//! Dense complex linear algebra over ordered qubit registers.
//!
//! Qubit 0 is the most significant tensor factor throughout the crate: the
//! computational basis index of an `n`-qubit register carries qubit `q` in
//! bit `n - 1 - q`. Tensor products put the left operand on the high-order
//! qubits, so `tensor` is a plain Kronecker product.
//!
//! All values are immutable after construction; every operation returns a
//! fresh value.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

pub mod gates;

/// Dense operator on a register of `num_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    num_qubits: usize,
    mat: DMatrix<Complex64>,
}

/// Dense column state on a register of `num_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseState {
    num_qubits: usize,
    vec: DVector<Complex64>,
}

#[inline]
pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub(crate) fn cr(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn check_state_cap(num_qubits: usize) -> Result<()> {
    if num_qubits > tol::MAX_STATE_QUBITS {
        return Err(Error::DenseCapExceeded {
            what: "state vector",
            qubits: num_qubits,
            cap: tol::MAX_STATE_QUBITS,
        });
    }
    Ok(())
}

fn check_operator_cap(num_qubits: usize) -> Result<()> {
    if num_qubits > tol::MAX_OPERATOR_QUBITS {
        return Err(Error::DenseCapExceeded {
            what: "dense operator",
            qubits: num_qubits,
            cap: tol::MAX_OPERATOR_QUBITS,
        });
    }
    Ok(())
}

/// Index remap for a qubit permutation: output qubit `perm[q]` carries input
/// qubit `q`. Returns, for every input basis index, the output basis index.
fn permutation_index_map(num_qubits: usize, perm: &[usize]) -> Result<Vec<usize>> {
    if perm.len() != num_qubits {
        return Err(Error::InvalidPermutation);
    }
    let mut seen = vec![false; num_qubits];
    for &p in perm {
        if p >= num_qubits || seen[p] {
            return Err(Error::InvalidPermutation);
        }
        seen[p] = true;
    }
    let dim = 1usize << num_qubits;
    let mut map = vec![0usize; dim];
    for (idx, slot) in map.iter_mut().enumerate() {
        let mut out = 0usize;
        for (q, &p) in perm.iter().enumerate() {
            let bit = (idx >> (num_qubits - 1 - q)) & 1;
            out |= bit << (num_qubits - 1 - p);
        }
        *slot = out;
    }
    Ok(map)
}

fn validate_keep(keep: &[usize], num_qubits: usize) -> Result<()> {
    let mut seen = vec![false; num_qubits];
    for &q in keep {
        if q >= num_qubits {
            return Err(Error::QubitIndexOutOfRange {
                index: q,
                num_qubits,
            });
        }
        if seen[q] {
            return Err(Error::InvalidPermutation);
        }
        seen[q] = true;
    }
    Ok(())
}

impl DenseOperator {
    /// Wraps an explicit matrix, validating the 2^n x 2^n shape.
    pub fn from_matrix(num_qubits: usize, mat: DMatrix<Complex64>) -> Result<Self> {
        check_operator_cap(num_qubits)?;
        let dim = 1usize << num_qubits;
        if mat.nrows() != dim || mat.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: mat.nrows().max(mat.ncols()),
            });
        }
        Ok(Self { num_qubits, mat })
    }

    pub fn from_rows(num_qubits: usize, rows: &[Complex64]) -> Result<Self> {
        let dim = 1usize << num_qubits;
        if rows.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: rows.len(),
            });
        }
        Self::from_matrix(num_qubits, DMatrix::from_row_slice(dim, dim, rows))
    }

    pub fn identity(num_qubits: usize) -> Self {
        let dim = 1usize << num_qubits;
        Self {
            num_qubits,
            mat: DMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(num_qubits: usize) -> Self {
        let dim = 1usize << num_qubits;
        Self {
            num_qubits,
            mat: DMatrix::zeros(dim, dim),
        }
    }

    /// Maximally mixed state I / 2^n.
    pub fn maximally_mixed(num_qubits: usize) -> Self {
        let dim = 1usize << num_qubits;
        let mut op = Self::identity(num_qubits);
        op.mat /= cr(dim as f64);
        op
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        1usize << self.num_qubits
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.mat
    }

    #[inline]
    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.mat[(row, col)]
    }

    /// Kronecker product; `self` lands on the high-order qubits.
    pub fn tensor(&self, other: &DenseOperator) -> Result<DenseOperator> {
        check_operator_cap(self.num_qubits + other.num_qubits)?;
        Ok(DenseOperator {
            num_qubits: self.num_qubits + other.num_qubits,
            mat: self.mat.kronecker(&other.mat),
        })
    }

    pub fn mul(&self, other: &DenseOperator) -> Result<DenseOperator> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.num_qubits,
                got: other.num_qubits,
            });
        }
        Ok(DenseOperator {
            num_qubits: self.num_qubits,
            mat: &self.mat * &other.mat,
        })
    }

    pub fn add(&self, other: &DenseOperator) -> Result<DenseOperator> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.num_qubits,
                got: other.num_qubits,
            });
        }
        Ok(DenseOperator {
            num_qubits: self.num_qubits,
            mat: &self.mat + &other.mat,
        })
    }

    pub fn sub(&self, other: &DenseOperator) -> Result<DenseOperator> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.num_qubits,
                got: other.num_qubits,
            });
        }
        Ok(DenseOperator {
            num_qubits: self.num_qubits,
            mat: &self.mat - &other.mat,
        })
    }

    pub fn scale(&self, factor: Complex64) -> DenseOperator {
        DenseOperator {
            num_qubits: self.num_qubits,
            mat: &self.mat * factor,
        }
    }

    pub fn adjoint(&self) -> DenseOperator {
        DenseOperator {
            num_qubits: self.num_qubits,
            mat: self.mat.adjoint(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.mat.diagonal().iter().sum()
    }

    /// Tr(self * other) without forming the product matrix.
    pub fn trace_product(&self, other: &DenseOperator) -> Result<Complex64> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.num_qubits,
                got: other.num_qubits,
            });
        }
        let dim = self.dim();
        let mut acc = Complex64::ZERO;
        for i in 0..dim {
            for j in 0..dim {
                acc += self.mat[(i, j)] * other.mat[(j, i)];
            }
        }
        Ok(acc)
    }

    /// Tr(self^2), real for Hermitian inputs.
    pub fn purity(&self) -> f64 {
        let dim = self.dim();
        let mut acc = Complex64::ZERO;
        for i in 0..dim {
            for j in 0..dim {
                acc += self.mat[(i, j)] * self.mat[(j, i)];
            }
        }
        acc.re
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.mat.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_hermitian(&self, tolerance: f64) -> bool {
        let dim = self.dim();
        for i in 0..dim {
            for j in i..dim {
                if (self.mat[(i, j)] - self.mat[(j, i)].conj()).norm() > tolerance {
                    return false;
                }
            }
        }
        true
    }

    pub fn unitarity_deviation(&self) -> f64 {
        let dim = self.dim();
        let prod = &self.mat * self.mat.adjoint();
        let mut acc = 0.0f64;
        for i in 0..dim {
            for j in 0..dim {
                let expect = if i == j { Complex64::ONE } else { Complex64::ZERO };
                acc += (prod[(i, j)] - expect).norm_sqr();
            }
        }
        acc.sqrt()
    }

    pub fn is_unitary(&self, tolerance: f64) -> bool {
        self.unitarity_deviation() <= tolerance
    }

    pub fn assert_unitary(&self) -> Result<()> {
        let deviation = self.unitarity_deviation();
        if deviation > tol::STRUCTURAL {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(())
    }

    /// Validates the density-operator invariants: Hermitian, PSD, unit trace.
    pub fn validate_density(&self) -> Result<()> {
        if !self.is_hermitian(tol::STRUCTURAL) {
            return Err(Error::NotDensity {
                reason: "not Hermitian".into(),
            });
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > tol::STRUCTURAL || tr.im.abs() > tol::STRUCTURAL {
            return Err(Error::NotDensity {
                reason: format!("trace {} is not 1", tr),
            });
        }
        let eigs = self.hermitian_eigenvalues();
        let min = eigs.iter().copied().fold(f64::INFINITY, f64::min);
        if min < -tol::STRUCTURAL {
            return Err(Error::NotDensity {
                reason: format!("minimum eigenvalue {min:.3e} is negative"),
            });
        }
        Ok(())
    }

    /// Real eigenvalues, assuming the operator is Hermitian.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        self.mat
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect()
    }

    /// Number of eigenvalues above `cutoff` (Hermitian path).
    pub fn rank(&self, cutoff: f64) -> usize {
        self.hermitian_eigenvalues()
            .iter()
            .filter(|&&e| e > cutoff)
            .count()
    }

    /// Applies a real function to the spectrum of a Hermitian operator.
    pub fn hermitian_map(&self, f: impl Fn(f64) -> f64) -> DenseOperator {
        let eig = nalgebra::SymmetricEigen::new(self.mat.clone());
        let dim = self.dim();
        let mut diag = DMatrix::<Complex64>::zeros(dim, dim);
        for i in 0..dim {
            diag[(i, i)] = cr(f(eig.eigenvalues[i]));
        }
        let mat = &eig.eigenvectors * diag * eig.eigenvectors.adjoint();
        DenseOperator {
            num_qubits: self.num_qubits,
            mat,
        }
    }

    /// Schatten 1-norm: sum of singular values. Hermitian inputs go through
    /// the eigensolver; everything else falls back to an SVD.
    pub fn trace_norm(&self) -> f64 {
        if self.is_hermitian(tol::STRUCTURAL) {
            self.hermitian_eigenvalues().iter().map(|e| e.abs()).sum()
        } else {
            self.mat
                .clone()
                .singular_values()
                .iter()
                .copied()
                .sum::<f64>()
        }
    }

    /// Raw 1-norm distance ||a - b||_1 (no 1/2 factor).
    pub fn trace_distance(&self, other: &DenseOperator) -> Result<f64> {
        Ok(self.sub(other)?.trace_norm())
    }

    /// Traces out every qubit not listed in `keep`. The output register
    /// follows the order given in `keep`.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DenseOperator> {
        validate_keep(keep, self.num_qubits)?;
        let n = self.num_qubits;
        let kept = keep.len();
        let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
        let out_dim = 1usize << kept;
        let env_dim = 1usize << traced.len();
        let mut out = DMatrix::<Complex64>::zeros(out_dim, out_dim);

        // Scatter (kept-index, env-index) pairs back into full basis indices.
        let place = |kept_idx: usize, env_idx: usize| -> usize {
            let mut full = 0usize;
            for (pos, &q) in keep.iter().enumerate() {
                let bit = (kept_idx >> (kept - 1 - pos)) & 1;
                full |= bit << (n - 1 - q);
            }
            for (pos, &q) in traced.iter().enumerate() {
                let bit = (env_idx >> (traced.len() - 1 - pos)) & 1;
                full |= bit << (n - 1 - q);
            }
            full
        };

        for i in 0..out_dim {
            for j in 0..out_dim {
                let mut acc = Complex64::ZERO;
                for e in 0..env_dim {
                    acc += self.mat[(place(i, e), place(j, e))];
                }
                out[(i, j)] = acc;
            }
        }
        Ok(DenseOperator {
            num_qubits: kept,
            mat: out,
        })
    }

    /// Conjugation by the qubit-permutation unitary sending input qubit `q`
    /// to output qubit `perm[q]`.
    pub fn permute_qubits(&self, perm: &[usize]) -> Result<DenseOperator> {
        let map = permutation_index_map(self.num_qubits, perm)?;
        let dim = self.dim();
        let mut out = DMatrix::<Complex64>::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                out[(map[i], map[j])] = self.mat[(i, j)];
            }
        }
        Ok(DenseOperator {
            num_qubits: self.num_qubits,
            mat: out,
        })
    }

    /// Applies the operator to a state: self |psi>.
    pub fn apply(&self, state: &DenseState) -> Result<DenseState> {
        if self.num_qubits != state.num_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.num_qubits,
                got: state.num_qubits,
            });
        }
        Ok(DenseState {
            num_qubits: state.num_qubits,
            vec: &self.mat * &state.vec,
        })
    }
}

impl DenseState {
    pub fn from_amplitudes(num_qubits: usize, amps: &[Complex64]) -> Result<Self> {
        check_state_cap(num_qubits)?;
        let dim = 1usize << num_qubits;
        if amps.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: amps.len(),
            });
        }
        Ok(Self {
            num_qubits,
            vec: DVector::from_column_slice(amps),
        })
    }

    pub fn from_vector(num_qubits: usize, vec: DVector<Complex64>) -> Result<Self> {
        check_state_cap(num_qubits)?;
        let dim = 1usize << num_qubits;
        if vec.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: vec.len(),
            });
        }
        Ok(Self { num_qubits, vec })
    }

    /// Computational basis state |index> on `num_qubits` qubits.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        check_state_cap(num_qubits)?;
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::QubitIndexOutOfRange {
                index,
                num_qubits,
            });
        }
        let mut vec = DVector::zeros(dim);
        vec[index] = Complex64::ONE;
        Ok(Self { num_qubits, vec })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        1usize << self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        self.vec.as_slice()
    }

    #[inline]
    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.vec[index]
    }

    pub fn tensor(&self, other: &DenseState) -> Result<DenseState> {
        check_state_cap(self.num_qubits + other.num_qubits)?;
        Ok(DenseState {
            num_qubits: self.num_qubits + other.num_qubits,
            vec: self.vec.kronecker(&other.vec),
        })
    }

    pub fn inner(&self, other: &DenseState) -> Result<Complex64> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.num_qubits,
                got: other.num_qubits,
            });
        }
        Ok(self.vec.dotc(&other.vec))
    }

    pub fn norm(&self) -> f64 {
        self.vec.norm()
    }

    pub fn normalized(&self) -> Result<DenseState> {
        let n = self.norm();
        if n < 1e-300 {
            return Err(Error::NotDensity {
                reason: "cannot normalize the zero vector".into(),
            });
        }
        Ok(DenseState {
            num_qubits: self.num_qubits,
            vec: &self.vec / cr(n),
        })
    }

    pub fn scale(&self, factor: Complex64) -> DenseState {
        DenseState {
            num_qubits: self.num_qubits,
            vec: &self.vec * factor,
        }
    }

    pub fn add(&self, other: &DenseState) -> Result<DenseState> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.num_qubits,
                got: other.num_qubits,
            });
        }
        Ok(DenseState {
            num_qubits: self.num_qubits,
            vec: &self.vec + &other.vec,
        })
    }

    pub fn sub(&self, other: &DenseState) -> Result<DenseState> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.num_qubits,
                got: other.num_qubits,
            });
        }
        Ok(DenseState {
            num_qubits: self.num_qubits,
            vec: &self.vec - &other.vec,
        })
    }

    /// |psi><psi| as a dense operator (subject to the operator cap).
    pub fn density(&self) -> Result<DenseOperator> {
        check_operator_cap(self.num_qubits)?;
        let dim = self.dim();
        let mut mat = DMatrix::<Complex64>::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                mat[(i, j)] = self.vec[i] * self.vec[j].conj();
            }
        }
        Ok(DenseOperator {
            num_qubits: self.num_qubits,
            mat,
        })
    }

    /// Reduced density operator on `keep`, computed directly from the state
    /// vector so the full density matrix is never materialized. The output
    /// register follows the order given in `keep`.
    pub fn reduced_density(&self, keep: &[usize]) -> Result<DenseOperator> {
        validate_keep(keep, self.num_qubits)?;
        check_operator_cap(keep.len())?;
        let n = self.num_qubits;
        let kept = keep.len();
        let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
        let out_dim = 1usize << kept;
        let env_dim = 1usize << traced.len();
        let mut out = DMatrix::<Complex64>::zeros(out_dim, out_dim);

        let place = |kept_idx: usize, env_idx: usize| -> usize {
            let mut full = 0usize;
            for (pos, &q) in keep.iter().enumerate() {
                let bit = (kept_idx >> (kept - 1 - pos)) & 1;
                full |= bit << (n - 1 - q);
            }
            for (pos, &q) in traced.iter().enumerate() {
                let bit = (env_idx >> (traced.len() - 1 - pos)) & 1;
                full |= bit << (n - 1 - q);
            }
            full
        };

        for e in 0..env_dim {
            for i in 0..out_dim {
                let a = self.vec[place(i, e)];
                if a.norm_sqr() < 1e-300 {
                    continue;
                }
                for j in 0..out_dim {
                    out[(i, j)] += a * self.vec[place(j, e)].conj();
                }
            }
        }
        Ok(DenseOperator {
            num_qubits: kept,
            mat: out,
        })
    }

    pub fn permute_qubits(&self, perm: &[usize]) -> Result<DenseState> {
        let map = permutation_index_map(self.num_qubits, perm)?;
        let dim = self.dim();
        let mut vec = DVector::zeros(dim);
        for i in 0..dim {
            vec[map[i]] = self.vec[i];
        }
        Ok(DenseState {
            num_qubits: self.num_qubits,
            vec,
        })
    }

    /// Applies a rectangular matrix (2^k_out rows, 2^k cols) to the listed
    /// target qubits, replacing them with `k_out` fresh qubits. The fresh
    /// qubits land at the front of the output register; untouched qubits
    /// follow in their original relative order.
    pub fn apply_isometry(
        &self,
        matrix: &DMatrix<Complex64>,
        targets: &[usize],
    ) -> Result<DenseState> {
        let k = targets.len();
        validate_keep(targets, self.num_qubits)?;
        if matrix.ncols() != 1 << k || !matrix.nrows().is_power_of_two() {
            return Err(Error::DimensionMismatch {
                expected: 1 << k,
                got: matrix.ncols(),
            });
        }
        let k_out = matrix.nrows().trailing_zeros() as usize;
        let n = self.num_qubits;
        let n_out = n - k + k_out;
        check_state_cap(n_out)?;
        let rest: Vec<usize> = (0..n).filter(|q| !targets.contains(q)).collect();
        let rest_dim = 1usize << rest.len();
        let in_dim = 1usize << k;
        let out_dim_block = 1usize << k_out;
        let mut out = DVector::<Complex64>::zeros(1 << n_out);

        for r in 0..rest_dim {
            let mut base = 0usize;
            for (pos, &q) in rest.iter().enumerate() {
                let bit = (r >> (rest.len() - 1 - pos)) & 1;
                base |= bit << (n - 1 - q);
            }
            for a_out in 0..out_dim_block {
                let mut acc = Complex64::ZERO;
                for b in 0..in_dim {
                    let m = matrix[(a_out, b)];
                    if m == Complex64::ZERO {
                        continue;
                    }
                    let mut idx = base;
                    for (pos, &q) in targets.iter().enumerate() {
                        let bit = (b >> (k - 1 - pos)) & 1;
                        idx |= bit << (n - 1 - q);
                    }
                    acc += m * self.vec[idx];
                }
                // output index: fresh qubits at the front, rest following
                let out_idx = (a_out << rest.len()) | r;
                out[out_idx] = acc;
            }
        }
        Ok(DenseState {
            num_qubits: n_out,
            vec: out,
        })
    }

    /// Applies a k-qubit gate to the listed target qubits. `targets[0]`
    /// corresponds to the gate's most significant qubit. Targets must be
    /// distinct but need not be contiguous or ordered.
    pub fn apply_gate(&self, gate: &DenseOperator, targets: &[usize]) -> Result<DenseState> {
        let k = targets.len();
        if gate.num_qubits != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                got: gate.num_qubits,
            });
        }
        validate_keep(targets, self.num_qubits)?;
        let n = self.num_qubits;
        let gd = 1usize << k;
        let rest: Vec<usize> = (0..n).filter(|q| !targets.contains(q)).collect();
        let rest_dim = 1usize << rest.len();

        let mut out = self.vec.clone();
        let mut gathered = vec![Complex64::ZERO; gd];
        let mut indices = vec![0usize; gd];

        for r in 0..rest_dim {
            let mut base = 0usize;
            for (pos, &q) in rest.iter().enumerate() {
                let bit = (r >> (rest.len() - 1 - pos)) & 1;
                base |= bit << (n - 1 - q);
            }
            for a in 0..gd {
                let mut idx = base;
                for (pos, &q) in targets.iter().enumerate() {
                    let bit = (a >> (k - 1 - pos)) & 1;
                    idx |= bit << (n - 1 - q);
                }
                indices[a] = idx;
                gathered[a] = out[idx];
            }
            for a in 0..gd {
                let mut acc = Complex64::ZERO;
                for b in 0..gd {
                    let g = gate.mat[(a, b)];
                    if g != Complex64::ZERO {
                        acc += g * gathered[b];
                    }
                }
                out[indices[a]] = acc;
            }
        }
        Ok(DenseState {
            num_qubits: n,
            vec: out,
        })
    }
}

/// Binary entropy in bits, with 0 log 0 = 0.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(Error::Domain(format!("binary_entropy({p}) outside [0, 1]")));
    }
    let term = |x: f64| if x <= 0.0 { 0.0 } else { -x * x.log2() };
    Ok(term(p) + term(1.0 - p))
}
