//! The n-qubit Pauli group over GF(2) bit vectors.
//!
//! A Pauli string is stored as `i^phase_pow * prod_q X^{x_q} Z^{z_q}` with
//! qubit `q` kept at bit `n - 1 - q` of the `x`/`z` masks, matching the
//! register convention of [`crate::qla`] (qubit 0 is most significant). The
//! letter `Y` is `i X Z`, so phases stay exact in `{1, i, -1, -i}`.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qla::{DenseOperator, DenseState};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    num_qubits: usize,
    /// Power of i in {0, 1, 2, 3}.
    phase_pow: u8,
    x: u64,
    z: u64,
}

impl PauliString {
    pub fn identity(num_qubits: usize) -> Self {
        Self {
            num_qubits,
            phase_pow: 0,
            x: 0,
            z: 0,
        }
    }

    /// Builds from bit masks in register order (qubit 0 = most significant
    /// bit of the width-n mask).
    pub fn from_masks(num_qubits: usize, phase_pow: u8, x: u64, z: u64) -> Result<Self> {
        if num_qubits > 64 {
            return Err(Error::Domain("pauli strings cap at 64 qubits".into()));
        }
        let width = if num_qubits == 64 {
            u64::MAX
        } else {
            (1u64 << num_qubits) - 1
        };
        if x & !width != 0 || z & !width != 0 {
            return Err(Error::Domain("mask bits outside the register".into()));
        }
        Ok(Self {
            num_qubits,
            phase_pow: phase_pow % 4,
            x,
            z,
        })
    }

    /// Single-qubit letter placed at `qubit` on an otherwise-identity string.
    pub fn single(num_qubits: usize, qubit: usize, letter: char) -> Result<Self> {
        if qubit >= num_qubits {
            return Err(Error::QubitIndexOutOfRange {
                index: qubit,
                num_qubits,
            });
        }
        let mut s = Self::identity(num_qubits);
        let bit = 1u64 << (num_qubits - 1 - qubit);
        match letter.to_ascii_uppercase() {
            'I' => {}
            'X' => s.x |= bit,
            'Z' => s.z |= bit,
            'Y' => {
                s.x |= bit;
                s.z |= bit;
                s.phase_pow = 1;
            }
            other => return Err(Error::Parse(format!("unknown pauli letter `{other}`"))),
        }
        Ok(s)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn phase_pow(&self) -> u8 {
        self.phase_pow
    }

    pub fn phase(&self) -> Complex64 {
        match self.phase_pow {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    /// X bit of `qubit` (register order).
    pub fn x_bit(&self, qubit: usize) -> bool {
        self.x >> (self.num_qubits - 1 - qubit) & 1 == 1
    }

    pub fn z_bit(&self, qubit: usize) -> bool {
        self.z >> (self.num_qubits - 1 - qubit) & 1 == 1
    }

    /// Number of qubits acted on non-trivially.
    pub fn weight(&self) -> usize {
        (self.x | self.z).count_ones() as usize
    }

    /// Support as qubit indices, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.num_qubits).filter(|&q| self.x_bit(q) || self.z_bit(q)).collect()
    }

    pub fn is_identity_pattern(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Group product `self * other` with exact phase tracking.
    pub fn mul(&self, other: &PauliString) -> Result<PauliString> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.num_qubits,
                got: other.num_qubits,
            });
        }
        // Z^b X^c = (-1)^{|b & c|} X^c Z^b
        let swaps = (self.z & other.x).count_ones() as u8;
        Ok(PauliString {
            num_qubits: self.num_qubits,
            phase_pow: (self.phase_pow + other.phase_pow + 2 * (swaps % 2)) % 4,
            x: self.x ^ other.x,
            z: self.z ^ other.z,
        })
    }

    pub fn adjoint(&self) -> PauliString {
        let overlap = (self.x & self.z).count_ones() as u8;
        PauliString {
            num_qubits: self.num_qubits,
            phase_pow: (4 - self.phase_pow + 2 * (overlap % 2)) % 4,
            x: self.x,
            z: self.z,
        }
    }

    /// Zero symplectic product: the two strings commute as operators.
    pub fn commutes(&self, other: &PauliString) -> Result<bool> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.num_qubits,
                got: other.num_qubits,
            });
        }
        let sym = (self.x & other.z).count_ones() + (self.z & other.x).count_ones();
        Ok(sym % 2 == 0)
    }

    /// Hermitian iff the phase power matches the X/Z overlap parity:
    /// (i^e X^x Z^z)^dag = (-i)^e (-1)^{|x & z|} X^x Z^z, so hermiticity
    /// reduces to e = |x & z| (mod 2).
    pub fn is_hermitian(&self) -> bool {
        let overlap = (self.x & self.z).count_ones() as u8;
        self.phase_pow % 2 == overlap % 2
    }

    /// Applies the string to a state vector in O(2^n).
    pub fn apply_to_state(&self, state: &DenseState) -> Result<DenseState> {
        if self.num_qubits != state.num_qubits() {
            return Err(Error::DimensionMismatch {
                expected: self.num_qubits,
                got: state.num_qubits(),
            });
        }
        let dim = state.dim();
        let phase = self.phase();
        let mut out = vec![Complex64::ZERO; dim];
        let xm = self.x as usize;
        let zm = self.z as usize;
        for (s, amp) in state.amplitudes().iter().enumerate() {
            let sign = if ((s & zm).count_ones()) % 2 == 1 {
                -1.0
            } else {
                1.0
            };
            out[s ^ xm] = phase * Complex64::new(sign, 0.0) * amp;
        }
        DenseState::from_amplitudes(self.num_qubits, &out)
    }

    /// <bra| P |ket> in O(2^n) with no allocation.
    pub fn matrix_element(&self, bra: &DenseState, ket: &DenseState) -> Result<Complex64> {
        if self.num_qubits != bra.num_qubits() || self.num_qubits != ket.num_qubits() {
            return Err(Error::DimensionMismatch {
                expected: self.num_qubits,
                got: bra.num_qubits().max(ket.num_qubits()),
            });
        }
        let xm = self.x as usize;
        let zm = self.z as usize;
        let bra_amps = bra.amplitudes();
        let ket_amps = ket.amplitudes();
        let mut acc = Complex64::ZERO;
        for (s, amp) in ket_amps.iter().enumerate() {
            if ((s & zm).count_ones()) % 2 == 1 {
                acc -= bra_amps[s ^ xm].conj() * amp;
            } else {
                acc += bra_amps[s ^ xm].conj() * amp;
            }
        }
        Ok(self.phase() * acc)
    }

    /// Calls `f` with every Hermitian Pauli of exactly `weight` non-identity
    /// letters, in a fixed deterministic order (supports ascending, letters
    /// X/Y/Z cycling fastest on the lowest support position).
    pub fn for_each_of_weight(num_qubits: usize, weight: usize, f: &mut impl FnMut(&PauliString)) {
        fn rec(
            n: usize,
            weight: usize,
            start: usize,
            depth: usize,
            support: &mut Vec<usize>,
            f: &mut impl FnMut(&PauliString),
        ) {
            if depth == weight {
                let combos = 3usize.pow(weight as u32);
                for code in 0..combos {
                    let mut x = 0u64;
                    let mut z = 0u64;
                    let mut ys = 0u8;
                    let mut rem = code;
                    for &q in support.iter() {
                        let bit = 1u64 << (n - 1 - q);
                        match rem % 3 {
                            0 => x |= bit,
                            1 => {
                                x |= bit;
                                z |= bit;
                                ys += 1;
                            }
                            _ => z |= bit,
                        }
                        rem /= 3;
                    }
                    let p = PauliString::from_masks(n, ys % 4, x, z).unwrap();
                    f(&p);
                }
                return;
            }
            for q in start..n {
                support[depth] = q;
                rec(n, weight, q + 1, depth + 1, support, f);
            }
        }
        if weight == 0 {
            f(&PauliString::identity(num_qubits));
            return;
        }
        let mut support = vec![0usize; weight];
        rec(num_qubits, weight, 0, 0, &mut support, f);
    }

    /// Dense 2^n x 2^n realization (subject to the operator cap).
    pub fn to_dense(&self) -> Result<DenseOperator> {
        let mut acc = DenseOperator::identity(0);
        for q in 0..self.num_qubits {
            let factor = match (self.x_bit(q), self.z_bit(q)) {
                (false, false) => DenseOperator::identity(1),
                (true, false) => crate::qla::gates::x(),
                (false, true) => crate::qla::gates::z(),
                (true, true) => {
                    // X Z = [[0, -1], [1, 0]]
                    DenseOperator::from_rows(
                        1,
                        &[
                            Complex64::ZERO,
                            Complex64::new(-1.0, 0.0),
                            Complex64::ONE,
                            Complex64::ZERO,
                        ],
                    )
                    .unwrap()
                }
            };
            acc = acc.tensor(&factor)?;
        }
        Ok(acc.scale(self.phase()))
    }

    /// Parses text like `XIZZY`, `-iXIZZY`, `+XX`, `iY`.
    pub fn parse(text: &str) -> Result<PauliString> {
        let trimmed = text.trim();
        let (phase_pow, rest) = if let Some(r) = trimmed.strip_prefix("+i") {
            (1u8, r)
        } else if let Some(r) = trimmed.strip_prefix("-i") {
            (3u8, r)
        } else if let Some(r) = trimmed.strip_prefix('i') {
            (1u8, r)
        } else if let Some(r) = trimmed.strip_prefix('+') {
            (0u8, r)
        } else if let Some(r) = trimmed.strip_prefix('-') {
            (2u8, r)
        } else {
            (0u8, trimmed)
        };
        if rest.is_empty() {
            return Err(Error::Parse("empty pauli string".into()));
        }
        if rest.len() > 64 {
            return Err(Error::Parse("pauli strings cap at 64 qubits".into()));
        }
        let n = rest.len();
        let mut acc = PauliString::identity(n);
        acc.phase_pow = phase_pow;
        for (q, ch) in rest.chars().enumerate() {
            let letter = PauliString::single(n, q, ch)
                .map_err(|_| Error::Parse(format!("unknown pauli letter `{ch}` in `{text}`")))?;
            acc = acc.mul(&letter)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Peel off the i contributed by each Y so the printed phase token is
        // the conventional one (Y denotes the Hermitian letter).
        let ys = (self.x & self.z).count_ones() as u8;
        let display_pow = (4 + self.phase_pow - ys % 4) % 4;
        match display_pow {
            0 => {}
            1 => write!(f, "+i")?,
            2 => write!(f, "-")?,
            _ => write!(f, "-i")?,
        }
        for q in 0..self.num_qubits {
            let ch = match (self.x_bit(q), self.z_bit(q)) {
                (false, false) => 'I',
                (true, false) => 'X',
                (false, true) => 'Z',
                (true, true) => 'Y',
            };
            write!(f, "{ch}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qla::gates;
    use proptest::prelude::*;

    fn dense(p: &PauliString) -> DenseOperator {
        p.to_dense().unwrap()
    }

    #[test]
    fn parse_display_roundtrip() {
        for text in ["XIZZY", "-iXIZZY", "-ZZ", "+iY", "I"] {
            let p = PauliString::parse(text).unwrap();
            let q = PauliString::parse(&p.to_string()).unwrap();
            assert_eq!(p, q, "roundtrip failed for {text}");
        }
    }

    #[test]
    fn weight_counts_non_identity_letters() {
        assert_eq!(PauliString::parse("XIZZY").unwrap().weight(), 4);
        assert_eq!(PauliString::parse("IIIII").unwrap().weight(), 0);
    }

    #[test]
    fn single_qubit_commutation() {
        let x1 = PauliString::parse("XI").unwrap();
        let z1 = PauliString::parse("ZI").unwrap();
        let z2 = PauliString::parse("IZ").unwrap();
        assert!(!x1.commutes(&z1).unwrap());
        assert!(x1.commutes(&z2).unwrap());
    }

    #[test]
    fn x_times_z_is_minus_i_y() {
        let x = PauliString::parse("X").unwrap();
        let z = PauliString::parse("Z").unwrap();
        let prod = x.mul(&z).unwrap();
        assert_eq!(prod.to_string(), "-iY");
        // cross-check against dense 2x2 arithmetic
        let dense_prod = gates::x().mul(&gates::z()).unwrap();
        assert!(dense(&prod).sub(&dense_prod).unwrap().frobenius_norm() < 1e-15);
    }

    #[test]
    fn y_matches_standard_matrix() {
        let y = PauliString::parse("Y").unwrap();
        assert!(dense(&y).sub(&gates::y()).unwrap().frobenius_norm() < 1e-15);
    }

    #[test]
    fn apply_to_state_matches_dense() {
        let p = PauliString::parse("-iXZY").unwrap();
        let mut rng = crate::testing::rng(7);
        let psi = crate::testing::random_state(3, &mut rng);
        let fast = p.apply_to_state(&psi).unwrap();
        let slow = dense(&p).apply(&psi).unwrap();
        assert!(fast.sub(&slow).unwrap().norm() < 1e-12);
    }

    #[test]
    fn hermitian_phase_convention() {
        assert!(PauliString::parse("Y").unwrap().is_hermitian());
        assert!(PauliString::parse("-Y").unwrap().is_hermitian());
        assert!(!PauliString::parse("iY").unwrap().is_hermitian());
        assert!(PauliString::parse("XZ").unwrap().is_hermitian());
        assert!(!PauliString::parse("iX").unwrap().is_hermitian());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn mul_matches_dense(xa in 0u64..8, za in 0u64..8, pa in 0u8..4,
                             xb in 0u64..8, zb in 0u64..8, pb in 0u8..4) {
            let a = PauliString::from_masks(3, pa, xa, za).unwrap();
            let b = PauliString::from_masks(3, pb, xb, zb).unwrap();
            let prod = a.mul(&b).unwrap();
            let dense_prod = dense(&a).mul(&dense(&b)).unwrap();
            prop_assert!(dense(&prod).sub(&dense_prod).unwrap().frobenius_norm() < 1e-12);
        }

        #[test]
        fn commutes_matches_dense(xa in 0u64..8, za in 0u64..8,
                                  xb in 0u64..8, zb in 0u64..8) {
            let a = PauliString::from_masks(3, 0, xa, za).unwrap();
            let b = PauliString::from_masks(3, 0, xb, zb).unwrap();
            let ab = dense(&a).mul(&dense(&b)).unwrap();
            let ba = dense(&b).mul(&dense(&a)).unwrap();
            let dense_commute = ab.sub(&ba).unwrap().frobenius_norm() < 1e-12;
            prop_assert_eq!(a.commutes(&b).unwrap(), dense_commute);
        }

        #[test]
        fn adjoint_matches_dense(x in 0u64..8, z in 0u64..8, p in 0u8..4) {
            let a = PauliString::from_masks(3, p, x, z).unwrap();
            let adj = a.adjoint();
            prop_assert!(dense(&adj).sub(&dense(&a).adjoint()).unwrap().frobenius_norm() < 1e-12);
        }

        #[test]
        fn hermitian_iff_dense_hermitian(x in 0u64..8, z in 0u64..8, p in 0u8..4) {
            let a = PauliString::from_masks(3, p, x, z).unwrap();
            prop_assert_eq!(a.is_hermitian(), dense(&a).is_hermitian(1e-12));
        }
    }
}
