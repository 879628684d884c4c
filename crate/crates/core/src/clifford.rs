//! Group commutators and hierarchy-level classification of small unitaries.
//!
//! Level 1 is the Pauli group (up to global phase); level k collects the
//! unitaries whose conjugates of every Pauli land in level k - 1. Membership
//! is decided recursively on the Pauli generators, which suffices because
//! conjugation is a group homomorphism.

use crate::error::{Error, Result};
use crate::pauli::PauliString;
use crate::qla::DenseOperator;
use crate::tol;

/// a b a^dag b^dag for unitary inputs.
pub fn group_commutator(a: &DenseOperator, b: &DenseOperator) -> Result<DenseOperator> {
    a.assert_unitary()?;
    b.assert_unitary()?;
    a.mul(b)?.mul(&a.adjoint())?.mul(&b.adjoint())
}

/// Hierarchy placement of a unitary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HierarchyLevel {
    Level(usize),
    /// Not contained in any level up to the search cap.
    ExceedsMax(usize),
}

impl HierarchyLevel {
    pub fn level(&self) -> Option<usize> {
        match self {
            HierarchyLevel::Level(k) => Some(*k),
            HierarchyLevel::ExceedsMax(_) => None,
        }
    }
}

/// Recognizes `u` as a Pauli string times a global phase.
///
/// Works entry-by-entry: column 0 fixes the X mask and the phase, the other
/// columns must then follow the +-1 sign pattern of some Z mask.
pub fn as_pauli_up_to_phase(u: &DenseOperator, tolerance: f64) -> Option<PauliString> {
    let n = u.num_qubits();
    let dim = u.dim();

    // Column 0: exactly one entry of unit modulus.
    let mut x_row = None;
    for r in 0..dim {
        let v = u.entry(r, 0);
        if v.norm() > tolerance {
            if x_row.is_some() {
                return None;
            }
            x_row = Some(r);
        }
    }
    let x_row = x_row?;
    let phase = u.entry(x_row, 0);
    if (phase.norm() - 1.0).abs() > tolerance {
        return None;
    }

    // Signs: column j must place phase * s_j at row j ^ x_row.
    let mut signs = vec![0i8; dim];
    for j in 0..dim {
        let target = j ^ x_row;
        for r in 0..dim {
            let v = u.entry(r, j);
            if r == target {
                let ratio = v / phase;
                if (ratio.re - 1.0).abs() < tolerance && ratio.im.abs() < tolerance {
                    signs[j] = 1;
                } else if (ratio.re + 1.0).abs() < tolerance && ratio.im.abs() < tolerance {
                    signs[j] = -1;
                } else {
                    return None;
                }
            } else if v.norm() > tolerance {
                return None;
            }
        }
    }

    // Z mask from single-bit columns, then verified everywhere.
    let mut z_mask = 0usize;
    for q in 0..n {
        let j = 1usize << (n - 1 - q);
        if signs[j] == -1 {
            z_mask |= j;
        }
    }
    for (j, &s) in signs.iter().enumerate() {
        let parity = (j & z_mask).count_ones() % 2;
        let expect = if parity == 1 { -1 } else { 1 };
        if s != expect {
            return None;
        }
    }
    PauliString::from_masks(n, 0, x_row as u64, z_mask as u64).ok()
}

fn pauli_generators(n: usize) -> Vec<DenseOperator> {
    let mut gens = Vec::with_capacity(2 * n);
    for q in 0..n {
        for letter in ['X', 'Z'] {
            gens.push(
                PauliString::single(n, q, letter)
                    .unwrap()
                    .to_dense()
                    .unwrap(),
            );
        }
    }
    gens
}

fn in_level(u: &DenseOperator, k: usize, gens: &[DenseOperator]) -> bool {
    if k == 1 {
        return as_pauli_up_to_phase(u, tol::STRUCTURAL).is_some();
    }
    gens.iter().all(|p| {
        let conj = u
            .mul(p)
            .and_then(|up| up.mul(&u.adjoint()))
            .expect("dimension checked by caller");
        in_level(&conj, k - 1, gens)
    })
}

/// Smallest hierarchy level containing `u`, searched up to `max_k`.
pub fn clifford_level(u: &DenseOperator, max_k: usize) -> Result<HierarchyLevel> {
    if u.num_qubits() > 4 {
        return Err(Error::DenseCapExceeded {
            what: "hierarchy classification",
            qubits: u.num_qubits(),
            cap: 4,
        });
    }
    if max_k > 4 {
        return Err(Error::Domain("hierarchy search caps at level 4".into()));
    }
    u.assert_unitary()?;
    let gens = pauli_generators(u.num_qubits());
    for k in 1..=max_k {
        if in_level(u, k, &gens) {
            return Ok(HierarchyLevel::Level(k));
        }
    }
    Ok(HierarchyLevel::ExceedsMax(max_k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qla::gates;
    use num_complex::Complex64;

    #[test]
    fn paulis_sit_at_level_one() {
        for g in [gates::x(), gates::y(), gates::z()] {
            assert_eq!(clifford_level(&g, 4).unwrap(), HierarchyLevel::Level(1));
        }
    }

    #[test]
    fn clifford_gates_sit_at_level_two() {
        for g in [gates::h(), gates::s_gate(), gates::cx(), gates::cz()] {
            assert_eq!(clifford_level(&g, 4).unwrap(), HierarchyLevel::Level(2));
        }
    }

    #[test]
    fn control_control_gates_sit_at_level_three() {
        for g in [gates::toffoli(), gates::ccz(), gates::t_gate()] {
            assert_eq!(clifford_level(&g, 4).unwrap(), HierarchyLevel::Level(3));
        }
    }

    #[test]
    fn phase_shifted_pauli_is_still_level_one() {
        let g = gates::x().scale(Complex64::new(0.0, 1.0));
        assert_eq!(clifford_level(&g, 4).unwrap(), HierarchyLevel::Level(1));
    }

    #[test]
    fn generic_rotation_exceeds_the_cap() {
        // eighth-root phase gate: conjugating X yields a gate outside C_3
        let g = DenseOperator::from_rows(
            1,
            &[
                Complex64::ONE,
                Complex64::ZERO,
                Complex64::ZERO,
                Complex64::from_polar(1.0, std::f64::consts::PI / 8.0),
            ],
        )
        .unwrap();
        assert_eq!(
            clifford_level(&g, 4).unwrap(),
            HierarchyLevel::Level(4)
        );
    }

    #[test]
    fn commutator_identities() {
        // Toffoli(controls 0,1; target 2) against X on control 0 gives
        // CX(control 1, target 2).
        let toff = gates::toffoli();
        let x0 = PauliString::parse("XII").unwrap().to_dense().unwrap();
        let comm = group_commutator(&toff, &x0).unwrap();
        let cx12 = gates::cx().tensor(&DenseOperator::identity(1)).unwrap()
            .permute_qubits(&[1, 2, 0])
            .unwrap();
        assert!(comm.sub(&cx12).unwrap().frobenius_norm() < 1e-12);

        // CX against Z on its target gives Z on its control.
        let cx = gates::cx();
        let z_target = PauliString::parse("IZ").unwrap().to_dense().unwrap();
        let z_control = PauliString::parse("ZI").unwrap().to_dense().unwrap();
        let comm = group_commutator(&cx, &z_target).unwrap();
        assert!(comm.sub(&z_control).unwrap().frobenius_norm() < 1e-12);

        // An element commutes with itself.
        let comm = group_commutator(&gates::x(), &gates::x()).unwrap();
        assert!(comm.sub(&DenseOperator::identity(1)).unwrap().frobenius_norm() < 1e-12);
    }

    #[test]
    fn conjugation_lowers_the_level() {
        // level(u) = k implies level(u P u^dag) <= k - 1 for Pauli generators
        let gens = pauli_generators(3);
        for u in [gates::toffoli(), gates::ccz()] {
            let k = clifford_level(&u, 4).unwrap().level().unwrap();
            for p in &gens {
                let conj = u.mul(p).unwrap().mul(&u.adjoint()).unwrap();
                let lvl = clifford_level(&conj, 4).unwrap().level().unwrap();
                assert!(lvl <= k - 1);
            }
        }
    }
}
