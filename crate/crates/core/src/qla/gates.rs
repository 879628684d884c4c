//! Standard gate matrices.

use crate::error::{Error, Result};
use crate::qla::{c, cr, DenseOperator};

pub fn x() -> DenseOperator {
    DenseOperator::from_rows(1, &[cr(0.0), cr(1.0), cr(1.0), cr(0.0)]).unwrap()
}

pub fn y() -> DenseOperator {
    DenseOperator::from_rows(1, &[cr(0.0), c(0.0, -1.0), c(0.0, 1.0), cr(0.0)]).unwrap()
}

pub fn z() -> DenseOperator {
    DenseOperator::from_rows(1, &[cr(1.0), cr(0.0), cr(0.0), cr(-1.0)]).unwrap()
}

pub fn h() -> DenseOperator {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    DenseOperator::from_rows(1, &[cr(s), cr(s), cr(s), cr(-s)]).unwrap()
}

pub fn s_gate() -> DenseOperator {
    DenseOperator::from_rows(1, &[cr(1.0), cr(0.0), cr(0.0), c(0.0, 1.0)]).unwrap()
}

pub fn t_gate() -> DenseOperator {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    DenseOperator::from_rows(1, &[cr(1.0), cr(0.0), cr(0.0), c(s, s)]).unwrap()
}

/// CX with qubit 0 as control, qubit 1 as target.
pub fn cx() -> DenseOperator {
    let mut m = DenseOperator::identity(2).into_matrix();
    m.swap_rows(2, 3);
    DenseOperator::from_matrix(2, m).unwrap()
}

pub fn cz() -> DenseOperator {
    let mut m = DenseOperator::identity(2).into_matrix();
    m[(3, 3)] = cr(-1.0);
    DenseOperator::from_matrix(2, m).unwrap()
}

pub fn swap() -> DenseOperator {
    let mut m = DenseOperator::identity(2).into_matrix();
    m.swap_rows(1, 2);
    DenseOperator::from_matrix(2, m).unwrap()
}

/// Toffoli with qubits 0, 1 as controls, qubit 2 as target.
pub fn toffoli() -> DenseOperator {
    let mut m = DenseOperator::identity(3).into_matrix();
    m.swap_rows(6, 7);
    DenseOperator::from_matrix(3, m).unwrap()
}

pub fn ccz() -> DenseOperator {
    let mut m = DenseOperator::identity(3).into_matrix();
    m[(7, 7)] = cr(-1.0);
    DenseOperator::from_matrix(3, m).unwrap()
}

/// Looks up a gate by name (case-insensitive). Accepts the register-width
/// identity as `I`, `I2`, `I3`.
pub fn named(name: &str) -> Result<DenseOperator> {
    match name.to_ascii_uppercase().as_str() {
        "I" | "I1" | "ID" => Ok(DenseOperator::identity(1)),
        "I2" => Ok(DenseOperator::identity(2)),
        "I3" => Ok(DenseOperator::identity(3)),
        "X" => Ok(x()),
        "Y" => Ok(y()),
        "Z" => Ok(z()),
        "H" => Ok(h()),
        "S" => Ok(s_gate()),
        "T" => Ok(t_gate()),
        "CX" | "CNOT" => Ok(cx()),
        "CZ" => Ok(cz()),
        "SWAP" => Ok(swap()),
        "TOFF" | "TOFFOLI" | "CCX" => Ok(toffoli()),
        "CCZ" => Ok(ccz()),
        other => Err(Error::UnknownGate(other.to_string())),
    }
}

/// Parses a gate name and reports its qubit count.
pub fn arity(name: &str) -> Result<usize> {
    Ok(named(name)?.num_qubits())
}
