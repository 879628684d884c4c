//! Text formats for codes and stabilizer groups.
//!
//! A code file carries either a `stabilizer:` section (one generator per
//! line, Pauli notation, optional `logical_x:` / `logical_z:` overrides) or
//! an `amplitudes:` section (two lines of 2^n whitespace-separated complex
//! amplitudes, each written `re,im` or as a bare real). Blank lines and `#`
//! comments are ignored; an optional `distance: d` line pins the declared
//! distance. Invariants are validated on read.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::PauliString;
use crate::qla::DenseState;
use crate::stab::StabilizerGroup;

use super::CodeSpace;

/// A code loaded from text, with the stabilizer group retained when the
/// file provided one.
#[derive(Debug, Clone)]
pub struct LoadedCode {
    pub code: CodeSpace,
    pub group: Option<StabilizerGroup>,
}

fn parse_amplitude(token: &str, line_no: usize) -> Result<Complex64> {
    let parse_f64 = |s: &str| -> Result<f64> {
        s.trim()
            .parse::<f64>()
            .map_err(|_| Error::Parse(format!("line {line_no}: bad number `{s}`")))
    };
    match token.split_once(',') {
        Some((re, im)) => Ok(Complex64::new(parse_f64(re)?, parse_f64(im)?)),
        None => Ok(Complex64::new(parse_f64(token)?, 0.0)),
    }
}

fn parse_amplitude_line(line: &str, line_no: usize) -> Result<DenseState> {
    let tokens: Vec<&str> = line.split_whitespace().collect();
    if !tokens.len().is_power_of_two() || tokens.is_empty() {
        return Err(Error::Parse(format!(
            "line {line_no}: expected a power-of-two amplitude count, got {}",
            tokens.len()
        )));
    }
    let n = tokens.len().trailing_zeros() as usize;
    let amps: Vec<Complex64> = tokens
        .iter()
        .map(|t| parse_amplitude(t, line_no))
        .collect::<Result<_>>()?;
    let state = DenseState::from_amplitudes(n, &amps)?;
    state.normalized()
}

/// Parses a full code file.
pub fn parse_code_file(text: &str) -> Result<LoadedCode> {
    let mut distance: Option<usize> = None;
    let mut generators: Vec<PauliString> = Vec::new();
    let mut logical_x: Option<PauliString> = None;
    let mut logical_z: Option<PauliString> = None;
    let mut amplitude_states: Vec<DenseState> = Vec::new();

    #[derive(PartialEq)]
    enum Section {
        None,
        Stabilizer,
        Amplitudes,
    }
    let mut section = Section::None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("distance:") {
            distance = Some(rest.trim().parse().map_err(|_| {
                Error::Parse(format!("line {line_no}: bad distance `{}`", rest.trim()))
            })?);
            continue;
        }
        if let Some(rest) = line.strip_prefix("logical_x:") {
            logical_x = Some(PauliString::parse(rest.trim())?);
            continue;
        }
        if let Some(rest) = line.strip_prefix("logical_z:") {
            logical_z = Some(PauliString::parse(rest.trim())?);
            continue;
        }
        if line == "stabilizer:" {
            section = Section::Stabilizer;
            continue;
        }
        if line == "amplitudes:" {
            section = Section::Amplitudes;
            continue;
        }
        match section {
            Section::Stabilizer => generators.push(
                PauliString::parse(line)
                    .map_err(|e| Error::Parse(format!("line {line_no}: {e}")))?,
            ),
            Section::Amplitudes => amplitude_states.push(parse_amplitude_line(line, line_no)?),
            Section::None => {
                return Err(Error::Parse(format!(
                    "line {line_no}: content before a `stabilizer:` or `amplitudes:` section"
                )))
            }
        }
    }

    match (generators.is_empty(), amplitude_states.len()) {
        (false, 0) => {
            let n = generators[0].num_qubits();
            let group = match (logical_x, logical_z) {
                (Some(lx), Some(lz)) => StabilizerGroup::new(n, generators, lx, lz)?,
                _ => StabilizerGroup::from_generators(n, generators)?,
            };
            let (zero, one) = group.logical_basis()?;
            let code = CodeSpace::new(zero, one, distance)?;
            Ok(LoadedCode {
                code,
                group: Some(group),
            })
        }
        (true, 2) => {
            let zero = amplitude_states[0].clone();
            let one = amplitude_states[1].clone();
            let code = CodeSpace::new(zero, one, distance)?;
            Ok(LoadedCode { code, group: None })
        }
        (true, 0) => Err(Error::Parse("file has no code content".into())),
        (true, k) => Err(Error::Parse(format!(
            "amplitudes section needs exactly 2 lines, found {k}"
        ))),
        (false, _) => Err(Error::Parse(
            "file mixes stabilizer and amplitude sections".into(),
        )),
    }
}

/// Parses a bare stabilizer file: one generator per line.
pub fn parse_stabilizer_file(text: &str) -> Result<StabilizerGroup> {
    let mut generators = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() || line == "stabilizer:" {
            continue;
        }
        generators.push(
            PauliString::parse(line)
                .map_err(|e| Error::Parse(format!("line {}: {e}", idx + 1)))?,
        );
    }
    if generators.is_empty() {
        return Err(Error::Parse("no generators found".into()));
    }
    let n = generators[0].num_qubits();
    StabilizerGroup::from_generators(n, generators)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{builtin_code, kl_check};

    const FIVE_QUBIT_FILE: &str = "\
# smallest distance-3 code
stabilizer:
XZZXI
IXZZX
XIXZZ
ZXIXZ
distance: 3
";

    #[test]
    fn stabilizer_file_roundtrip() {
        let loaded = parse_code_file(FIVE_QUBIT_FILE).unwrap();
        assert_eq!(loaded.code.n_physical(), 5);
        assert_eq!(loaded.code.declared_distance(), Some(3));
        assert!(loaded.group.is_some());
        assert!(kl_check(&loaded.code, 2).unwrap().passes());
    }

    #[test]
    fn amplitude_file_parses() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let text = format!(
            "amplitudes:\n{h} 0 0 0 0 0 0 {h}\n{h} 0 0 0 0 0 0 -{h}\n"
        );
        let loaded = parse_code_file(&text).unwrap();
        assert_eq!(loaded.code.n_physical(), 3);
        assert!(loaded.group.is_none());
        let ghz = builtin_code("ghz3_subcode").unwrap();
        assert!(loaded
            .code
            .logical_zero()
            .sub(ghz.logical_zero())
            .unwrap()
            .norm()
            < 1e-12);
    }

    #[test]
    fn complex_amplitude_tokens() {
        let text = "amplitudes:\n1,0 0,0\n0,0 0,1\n";
        let loaded = parse_code_file(text).unwrap();
        assert_eq!(loaded.code.n_physical(), 1);
        let one_amp = loaded.code.logical_one().amplitude(1);
        assert!((one_amp - Complex64::new(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn bad_files_error_with_line_context() {
        assert!(parse_code_file("stabilizer:\nXQ\n").is_err());
        assert!(parse_code_file("amplitudes:\n1 0 0\n").is_err());
        assert!(parse_code_file("XZZXI\n").is_err());
        assert!(parse_code_file("").is_err());
        // non-orthogonal amplitude pair must be rejected
        assert!(parse_code_file("amplitudes:\n1 0\n1 0\n").is_err());
    }

    #[test]
    fn stabilizer_shortcut_parser() {
        let g = parse_stabilizer_file("ZZI\nIZZ\n").unwrap();
        assert_eq!(g.num_qubits(), 3);
    }
}
