//! Concrete quantum codes as dense codespaces: builtin fixtures, the
//! error-correction criterion as an executable check, erasure recovery,
//! concatenation, product-structure detection, and additivity detection.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::PauliString;
use crate::qla::{DenseOperator, DenseState};
use crate::stab::StabilizerGroup;
use crate::tol;

mod io;
mod recovery;

pub use io::{parse_code_file, parse_stabilizer_file, LoadedCode};
pub use recovery::{erasure_recover, ErasureDecoder};

/// A code encoding one logical qubit, given by its logical basis vectors.
#[derive(Debug, Clone)]
pub struct CodeSpace {
    n_physical: usize,
    logical_zero: DenseState,
    logical_one: DenseState,
    declared_distance: Option<usize>,
}

impl CodeSpace {
    /// Validates orthonormality of the supplied basis.
    pub fn new(
        logical_zero: DenseState,
        logical_one: DenseState,
        declared_distance: Option<usize>,
    ) -> Result<Self> {
        let n = logical_zero.num_qubits();
        if logical_one.num_qubits() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: logical_one.num_qubits(),
            });
        }
        for (name, state) in [("logical_zero", &logical_zero), ("logical_one", &logical_one)] {
            if (state.norm() - 1.0).abs() > tol::STRUCTURAL {
                return Err(Error::NotDensity {
                    reason: format!("{name} is not normalized"),
                });
            }
        }
        let overlap = logical_zero.inner(&logical_one)?;
        if overlap.norm() > tol::STRUCTURAL {
            return Err(Error::NotDensity {
                reason: format!("logical basis states overlap: |<0|1>| = {:.3e}", overlap.norm()),
            });
        }
        Ok(Self {
            n_physical: n,
            logical_zero,
            logical_one,
            declared_distance,
        })
    }

    /// The 1-qubit identity code.
    pub fn trivial() -> Self {
        Self {
            n_physical: 1,
            logical_zero: DenseState::basis(1, 0).unwrap(),
            logical_one: DenseState::basis(1, 1).unwrap(),
            declared_distance: Some(1),
        }
    }

    pub fn n_physical(&self) -> usize {
        self.n_physical
    }

    pub fn logical_zero(&self) -> &DenseState {
        &self.logical_zero
    }

    pub fn logical_one(&self) -> &DenseState {
        &self.logical_one
    }

    pub fn declared_distance(&self) -> Option<usize> {
        self.declared_distance
    }

    /// Declared distance if present, otherwise the first weight at which the
    /// error-correction criterion fails.
    pub fn distance(&self) -> Result<usize> {
        match self.declared_distance {
            Some(d) => Ok(d),
            None => kl_distance(self),
        }
    }

    /// |alpha|0L> + beta|1L> for a single-qubit logical state.
    pub fn encode_qubit(&self, logical: &DenseState) -> Result<DenseState> {
        if logical.num_qubits() != 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                got: logical.num_qubits(),
            });
        }
        self.logical_zero
            .scale(logical.amplitude(0))
            .add(&self.logical_one.scale(logical.amplitude(1)))
    }

    /// Codespace projector |0L><0L| + |1L><1L|.
    pub fn projector(&self) -> Result<DenseOperator> {
        self.logical_zero
            .density()?
            .add(&self.logical_one.density()?)
    }

    /// Applies a local single-qubit unitary to one physical qubit of both
    /// basis states, producing a locally rotated variant of the code.
    pub fn locally_rotated(&self, qubit: usize, u: &DenseOperator) -> Result<CodeSpace> {
        u.assert_unitary()?;
        let zero = self.logical_zero.apply_gate(u, &[qubit])?;
        let one = self.logical_one.apply_gate(u, &[qubit])?;
        CodeSpace::new(zero, one, None)
    }
}

/// Names accepted by [`builtin_code`] and [`builtin_stabilizer_group`].
pub const BUILTIN_NAMES: [&str; 6] = [
    "five_qubit",
    "steane",
    "shor",
    "bitflip3",
    "phaseflip3",
    "ghz3_subcode",
];

fn ghz_pair() -> (DenseState, DenseState) {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let plus = DenseState::from_amplitudes(
        3,
        &[
            Complex64::new(h, 0.0),
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::new(h, 0.0),
        ],
    )
    .unwrap();
    let minus = DenseState::from_amplitudes(
        3,
        &[
            Complex64::new(h, 0.0),
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::new(-h, 0.0),
        ],
    )
    .unwrap();
    (plus, minus)
}

fn plus_minus() -> (DenseState, DenseState) {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let plus = DenseState::from_amplitudes(1, &[Complex64::new(h, 0.0), Complex64::new(h, 0.0)])
        .unwrap();
    let minus = DenseState::from_amplitudes(1, &[Complex64::new(h, 0.0), Complex64::new(-h, 0.0)])
        .unwrap();
    (plus, minus)
}

fn parse_generators(lines: &[&str]) -> Vec<PauliString> {
    lines.iter().map(|s| PauliString::parse(s).unwrap()).collect()
}

/// Builtin stabilizer groups with conventional logical operators.
pub fn builtin_stabilizer_group(name: &str) -> Result<StabilizerGroup> {
    match name {
        "five_qubit" => StabilizerGroup::new(
            5,
            parse_generators(&["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]),
            PauliString::parse("XXXXX")?,
            PauliString::parse("ZZZZZ")?,
        ),
        "steane" => StabilizerGroup::new(
            7,
            parse_generators(&[
                "IIIXXXX", "IXXIIXX", "XIXIXIX", "IIIZZZZ", "IZZIIZZ", "ZIZIZIZ",
            ]),
            PauliString::parse("XXXXXXX")?,
            PauliString::parse("ZZZZZZZ")?,
        ),
        "shor" => StabilizerGroup::new(
            9,
            parse_generators(&[
                "ZZIIIIIII",
                "IZZIIIIII",
                "IIIZZIIII",
                "IIIIZZIII",
                "IIIIIIZZI",
                "IIIIIIIZZ",
                "XXXXXXIII",
                "IIIXXXXXX",
            ]),
            PauliString::parse("ZIIZIIZII")?,
            PauliString::parse("XXXIIIIII")?,
        ),
        "bitflip3" => StabilizerGroup::new(
            3,
            parse_generators(&["ZZI", "IZZ"]),
            PauliString::parse("XXX")?,
            PauliString::parse("ZII")?,
        ),
        "phaseflip3" => StabilizerGroup::new(
            3,
            parse_generators(&["XXI", "IXX"]),
            PauliString::parse("ZZZ")?,
            PauliString::parse("XII")?,
        ),
        // Same group as bitflip3; the logical basis is the entangled pair.
        "ghz3_subcode" => StabilizerGroup::new(
            3,
            parse_generators(&["ZZI", "IZZ"]),
            PauliString::parse("ZII")?,
            PauliString::parse("XXX")?,
        ),
        other => Err(Error::UnknownCode(other.to_string())),
    }
}

/// Builtin codespaces. Stabilizer-derived entries are constructed from the
/// group's projector; product-structured entries carry exact amplitudes.
pub fn builtin_code(name: &str) -> Result<CodeSpace> {
    match name {
        "five_qubit" | "steane" => {
            let group = builtin_stabilizer_group(name)?;
            let (zero, one) = group.logical_basis()?;
            CodeSpace::new(zero, one, Some(3))
        }
        "shor" => {
            let (ghz_plus, ghz_minus) = ghz_pair();
            let zero = ghz_plus.tensor(&ghz_plus)?.tensor(&ghz_plus)?;
            let one = ghz_minus.tensor(&ghz_minus)?.tensor(&ghz_minus)?;
            CodeSpace::new(zero, one, Some(3))
        }
        "bitflip3" => CodeSpace::new(
            DenseState::basis(3, 0b000)?,
            DenseState::basis(3, 0b111)?,
            Some(1),
        ),
        "phaseflip3" => {
            let (plus, minus) = plus_minus();
            CodeSpace::new(
                plus.tensor(&plus)?.tensor(&plus)?,
                minus.tensor(&minus)?.tensor(&minus)?,
                Some(1),
            )
        }
        "ghz3_subcode" => {
            let (ghz_plus, ghz_minus) = ghz_pair();
            CodeSpace::new(ghz_plus, ghz_minus, Some(1))
        }
        other => Err(Error::UnknownCode(other.to_string())),
    }
}

/// Error-correction check over all Pauli errors of bounded weight, in the
/// diagonal / off-diagonal basis form.
#[derive(Debug, Clone)]
pub struct KlReport {
    pub max_weight: usize,
    pub checked: usize,
    /// Diagonal expectation per passing error (identity included).
    pub lambda: Vec<(PauliString, Complex64)>,
    pub violations: Vec<KlViolation>,
    pub truncated: bool,
}

#[derive(Debug, Clone)]
pub struct KlViolation {
    pub error: PauliString,
    pub kind: KlViolationKind,
    pub diagonal_gap: f64,
    pub off_diagonal: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KlViolationKind {
    Diagonal,
    OffDiagonal,
}

impl KlReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

const KL_VIOLATION_CAP: usize = 32;

/// Scans every Pauli error of weight <= `max_weight` against the code basis.
pub fn kl_check(code: &CodeSpace, max_weight: usize) -> Result<KlReport> {
    let n = code.n_physical();
    if n > 12 {
        return Err(Error::SearchBudget(format!(
            "error scan caps at 12 qubits, code has {n}"
        )));
    }
    if max_weight > n {
        return Err(Error::Domain(format!(
            "max_weight {max_weight} exceeds register size {n}"
        )));
    }
    let zero = code.logical_zero();
    let one = code.logical_one();
    let mut report = KlReport {
        max_weight,
        checked: 0,
        lambda: Vec::new(),
        violations: Vec::new(),
        truncated: false,
    };
    for w in 0..=max_weight {
        if report.truncated {
            break;
        }
        PauliString::for_each_of_weight(n, w, &mut |p| {
            if report.truncated {
                return;
            }
            report.checked += 1;
            let d00 = p.matrix_element(zero, zero).unwrap();
            let d11 = p.matrix_element(one, one).unwrap();
            let off = p.matrix_element(zero, one).unwrap();
            let diagonal_gap = (d00 - d11).norm();
            let off_diagonal = off.norm();
            if diagonal_gap > tol::END_TO_END {
                report.violations.push(KlViolation {
                    error: p.clone(),
                    kind: KlViolationKind::Diagonal,
                    diagonal_gap,
                    off_diagonal,
                });
            } else if off_diagonal > tol::END_TO_END {
                report.violations.push(KlViolation {
                    error: p.clone(),
                    kind: KlViolationKind::OffDiagonal,
                    diagonal_gap,
                    off_diagonal,
                });
            } else {
                report.lambda.push((p.clone(), d00));
            }
            if report.violations.len() >= KL_VIOLATION_CAP {
                report.truncated = true;
            }
        });
    }
    Ok(report)
}

/// Distance from the error-correction criterion alone: the smallest weight
/// at which the scan finds a violation.
pub fn kl_distance(code: &CodeSpace) -> Result<usize> {
    let n = code.n_physical();
    for w in 1..=n {
        let report = kl_check(code, w)?;
        if !report.passes() {
            return Ok(w);
        }
    }
    // No Pauli error distinguishes the basis states; nothing beyond weight n
    // exists to check.
    Ok(n + 1)
}

/// Re-encodes each physical qubit of `outer` through `inner`.
pub fn concatenate(outer: &CodeSpace, inner: &CodeSpace) -> Result<CodeSpace> {
    let n_out = outer.n_physical();
    let n_in = inner.n_physical();
    let total = n_out * n_in;
    if total > tol::MAX_STATE_QUBITS {
        return Err(Error::DenseCapExceeded {
            what: "concatenated code",
            qubits: total,
            cap: tol::MAX_STATE_QUBITS,
        });
    }
    let build = |outer_state: &DenseState| -> Result<DenseState> {
        let mut acc = vec![Complex64::ZERO; 1 << total];
        for x in 0..(1usize << n_out) {
            let amp = outer_state.amplitude(x);
            if amp.norm() < 1e-300 {
                continue;
            }
            let mut block = DenseState::basis(0, 0)?;
            for j in 0..n_out {
                let bit = (x >> (n_out - 1 - j)) & 1;
                let factor = if bit == 0 {
                    inner.logical_zero()
                } else {
                    inner.logical_one()
                };
                block = block.tensor(factor)?;
            }
            for (i, v) in block.amplitudes().iter().enumerate() {
                acc[i] += amp * v;
            }
        }
        DenseState::from_amplitudes(total, &acc)
    };
    CodeSpace::new(build(outer.logical_zero())?, build(outer.logical_one())?, None)
}

/// One aligned tensor factor of both logical basis states.
#[derive(Debug, Clone)]
pub struct FoldFactor {
    /// Physical qubits of this factor, ascending.
    pub qubits: Vec<usize>,
    pub zero_factor: DenseState,
    pub one_factor: DenseState,
    /// Whether the factor pair is orthogonal.
    pub orthogonal: bool,
}

/// Maximal aligned product factorization of the logical basis.
#[derive(Debug, Clone)]
pub struct FoldStructure {
    pub factors: Vec<FoldFactor>,
    /// Subsets across which exactly one of the two basis states factors;
    /// reported, never acted on.
    pub misaligned: Vec<Vec<usize>>,
}

impl FoldStructure {
    pub fn fold_count(&self) -> usize {
        self.factors.len()
    }

    /// Re-tensors the factors (sorted by lowest qubit) and checks both basis
    /// states are reproduced within `tolerance`.
    pub fn reproduces(&self, code: &CodeSpace, tolerance: f64) -> Result<bool> {
        let n = code.n_physical();
        let mut order: Vec<usize> = Vec::new();
        let mut zero = DenseState::basis(0, 0)?;
        let mut one = DenseState::basis(0, 0)?;
        for factor in &self.factors {
            order.extend(factor.qubits.iter().copied());
            zero = zero.tensor(&factor.zero_factor)?;
            one = one.tensor(&factor.one_factor)?;
        }
        if order.len() != n {
            return Ok(false);
        }
        // order[i] is the physical qubit sitting at tensor position i; the
        // permutation sends position i to qubit order[i].
        let mut perm = vec![0usize; n];
        for (pos, &q) in order.iter().enumerate() {
            perm[pos] = q;
        }
        let zero = zero.permute_qubits(&perm)?;
        let one = one.permute_qubits(&perm)?;
        let dz = zero.sub(code.logical_zero())?.norm();
        let do_ = one.sub(code.logical_one())?.norm();
        Ok(dz <= tolerance && do_ <= tolerance)
    }
}

/// Second singular value of the reshaped amplitude matrix across
/// (positions, complement); rank 1 means the split is a product.
fn schmidt_split(
    state: &DenseState,
    positions: &[usize],
) -> Result<Option<(DenseState, DenseState)>> {
    let m = state.num_qubits();
    let rest: Vec<usize> = (0..m).filter(|q| !positions.contains(q)).collect();
    let rows = 1usize << positions.len();
    let cols = 1usize << rest.len();
    let mut mat = nalgebra::DMatrix::<Complex64>::zeros(rows, cols);
    for s in 0..rows {
        for t in 0..cols {
            let mut idx = 0usize;
            for (pos, &q) in positions.iter().enumerate() {
                let bit = (s >> (positions.len() - 1 - pos)) & 1;
                idx |= bit << (m - 1 - q);
            }
            for (pos, &q) in rest.iter().enumerate() {
                let bit = (t >> (rest.len() - 1 - pos)) & 1;
                idx |= bit << (m - 1 - q);
            }
            mat[(s, t)] = state.amplitude(idx);
        }
    }
    let svd = mat.clone().svd(true, true);
    let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    if sv.len() > 1 && sv[1] > tol::SCHMIDT_RANK {
        return Ok(None);
    }
    let u = svd.u.as_ref().expect("svd with u");
    let vt = svd.v_t.as_ref().expect("svd with v_t");
    // leading singular triple; fold sigma into the complement factor
    let sigma = sv[0];
    let mut a: Vec<Complex64> = (0..rows).map(|r| u[(r, 0)]).collect();
    let mut b: Vec<Complex64> = (0..cols).map(|c| vt[(0, c)] * sigma).collect();
    // canonical phase: first significant amplitude of the factor is real
    // positive
    if let Some(lead) = a.iter().find(|v| v.norm() > 1e-8) {
        let phase = lead.conj() / lead.norm();
        for v in a.iter_mut() {
            *v *= phase;
        }
        let inv = phase.conj();
        for v in b.iter_mut() {
            *v *= inv;
        }
    }
    Ok(Some((
        DenseState::from_amplitudes(positions.len(), &a)?,
        DenseState::from_amplitudes(rest.len(), &b)?,
    )))
}

fn for_each_subset_of_size(len: usize, size: usize, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
    fn rec(
        len: usize,
        size: usize,
        start: usize,
        depth: usize,
        buf: &mut Vec<usize>,
        f: &mut impl FnMut(&[usize]) -> bool,
    ) -> bool {
        if depth == size {
            return f(buf);
        }
        for i in start..len {
            buf[depth] = i;
            if rec(len, size, i + 1, depth + 1, buf, f) {
                return true;
            }
        }
        false
    }
    let mut buf = vec![0usize; size];
    rec(len, size, 0, 0, &mut buf, f)
}

/// Finds the maximal aligned product factorization by greedy bipartition
/// search: a subset splits only when both basis states have Schmidt rank 1
/// across it, and the search recurses into both factors.
pub fn rfold_decompose(code: &CodeSpace) -> Result<FoldStructure> {
    let n = code.n_physical();
    if n > 12 {
        return Err(Error::SearchBudget(format!(
            "product-structure search caps at 12 qubits, code has {n}"
        )));
    }
    let mut factors = Vec::new();
    let mut misaligned = Vec::new();
    split_recursive(
        (0..n).collect(),
        code.logical_zero().clone(),
        code.logical_one().clone(),
        &mut factors,
        &mut misaligned,
    )?;
    factors.sort_by_key(|fac: &FoldFactor| fac.qubits[0]);
    Ok(FoldStructure { factors, misaligned })
}

fn split_recursive(
    qubits: Vec<usize>,
    zero: DenseState,
    one: DenseState,
    factors: &mut Vec<FoldFactor>,
    misaligned: &mut Vec<Vec<usize>>,
) -> Result<()> {
    let len = qubits.len();
    for size in 1..=len / 2 {
        let mut found: Option<(Vec<usize>, (DenseState, DenseState), (DenseState, DenseState))> =
            None;
        for_each_subset_of_size(len, size, &mut |positions| {
            let zero_split = schmidt_split(&zero, positions).expect("cap checked");
            let one_split = schmidt_split(&one, positions).expect("cap checked");
            match (zero_split, one_split) {
                (Some(zs), Some(os)) => {
                    found = Some((positions.to_vec(), zs, os));
                    true
                }
                (Some(_), None) | (None, Some(_)) => {
                    misaligned.push(positions.iter().map(|&p| qubits[p]).collect());
                    false
                }
                (None, None) => false,
            }
        });
        if let Some((positions, (z_in, z_out), (o_in, o_out))) = found {
            let inside: Vec<usize> = positions.iter().map(|&p| qubits[p]).collect();
            let outside: Vec<usize> = (0..len)
                .filter(|p| !positions.contains(p))
                .map(|p| qubits[p])
                .collect();
            split_recursive(inside, z_in, o_in, factors, misaligned)?;
            split_recursive(outside, z_out, o_out, factors, misaligned)?;
            return Ok(());
        }
    }
    let orthogonal = zero.inner(&one)?.norm() < tol::END_TO_END;
    factors.push(FoldFactor {
        qubits,
        zero_factor: zero,
        one_factor: one,
        orthogonal,
    });
    Ok(())
}

/// Classification of a code by its product structure and distance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CodeClass {
    Generic,
    RFold(usize),
    MaximallyRedundant,
}

#[derive(Debug, Clone)]
pub struct SubcodeReport {
    pub qubits: Vec<usize>,
    pub diagonal_violation: bool,
    pub off_diagonal_violation: bool,
}

impl SubcodeReport {
    /// Distance one: some weight-1 error violates either condition.
    pub fn distance_one(&self) -> bool {
        self.diagonal_violation || self.off_diagonal_violation
    }
}

#[derive(Debug, Clone)]
pub struct Classification {
    pub class: CodeClass,
    pub fold_count: usize,
    pub distance: usize,
    pub subcodes: Vec<SubcodeReport>,
    pub fold: FoldStructure,
}

/// Weight-1 scan of a subcode factor pair, recording the diagonal and
/// off-diagonal conditions separately.
fn subcode_weight1_report(factor: &FoldFactor) -> SubcodeReport {
    let m = factor.zero_factor.num_qubits();
    let mut diagonal_violation = false;
    let mut off_diagonal_violation = false;
    PauliString::for_each_of_weight(m, 1, &mut |p| {
        let d00 = p
            .matrix_element(&factor.zero_factor, &factor.zero_factor)
            .unwrap();
        let d11 = p
            .matrix_element(&factor.one_factor, &factor.one_factor)
            .unwrap();
        let off = p
            .matrix_element(&factor.zero_factor, &factor.one_factor)
            .unwrap();
        if (d00 - d11).norm() > tol::END_TO_END {
            diagonal_violation = true;
        }
        if off.norm() > tol::END_TO_END {
            off_diagonal_violation = true;
        }
    });
    SubcodeReport {
        qubits: factor.qubits.clone(),
        diagonal_violation,
        off_diagonal_violation,
    }
}

/// Classifies: generic (1-fold), r-fold, or maximally redundant (r = d >= 3
/// with orthogonal distance-1 subcodes).
pub fn classify(code: &CodeSpace) -> Result<Classification> {
    let fold = rfold_decompose(code)?;
    let distance = code.distance()?;
    let subcodes: Vec<SubcodeReport> = fold.factors.iter().map(subcode_weight1_report).collect();
    let r = fold.fold_count();
    let class = if r == 1 {
        CodeClass::Generic
    } else if r == distance
        && distance >= 3
        && fold.factors.iter().all(|f| f.orthogonal)
        && subcodes.iter().all(|s| s.distance_one())
    {
        CodeClass::MaximallyRedundant
    } else {
        CodeClass::RFold(r)
    };
    Ok(Classification {
        class,
        fold_count: r,
        distance,
        subcodes,
        fold,
    })
}

/// Pauli expansion test of the codespace projector.
#[derive(Debug, Clone)]
pub struct AdditivityReport {
    pub additive: bool,
    /// Number of Pauli patterns with coefficient above threshold.
    pub terms: usize,
    /// Whether every nonzero coefficient has magnitude 1/2^(n-1).
    pub uniform: bool,
    /// Whether the supporting patterns close under multiplication.
    pub group_closed: bool,
}

/// Unnormalized Walsh-Hadamard transform: out[b] = sum_s (-1)^{b.s} f[s].
fn walsh_hadamard(f: &mut [Complex64]) {
    let len = f.len();
    let mut half = 1usize;
    while half < len {
        let mut start = 0;
        while start < len {
            for i in start..start + half {
                let a = f[i];
                let b = f[i + half];
                f[i] = a + b;
                f[i + half] = a - b;
            }
            start += 2 * half;
        }
        half *= 2;
    }
}

/// Expands the projector in the Hermitian Pauli basis: the code is additive
/// exactly when the nonzero coefficients are +-1/2^(n-1) and their patterns
/// form a group.
///
/// For fixed X mask `a`, the coefficients over all Z masks are the
/// Walsh-Hadamard transform of s -> conj(psi[s^a]) psi[s], which keeps the
/// full scan at O(8^n log) instead of O(16^n).
pub fn is_additive(code: &CodeSpace) -> Result<AdditivityReport> {
    let n = code.n_physical();
    if n > 10 {
        return Err(Error::SearchBudget(format!(
            "projector expansion caps at 10 qubits, code has {n}"
        )));
    }
    let dim = 1usize << n;
    let norm = dim as f64;
    let expected = 1.0 / (1usize << (n - 1)) as f64;
    let mut patterns: Vec<(u64, u64)> = Vec::new();
    let mut uniform = true;
    let mut f = vec![Complex64::ZERO; dim];
    for a in 0..dim {
        for v in f.iter_mut() {
            *v = Complex64::ZERO;
        }
        for state in [code.logical_zero(), code.logical_one()] {
            let amps = state.amplitudes();
            for s in 0..dim {
                f[s] += amps[s ^ a].conj() * amps[s];
            }
        }
        walsh_hadamard(&mut f);
        for b in 0..dim {
            // Hermitian letter convention contributes i per X/Z overlap.
            let overlap = (a & b).count_ones();
            let phase = match overlap % 4 {
                0 => Complex64::new(1.0, 0.0),
                1 => Complex64::new(0.0, 1.0),
                2 => Complex64::new(-1.0, 0.0),
                _ => Complex64::new(0.0, -1.0),
            };
            let coeff = phase * f[b] / norm;
            let mag = coeff.norm();
            if mag > tol::END_TO_END {
                patterns.push((a as u64, b as u64));
                if (mag - expected).abs() > tol::END_TO_END || coeff.im.abs() > tol::END_TO_END {
                    uniform = false;
                }
            }
        }
    }
    let set: std::collections::HashSet<(u64, u64)> = patterns.iter().copied().collect();
    let mut group_closed = set.contains(&(0, 0)) && set.len().is_power_of_two();
    'outer: for a in &patterns {
        for b in &patterns {
            if !set.contains(&(a.0 ^ b.0, a.1 ^ b.1)) {
                group_closed = false;
                break 'outer;
            }
        }
    }
    Ok(AdditivityReport {
        additive: uniform && group_closed,
        terms: patterns.len(),
        uniform,
        group_closed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qla::gates;

    #[test]
    fn builtin_codes_validate() {
        for name in BUILTIN_NAMES {
            let code = builtin_code(name).unwrap();
            assert_eq!(
                code.logical_zero().num_qubits(),
                code.n_physical(),
                "{name}"
            );
        }
        assert!(builtin_code("nope").is_err());
    }

    #[test]
    fn shor_zero_state_is_threefold_ghz() {
        let code = builtin_code("shor").unwrap();
        let (ghz_plus, _) = ghz_pair();
        let expect = ghz_plus.tensor(&ghz_plus).unwrap().tensor(&ghz_plus).unwrap();
        assert!(code.logical_zero().sub(&expect).unwrap().norm() < 1e-12);
    }

    #[test]
    fn builtin_codes_agree_with_their_groups() {
        for name in BUILTIN_NAMES {
            let code = builtin_code(name).unwrap();
            let group = builtin_stabilizer_group(name).unwrap();
            for state in [code.logical_zero(), code.logical_one()] {
                for g in group.generators() {
                    let fixed = g.apply_to_state(state).unwrap();
                    assert!(
                        fixed.sub(state).unwrap().norm() < tol::STRUCTURAL,
                        "{name}: {g} does not fix the code"
                    );
                }
            }
            // pinned logical action matches the basis convention
            let flipped = group.logical_x().apply_to_state(code.logical_zero()).unwrap();
            assert!(
                flipped.sub(code.logical_one()).unwrap().norm() < tol::STRUCTURAL,
                "{name}: logical_x does not map 0 to 1"
            );
            let fixed = group.logical_z().apply_to_state(code.logical_zero()).unwrap();
            assert!(
                fixed.sub(code.logical_zero()).unwrap().norm() < tol::STRUCTURAL,
                "{name}: logical_z does not fix 0"
            );
        }
    }

    #[test]
    fn kl_scan_five_qubit() {
        let code = builtin_code("five_qubit").unwrap();
        assert!(kl_check(&code, 2).unwrap().passes());
        assert!(!kl_check(&code, 3).unwrap().passes());
    }

    #[test]
    fn kl_scan_weight_zero_trivially_passes() {
        let code = builtin_code("bitflip3").unwrap();
        let report = kl_check(&code, 0).unwrap();
        assert!(report.passes());
        assert_eq!(report.checked, 1);
    }

    #[test]
    fn kl_distance_matches_declared() {
        for (name, d) in [("five_qubit", 3), ("steane", 3), ("shor", 3), ("bitflip3", 1)] {
            let code = builtin_code(name).unwrap();
            assert_eq!(kl_distance(&code).unwrap(), d, "{name}");
        }
    }

    #[test]
    fn shor_concatenation_from_three_qubit_codes() {
        let outer = builtin_code("phaseflip3").unwrap();
        let inner = builtin_code("bitflip3").unwrap();
        let cat = concatenate(&outer, &inner).unwrap();
        let shor = builtin_code("shor").unwrap();
        assert!(cat.logical_zero().sub(shor.logical_zero()).unwrap().norm() < 1e-9);
        assert!(cat.logical_one().sub(shor.logical_one()).unwrap().norm() < 1e-9);
        assert!(kl_check(&cat, 2).unwrap().passes());
    }

    #[test]
    fn concatenation_with_trivial_code_is_identity() {
        let code = builtin_code("bitflip3").unwrap();
        let cat = concatenate(&code, &CodeSpace::trivial()).unwrap();
        assert!(cat.logical_zero().sub(code.logical_zero()).unwrap().norm() < 1e-12);
        assert!(cat.logical_one().sub(code.logical_one()).unwrap().norm() < 1e-12);
    }

    #[test]
    fn repeated_bitflip_concatenation_has_distance_one() {
        let code = builtin_code("bitflip3").unwrap();
        let cat = concatenate(&code, &code).unwrap();
        assert_eq!(kl_distance(&cat).unwrap(), 1);
    }

    #[test]
    fn shor_decomposes_into_three_ghz_factors() {
        let code = builtin_code("shor").unwrap();
        let fold = rfold_decompose(&code).unwrap();
        assert_eq!(fold.fold_count(), 3);
        for factor in &fold.factors {
            assert_eq!(factor.qubits.len(), 3);
            assert!(factor.orthogonal);
        }
        assert!(fold.reproduces(&code, tol::END_TO_END).unwrap());
    }

    #[test]
    fn five_qubit_and_steane_do_not_factor() {
        for name in ["five_qubit", "steane"] {
            let code = builtin_code(name).unwrap();
            let fold = rfold_decompose(&code).unwrap();
            assert_eq!(fold.fold_count(), 1, "{name}");
        }
    }

    #[test]
    fn misaligned_factorizations_are_reported() {
        // zero state factors across {0}|{1}, one state is entangled there
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let zero = DenseState::basis(2, 0b00).unwrap();
        let one = DenseState::from_amplitudes(
            2,
            &[
                Complex64::ZERO,
                Complex64::new(h, 0.0),
                Complex64::new(h, 0.0),
                Complex64::ZERO,
            ],
        )
        .unwrap();
        let code = CodeSpace::new(zero, one, None).unwrap();
        let fold = rfold_decompose(&code).unwrap();
        assert_eq!(fold.fold_count(), 1);
        assert!(
            fold.misaligned.iter().any(|s| s == &vec![0]),
            "one-sided split must be reported: {:?}",
            fold.misaligned
        );
    }

    #[test]
    fn classification_of_builtins() {
        assert_eq!(
            classify(&builtin_code("shor").unwrap()).unwrap().class,
            CodeClass::MaximallyRedundant
        );
        assert_eq!(
            classify(&builtin_code("five_qubit").unwrap()).unwrap().class,
            CodeClass::Generic
        );
        assert_eq!(
            classify(&builtin_code("steane").unwrap()).unwrap().class,
            CodeClass::Generic
        );
        // the three-qubit repetition codes factor per qubit but have
        // distance 1
        for name in ["bitflip3", "phaseflip3"] {
            let c = classify(&builtin_code(name).unwrap()).unwrap();
            assert_eq!(c.class, CodeClass::RFold(3), "{name}");
        }
        // the entangled three-qubit pair is a single factor
        let c = classify(&builtin_code("ghz3_subcode").unwrap()).unwrap();
        assert_eq!(c.class, CodeClass::Generic);
    }

    #[test]
    fn ghz_subcode_weight1_scan_shows_distance_one() {
        let c = classify(&builtin_code("shor").unwrap()).unwrap();
        for sub in &c.subcodes {
            assert!(sub.off_diagonal_violation);
            assert!(!sub.diagonal_violation);
        }
    }

    #[test]
    fn additivity_of_builtin_stabilizer_codes() {
        for name in BUILTIN_NAMES {
            let code = builtin_code(name).unwrap();
            let report = is_additive(&code).unwrap();
            assert!(report.additive, "{name} should expand as a stabilizer sum");
            assert_eq!(report.terms, 1 << (code.n_physical() - 1), "{name}");
        }
    }

    #[test]
    fn non_clifford_rotation_breaks_additivity() {
        let code = builtin_code("five_qubit").unwrap();
        let rotated = code.locally_rotated(0, &gates::t_gate()).unwrap();
        let report = is_additive(&rotated).unwrap();
        assert!(!report.additive);
        // a Clifford rotation keeps it additive
        let clifford = code.locally_rotated(0, &gates::h()).unwrap();
        assert!(is_additive(&clifford).unwrap().additive);
    }

    #[test]
    fn one_fold_codes_have_mixed_marginals() {
        // with one qubit withheld, every nonempty kept marginal of each
        // logical basis state is mixed
        for name in ["five_qubit", "steane"] {
            let code = builtin_code(name).unwrap();
            let n = code.n_physical();
            for state in [code.logical_zero(), code.logical_one()] {
                for keep_size in 1..n {
                    let keep: Vec<usize> = (0..keep_size).collect();
                    let marginal = state.reduced_density(&keep).unwrap();
                    assert!(
                        marginal.purity() < 1.0 - 1e-6,
                        "{name}: marginal on {keep:?} is pure"
                    );
                }
            }
        }
    }
}
