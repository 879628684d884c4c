//! Stabilizer groups for codes encoding one logical qubit: logical-operator
//! extraction, exhaustive distance search, and cleaning of logical operators
//! off correctable qubit subsets.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gf2;
use crate::pauli::PauliString;
use crate::qla::{DenseOperator, DenseState};

/// Abelian Pauli subgroup with n-1 independent generators (k = 1) and a
/// pinned pair of logical operators.
#[derive(Debug, Clone)]
pub struct StabilizerGroup {
    num_qubits: usize,
    generators: Vec<PauliString>,
    logical_x: PauliString,
    logical_z: PauliString,
}

/// Symplectic encoding: x bits in the low half, z bits in the high half.
fn sym_vector(p: &PauliString) -> u64 {
    let n = p.num_qubits();
    let mut v = 0u64;
    for q in 0..n {
        if p.x_bit(q) {
            v |= 1 << q;
        }
        if p.z_bit(q) {
            v |= 1 << (n + q);
        }
    }
    v
}

fn sym_product(n: usize, a: u64, b: u64) -> u64 {
    let ax = a & ((1 << n) - 1);
    let az = a >> n;
    let bx = b & ((1 << n) - 1);
    let bz = b >> n;
    (((ax & bz).count_ones() + (az & bx).count_ones()) % 2) as u64
}

/// Phase-free Pauli from a symplectic vector, with the Hermitian phase
/// convention (one factor of i per Y letter).
fn pauli_from_sym(n: usize, v: u64) -> PauliString {
    let mut x_mask = 0u64;
    let mut z_mask = 0u64;
    for q in 0..n {
        if v >> q & 1 == 1 {
            x_mask |= 1 << (n - 1 - q);
        }
        if v >> (n + q) & 1 == 1 {
            z_mask |= 1 << (n - 1 - q);
        }
    }
    let overlap = (x_mask & z_mask).count_ones() as u8;
    PauliString::from_masks(n, overlap % 2, x_mask, z_mask).unwrap()
}

fn sym_weight(n: usize, v: u64) -> usize {
    let x = v & ((1 << n) - 1);
    let z = v >> n;
    (x | z).count_ones() as usize
}

impl StabilizerGroup {
    /// Validates and stores generators plus an explicit logical pair.
    pub fn new(
        num_qubits: usize,
        generators: Vec<PauliString>,
        logical_x: PauliString,
        logical_z: PauliString,
    ) -> Result<Self> {
        let n = num_qubits;
        if generators.len() + 1 != n {
            return Err(Error::InvalidStabilizer(format!(
                "expected {} generators for one logical qubit, got {}",
                n - 1,
                generators.len()
            )));
        }
        for g in &generators {
            if g.num_qubits() != n {
                return Err(Error::InvalidStabilizer("generator length mismatch".into()));
            }
            if !g.is_hermitian() {
                return Err(Error::InvalidStabilizer(format!(
                    "generator {g} is not Hermitian"
                )));
            }
            if g.is_identity_pattern() {
                return Err(Error::InvalidStabilizer("identity generator".into()));
            }
        }
        for (i, a) in generators.iter().enumerate() {
            for b in generators.iter().skip(i + 1) {
                if !a.commutes(b)? {
                    return Err(Error::InvalidStabilizer(format!(
                        "generators {a} and {b} anticommute"
                    )));
                }
            }
        }
        // Independence over GF(2) also rules out -I: only the empty product
        // has the identity bit pattern.
        let rows: Vec<u64> = generators.iter().map(sym_vector).collect();
        if gf2::rank(&rows) != generators.len() {
            return Err(Error::InvalidStabilizer(
                "generators are GF(2)-dependent".into(),
            ));
        }
        for (name, l) in [("logical_x", &logical_x), ("logical_z", &logical_z)] {
            if l.num_qubits() != n {
                return Err(Error::InvalidStabilizer(format!("{name} length mismatch")));
            }
            for g in &generators {
                if !l.commutes(g)? {
                    return Err(Error::InvalidStabilizer(format!(
                        "{name} anticommutes with generator {g}"
                    )));
                }
            }
            if gf2::in_span(&rows, sym_vector(l)) {
                return Err(Error::InvalidStabilizer(format!(
                    "{name} lies inside the stabilizer group"
                )));
            }
        }
        if logical_x.commutes(&logical_z)? {
            return Err(Error::InvalidStabilizer(
                "logical_x and logical_z must anticommute".into(),
            ));
        }
        Ok(Self {
            num_qubits,
            generators,
            logical_x,
            logical_z,
        })
    }

    /// Derives minimal-weight logical operators from the generators alone.
    ///
    /// The normalizer is solved over GF(2); each logical class is then
    /// minimized by exhausting its stabilizer coset, so the result is the
    /// true minimum-weight representative (ties broken lexicographically).
    pub fn from_generators(num_qubits: usize, generators: Vec<PauliString>) -> Result<Self> {
        let (lx, lz) = derive_logicals(num_qubits, &generators)?;
        Self::new(num_qubits, generators, lx, lz)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.generators
    }

    pub fn logical_x(&self) -> &PauliString {
        &self.logical_x
    }

    pub fn logical_z(&self) -> &PauliString {
        &self.logical_z
    }

    /// Minimal-weight representatives of the logical classes, recomputed
    /// from the generators (ignores the pinned pair).
    pub fn minimal_logicals(&self) -> Result<(PauliString, PauliString)> {
        derive_logicals(self.num_qubits, &self.generators)
    }

    /// Membership of a phase-free pattern in the stabilizer group's span.
    pub fn pattern_in_group(&self, p: &PauliString) -> bool {
        let rows: Vec<u64> = self.generators.iter().map(sym_vector).collect();
        gf2::in_span(&rows, sym_vector(p))
    }

    /// Is `p` a logical operator: in the normalizer but outside the group?
    pub fn is_logical_pauli(&self, p: &PauliString) -> Result<bool> {
        for g in &self.generators {
            if !p.commutes(g)? {
                return Ok(false);
            }
        }
        Ok(!self.pattern_in_group(p))
    }

    /// Exhaustive weight-ordered distance search (cap: 12 qubits).
    pub fn code_distance(&self) -> Result<usize> {
        let n = self.num_qubits;
        if n > 12 {
            return Err(Error::SearchBudget(format!(
                "distance search caps at 12 qubits, group has {n}"
            )));
        }
        let gen_rows: Vec<u64> = self.generators.iter().map(sym_vector).collect();
        for w in 1..=n {
            let mut found = false;
            for_each_pattern_of_weight(n, w, &mut |v| {
                if found {
                    return;
                }
                let in_normalizer = gen_rows.iter().all(|&g| sym_product(n, g, v) == 0);
                if in_normalizer && !gf2::in_span(&gen_rows, v) {
                    found = true;
                }
            });
            if found {
                return Ok(w);
            }
        }
        Err(Error::InvalidStabilizer(
            "no logical operator found; group does not encode a qubit".into(),
        ))
    }

    fn check_subset(&self, subset: &[usize]) -> Result<()> {
        // two GF(2) equations per subset qubit must fit a 64-bit mask
        if subset.len() > 32 {
            return Err(Error::SearchBudget(
                "qubit subsets cap at 32 positions".into(),
            ));
        }
        for &q in subset {
            if q >= self.num_qubits {
                return Err(Error::QubitIndexOutOfRange {
                    index: q,
                    num_qubits: self.num_qubits,
                });
            }
        }
        Ok(())
    }

    /// A subset is cleanable when every normalizer element supported on it
    /// lies inside the stabilizer group.
    pub fn is_cleanable(&self, subset: &[usize]) -> Result<bool> {
        let n = self.num_qubits;
        self.check_subset(subset)?;
        // Unknowns: x and z bit per subset qubit. Equations: symplectic
        // orthogonality with each generator.
        let gens = &self.generators;
        let cols: Vec<u64> = subset
            .iter()
            .flat_map(|&q| {
                let x_col: u64 = gens
                    .iter()
                    .enumerate()
                    .filter(|(_, g)| g.z_bit(q))
                    .fold(0, |acc, (i, _)| acc | 1u64 << i);
                let z_col: u64 = gens
                    .iter()
                    .enumerate()
                    .filter(|(_, g)| g.x_bit(q))
                    .fold(0, |acc, (i, _)| acc | 1u64 << i);
                [x_col, z_col]
            })
            .collect();
        let kernel = gf2::nullspace(&cols, gens.len());
        let gen_rows: Vec<u64> = gens.iter().map(sym_vector).collect();
        for kv in kernel {
            // Lift the restricted solution to a full symplectic vector.
            let mut v = 0u64;
            for (pos, &q) in subset.iter().enumerate() {
                if kv >> (2 * pos) & 1 == 1 {
                    v |= 1 << q;
                }
                if kv >> (2 * pos + 1) & 1 == 1 {
                    v |= 1 << (n + q);
                }
            }
            if !gf2::in_span(&gen_rows, v) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Multiplies `p` by a stabilizer element so the result avoids `subset`.
    ///
    /// When several stabilizer corrections work, the lexicographically first
    /// generator-coefficient vector is used; this is a reproducibility
    /// convention, nothing more.
    pub fn clean_operator(&self, p: &PauliString, subset: &[usize]) -> Result<PauliString> {
        self.check_subset(subset)?;
        if !self.is_logical_pauli(p)? {
            return Err(Error::NotLogical);
        }
        let gens = &self.generators;
        // Equations: the x and z bits of p * g on each subset qubit vanish.
        let num_eq = 2 * subset.len();
        let mut cols: Vec<u64> = Vec::with_capacity(gens.len());
        for g in gens {
            let mut col = 0u64;
            for (pos, &q) in subset.iter().enumerate() {
                if g.x_bit(q) {
                    col |= 1 << (2 * pos);
                }
                if g.z_bit(q) {
                    col |= 1 << (2 * pos + 1);
                }
            }
            cols.push(col);
        }
        let mut b = 0u64;
        for (pos, &q) in subset.iter().enumerate() {
            if p.x_bit(q) {
                b |= 1 << (2 * pos);
            }
            if p.z_bit(q) {
                b |= 1 << (2 * pos + 1);
            }
        }
        let solution = gf2::solve_lex_min(&cols, b, num_eq).ok_or(Error::NoCleaningSolution)?;
        let mut cleaned = p.clone();
        for (i, g) in gens.iter().enumerate() {
            if solution >> i & 1 == 1 {
                cleaned = cleaned.mul(g)?;
            }
        }
        debug_assert!(subset.iter().all(|&q| !cleaned.x_bit(q) && !cleaned.z_bit(q)));
        Ok(cleaned)
    }

    /// Codespace projector (dense); trace equals 2 for one logical qubit.
    pub fn codespace_projector(&self) -> Result<DenseOperator> {
        let (zero, one) = self.logical_basis()?;
        zero.density()?.add(&one.density()?)
    }

    /// Logical basis states: |0L> spans the +1 eigenspace of logical_z inside
    /// the codespace, |1L> = logical_x |0L>.
    ///
    /// Built by projecting computational seeds through (I+g)/2 factors at the
    /// state-vector level, so no dense matrices are formed.
    pub fn logical_basis(&self) -> Result<(DenseState, DenseState)> {
        let n = self.num_qubits;
        let half = Complex64::new(0.5, 0.0);
        let dim = 1usize << n;
        let mut zero = None;
        for seed in 0..dim {
            let mut psi = DenseState::basis(n, seed)?;
            for g in &self.generators {
                psi = psi.add(&g.apply_to_state(&psi)?)?.scale(half);
            }
            psi = psi
                .add(&self.logical_z.apply_to_state(&psi)?)?
                .scale(half);
            if psi.norm() > 1e-8 {
                zero = Some(psi.normalized()?);
                break;
            }
        }
        let zero = zero.ok_or_else(|| {
            Error::InvalidStabilizer("codespace projector annihilates every basis state".into())
        })?;
        let one = self.logical_x.apply_to_state(&zero)?;
        Ok((zero, one))
    }
}

fn derive_logicals(
    num_qubits: usize,
    generators: &[PauliString],
) -> Result<(PauliString, PauliString)> {
    let n = num_qubits;
    if generators.len() + 1 != n {
        return Err(Error::InvalidStabilizer(format!(
            "logical extraction expects {} generators, got {}",
            n - 1,
            generators.len()
        )));
    }
    let gen_rows: Vec<u64> = generators.iter().map(sym_vector).collect();
    // Normalizer = nullspace of the symplectic-product system over all 2n
    // coordinates.
    let cols: Vec<u64> = (0..2 * n)
        .map(|coord| {
            let mut col = 0u64;
            for (i, g) in generators.iter().enumerate() {
                // x_q couples to g.z(q), z_q couples to g.x(q)
                let couples = if coord < n {
                    g.z_bit(coord)
                } else {
                    g.x_bit(coord - n)
                };
                if couples {
                    col |= 1 << i;
                }
            }
            col
        })
        .collect();
    let normalizer = gf2::nullspace(&cols, generators.len());

    let v1 = normalizer
        .iter()
        .copied()
        .find(|&v| !gf2::in_span(&gen_rows, v))
        .ok_or_else(|| Error::InvalidStabilizer("no logical class found".into()))?;
    let v2 = normalizer
        .iter()
        .copied()
        .find(|&v| sym_product(n, v1, v) == 1)
        .ok_or_else(|| {
            Error::InvalidStabilizer("normalizer is symplectically degenerate".into())
        })?;

    let r1 = min_weight_in_coset(n, v1, &gen_rows, generators)?;
    let r2 = min_weight_in_coset(n, v2, &gen_rows, generators)?;

    // Label by letter bias so CSS-style groups get the conventional names.
    let zness = |p: &PauliString| -> i64 {
        let mut score = 0i64;
        for q in 0..n {
            match (p.x_bit(q), p.z_bit(q)) {
                (false, true) => score += 1,
                (true, false) => score -= 1,
                _ => {}
            }
        }
        score
    };
    if zness(&r1) > zness(&r2) {
        Ok((r2, r1))
    } else {
        Ok((r1, r2))
    }
}

/// Minimum-weight element of the coset `v * <generators>`, built with exact
/// phases by multiplying the generator strings.
fn min_weight_in_coset(
    n: usize,
    v: u64,
    gen_rows: &[u64],
    generators: &[PauliString],
) -> Result<PauliString> {
    let k = gen_rows.len();
    if k > 20 {
        return Err(Error::SearchBudget(format!(
            "coset search over 2^{k} elements exceeds the budget"
        )));
    }
    let mut best_key = (sym_weight(n, v), v);
    let mut best_mask = 0u64;
    for mask in 1u64..(1 << k) {
        let mut cand = v;
        for (i, &g) in gen_rows.iter().enumerate() {
            if mask >> i & 1 == 1 {
                cand ^= g;
            }
        }
        let key = (sym_weight(n, cand), cand);
        if key < best_key {
            best_key = key;
            best_mask = mask;
        }
    }
    // Base representative carries the canonical Hermitian phase; folding in
    // the chosen generators keeps the phase an honest group product.
    let mut rep = pauli_from_sym(n, v);
    for (i, g) in generators.iter().enumerate() {
        if best_mask >> i & 1 == 1 {
            rep = rep.mul(g)?;
        }
    }
    Ok(rep)
}

/// Calls `f` for every symplectic pattern of exactly `weight` non-identity
/// letters, in (support, letter) lexicographic order.
fn for_each_pattern_of_weight(n: usize, weight: usize, f: &mut impl FnMut(u64)) {
    fn rec(
        n: usize,
        weight: usize,
        start: usize,
        depth: usize,
        support: &mut Vec<usize>,
        f: &mut impl FnMut(u64),
    ) {
        if depth == weight {
            let combos = 3usize.pow(weight as u32);
            for mut code in 0..combos {
                let mut v = 0u64;
                for &q in support.iter() {
                    let letter = code % 3;
                    code /= 3;
                    match letter {
                        0 => v |= 1 << q,                    // X
                        1 => v |= 1 << (n + q),              // Z
                        _ => v |= (1 << q) | (1 << (n + q)), // Y
                    }
                }
                f(v);
            }
            return;
        }
        for q in start..n {
            support[depth] = q;
            rec(n, weight, q + 1, depth + 1, support, f);
        }
    }
    let mut support = vec![0usize; weight];
    rec(n, weight, 0, 0, &mut support, f);
}

/// Hierarchy bound from a cleanable partition, with an optional dense check
/// that commutators with cleaned logical Paulis act as scalars on the
/// codespace.
pub struct LevelBoundReport {
    /// Any transversal logical operator on this partition lies in this level
    /// of the hierarchy.
    pub level_bound: usize,
    pub scalar_checks: Vec<ScalarCheck>,
}

pub struct ScalarCheck {
    /// Scalar the commutator applies on the codespace.
    pub scalar: Complex64,
    /// Residual norm of (commutator - scalar) restricted to the codespace.
    pub deviation: f64,
}

pub fn transversal_level_bound(
    group: &StabilizerGroup,
    partition: &[Vec<usize>],
    transversal_logicals: &[DenseOperator],
) -> Result<LevelBoundReport> {
    let n = group.num_qubits();
    if partition.is_empty() {
        return Err(Error::Domain("empty partition".into()));
    }
    let mut seen = vec![false; n];
    for subset in partition {
        for &q in subset {
            if q >= n {
                return Err(Error::QubitIndexOutOfRange {
                    index: q,
                    num_qubits: n,
                });
            }
            if seen[q] {
                return Err(Error::Domain("partition subsets overlap".into()));
            }
            seen[q] = true;
        }
        if !group.is_cleanable(subset)? {
            return Err(Error::NotCleanable);
        }
    }
    if seen.iter().any(|&s| !s) {
        return Err(Error::Domain("partition does not cover the register".into()));
    }

    let mut scalar_checks = Vec::new();
    if !transversal_logicals.is_empty() {
        if n > 10 {
            return Err(Error::DenseCapExceeded {
                what: "scalar check",
                qubits: n,
                cap: 10,
            });
        }
        let (zero, one) = group.logical_basis()?;
        for u in transversal_logicals {
            u.assert_unitary()?;
            for base in [group.logical_x(), group.logical_z()] {
                let cleaned = group.clean_operator(base, partition.last().unwrap())?;
                let pd = cleaned.to_dense()?;
                let comm = crate::clifford::group_commutator(u, &pd)?;
                let c00 = zero.inner(&comm.apply(&zero)?)?;
                let mut deviation: f64 = 0.0;
                for basis_state in [&zero, &one] {
                    let applied = comm.apply(basis_state)?;
                    let residual = applied.sub(&basis_state.scale(c00))?;
                    deviation = deviation.max(residual.norm());
                }
                scalar_checks.push(ScalarCheck {
                    scalar: c00,
                    deviation,
                });
            }
        }
    }

    Ok(LevelBoundReport {
        level_bound: partition.len() - 1,
        scalar_checks,
    })
}
