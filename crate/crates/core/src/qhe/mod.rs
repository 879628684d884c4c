//! Code-based homomorphic encryption on classical bits.
//!
//! The client encodes each input bit into an [[n+r, 1, d]] code, keeps one
//! subsystem per subcode factor (r < d, so the withheld set is a correctable
//! erasure), and hides the remaining n subsystems as the secret columns of n
//! p-row arrays of maximally mixed qubits. A server that applies a
//! transversal gate column-by-column implements the logical gate up to a
//! unitary on the withheld qubits, which decryption removes by erasure
//! recovery.
//!
//! The joint state of the code qubits (sent and withheld) is kept dense;
//! noise qubits are tracked symbolically and only materialized inside the
//! dense security estimators, so correctness never depends on m.

use std::collections::BTreeSet;

use num_complex::Complex64;

use crate::codes::{self, CodeSpace, ErasureDecoder, FoldStructure};
use crate::error::{Error, Result};
use crate::qla::{DenseOperator, DenseState};
use crate::tol;
use crate::transversal::ProductOperator;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

mod security;

pub use security::{
    epsilon_formula, gram_overlap, gram_overlap_dense, p_ell_table, qrac_harness,
    rank_experiment, security_bound, security_exact, EpsilonValue, QracMember, QracQueryResult,
    QracReport, RankExperimentReport, SecurityBound, SecurityExact,
};

/// Scheme parameters: the code, the withheld subsystems, the input length p,
/// and the noise-array width m.
#[derive(Debug, Clone)]
pub struct QheParams {
    code: CodeSpace,
    fold: FoldStructure,
    distance: usize,
    /// Withheld physical positions, ascending; empty only for the
    /// no-withholding experiment variant.
    withheld: Vec<usize>,
    /// Sent physical positions, ascending.
    sent: Vec<usize>,
    p: usize,
    m: usize,
    ancilla_count: usize,
}

impl QheParams {
    /// Standard scheme: withholds the lowest-indexed qubit of each subcode
    /// factor.
    pub fn new(code: CodeSpace, p: usize, m: usize) -> Result<Self> {
        let fold = codes::rfold_decompose(&code)?;
        let withheld: Vec<usize> = fold
            .factors
            .iter()
            .map(|f| *f.qubits.iter().min().expect("nonempty factor"))
            .collect();
        Self::with_withheld(code, &withheld, p, m)
    }

    /// Standard scheme with an explicit withheld set (one position per
    /// subcode factor).
    pub fn with_withheld(code: CodeSpace, withheld: &[usize], p: usize, m: usize) -> Result<Self> {
        let fold = codes::rfold_decompose(&code)?;
        let distance = code.distance()?;
        let set: BTreeSet<usize> = withheld.iter().copied().collect();
        if set.len() != withheld.len() {
            return Err(Error::InvalidScheme("repeated withheld position".into()));
        }
        if set.len() != fold.fold_count() {
            return Err(Error::InvalidScheme(format!(
                "withheld set must pick one subsystem per subcode factor ({} factors, {} given)",
                fold.fold_count(),
                set.len()
            )));
        }
        for factor in &fold.factors {
            let hits = factor.qubits.iter().filter(|q| set.contains(q)).count();
            if hits != 1 {
                return Err(Error::InvalidScheme(format!(
                    "subcode factor on {:?} must contain exactly one withheld position, has {hits}",
                    factor.qubits
                )));
            }
        }
        if set.len() >= distance {
            return Err(Error::InvalidScheme(format!(
                "fold count r = {} must be smaller than the distance d = {distance}",
                set.len()
            )));
        }
        Self::build(code, fold, distance, set.into_iter().collect(), p, m)
    }

    /// Variant with nothing withheld; the encoded columns are pure. Used by
    /// the rank experiment, not by the homomorphic pipeline.
    pub fn no_withhold(code: CodeSpace, p: usize, m: usize) -> Result<Self> {
        let fold = codes::rfold_decompose(&code)?;
        // distance is irrelevant without withholding; default 1 when the
        // declared value is missing
        let distance = code.declared_distance().unwrap_or(1);
        Self::build(code, fold, distance, Vec::new(), p, m)
    }

    fn build(
        code: CodeSpace,
        fold: FoldStructure,
        distance: usize,
        withheld: Vec<usize>,
        p: usize,
        m: usize,
    ) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidScheme("p must be at least 1".into()));
        }
        if m == 0 {
            return Err(Error::InvalidScheme("m must be at least 1".into()));
        }
        let n_total = code.n_physical();
        let sent: Vec<usize> = (0..n_total).filter(|q| !withheld.contains(q)).collect();
        if sent.is_empty() {
            return Err(Error::InvalidScheme("no sent subsystems".into()));
        }
        if p * n_total > tol::MAX_STATE_QUBITS {
            return Err(Error::DenseCapExceeded {
                what: "joint code state",
                qubits: p * n_total,
                cap: tol::MAX_STATE_QUBITS,
            });
        }
        Ok(Self {
            code,
            fold,
            distance,
            withheld,
            sent,
            p,
            m,
            ancilla_count: 2,
        })
    }

    pub fn with_ancilla_count(mut self, count: usize) -> Self {
        self.ancilla_count = count;
        self
    }

    pub fn code(&self) -> &CodeSpace {
        &self.code
    }

    pub fn fold(&self) -> &FoldStructure {
        &self.fold
    }

    pub fn distance(&self) -> usize {
        self.distance
    }

    pub fn withheld(&self) -> &[usize] {
        &self.withheld
    }

    pub fn sent(&self) -> &[usize] {
        &self.sent
    }

    /// Number of arrays (sent subsystems).
    pub fn n_sent(&self) -> usize {
        self.sent.len()
    }

    pub fn fold_count(&self) -> usize {
        self.withheld.len()
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn ancilla_count(&self) -> usize {
        self.ancilla_count
    }

    /// Subsystem dimension K = 2^p.
    pub fn subsystem_dim(&self) -> f64 {
        (1u64 << self.p) as f64
    }

    /// Total server qubits m * n * p.
    pub fn server_qubits(&self) -> usize {
        self.m * self.n_sent() * self.p
    }

    /// Symbolic noise qubits per ciphertext.
    pub fn noise_qubits(&self) -> usize {
        self.n_sent() * self.p * (self.m - 1)
    }

    /// Block-major register index of (block, physical position).
    fn quindex(&self, block: usize, position: usize) -> usize {
        block * self.code.n_physical() + position
    }
}

/// One column index per array.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecretKey {
    columns: Vec<usize>,
}

impl SecretKey {
    pub fn new(params: &QheParams, columns: Vec<usize>) -> Result<Self> {
        if columns.len() != params.n_sent() {
            return Err(Error::InvalidScheme(format!(
                "key must have {} entries, got {}",
                params.n_sent(),
                columns.len()
            )));
        }
        if columns.iter().any(|&c| c >= params.m()) {
            return Err(Error::InvalidScheme("key column out of range".into()));
        }
        Ok(Self { columns })
    }

    /// Column per array, 0-based.
    pub fn columns(&self) -> &[usize] {
        &self.columns
    }
}

/// Uniform key from a seeded portable generator; identical seeds give
/// identical keys.
pub fn keygen(params: &QheParams, seed: u64) -> SecretKey {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let columns = (0..params.n_sent())
        .map(|_| rng.random_range(0..params.m()))
        .collect();
    SecretKey { columns }
}

/// Published encryption of a known bit, usable as an evaluation constant.
#[derive(Debug, Clone)]
pub struct AncillaBlock {
    pub label: u8,
    pub state: DenseState,
}

/// Encrypted state: dense joint state of the code qubits (every block,
/// withheld included), symbolic noise count, and the key-derived placements.
#[derive(Debug, Clone)]
pub struct QheCiphertext {
    joint: DenseState,
    placements: Vec<usize>,
    noise_qubits: usize,
    ancillas: Vec<AncillaBlock>,
}

impl QheCiphertext {
    /// Joint state over p blocks of n+r qubits, block-major.
    pub fn joint(&self) -> &DenseState {
        &self.joint
    }

    pub fn noise_qubits(&self) -> usize {
        self.noise_qubits
    }

    pub fn ancillas(&self) -> &[AncillaBlock] {
        &self.ancillas
    }

    /// Column placements; this is the secret key's data and is never part of
    /// the server view.
    pub fn placements(&self) -> &[usize] {
        &self.placements
    }
}

pub fn parse_bits(text: &str, p: usize) -> Result<Vec<u8>> {
    if text.len() != p {
        return Err(Error::InvalidScheme(format!(
            "input must have {p} bits, got {}",
            text.len()
        )));
    }
    text.chars()
        .map(|c| match c {
            '0' => Ok(0u8),
            '1' => Ok(1u8),
            other => Err(Error::Parse(format!("bad bit `{other}`"))),
        })
        .collect()
}

pub fn bits_to_string(bits: &[u8]) -> String {
    bits.iter().map(|b| if *b == 0 { '0' } else { '1' }).collect()
}

fn encode_blocks(params: &QheParams, bits: &[u8]) -> Result<DenseState> {
    let mut joint = DenseState::basis(0, 0)?;
    for &bit in bits {
        let block = if bit == 0 {
            params.code.logical_zero()
        } else {
            params.code.logical_one()
        };
        joint = joint.tensor(block)?;
    }
    Ok(joint)
}

/// Encrypts a p-bit string under the key.
pub fn encrypt(params: &QheParams, key: &SecretKey, bits: &[u8]) -> Result<QheCiphertext> {
    if bits.len() != params.p() {
        return Err(Error::InvalidScheme(format!(
            "input must have {} bits, got {}",
            params.p(),
            bits.len()
        )));
    }
    if key.columns.len() != params.n_sent() {
        return Err(Error::InvalidScheme("key length mismatch".into()));
    }
    let joint = encode_blocks(params, bits)?;
    let mut ancillas = Vec::with_capacity(params.ancilla_count());
    for i in 0..params.ancilla_count() {
        let label = (i % 2) as u8;
        let state = if label == 0 {
            params.code.logical_zero().clone()
        } else {
            params.code.logical_one().clone()
        };
        ancillas.push(AncillaBlock { label, state });
    }
    Ok(QheCiphertext {
        joint,
        placements: key.columns.clone(),
        noise_qubits: params.noise_qubits(),
        ancillas,
    })
}

/// Applies a transversal candidate homomorphically: each sent subsystem's
/// factor acts on the code column of its array (noise columns are fixed by
/// unitary conjugation, so they stay symbolic); withheld factors are never
/// applied.
pub fn evaluate(
    params: &QheParams,
    ct: &QheCiphertext,
    op: &ProductOperator,
) -> Result<QheCiphertext> {
    let n_total = params.code.n_physical();
    if op.n_physical() != n_total {
        return Err(Error::DimensionMismatch {
            expected: n_total,
            got: op.n_physical(),
        });
    }
    if op.num_blocks() != params.p() {
        return Err(Error::DimensionMismatch {
            expected: params.p(),
            got: op.num_blocks(),
        });
    }
    let mut joint = ct.joint.clone();
    for &position in params.sent() {
        let targets: Vec<usize> = (0..params.p())
            .map(|b| params.quindex(b, position))
            .collect();
        joint = joint.apply_gate(&op.factors()[position], &targets)?;
    }
    Ok(QheCiphertext {
        joint,
        placements: ct.placements.clone(),
        noise_qubits: ct.noise_qubits,
        ancillas: ct.ancillas.clone(),
    })
}

/// Decryption outcome: the measured bit string and its exact probability
/// under computational measurement of the decoded logical register.
#[derive(Debug, Clone)]
pub struct Decrypted {
    pub bits: Vec<u8>,
    /// Probability of the reported string.
    pub probability: f64,
    /// Mass that survived the decoders; below 1 signals junk in positions the
    /// key claimed were code columns.
    pub decode_weight: f64,
}

impl Decrypted {
    pub fn bits_string(&self) -> String {
        bits_to_string(&self.bits)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum QubitTag {
    Logical(usize),
    Other,
}

/// Extracts the code columns by key, treats the withheld subsystems as
/// erasures, decodes each block, and measures the logical register.
///
/// The work here depends only on the scheme parameters, never on which or
/// how many gates the server evaluated.
///
/// Key entries that disagree with the true placements make the client grab
/// noise columns; those subsystems enter the decode as maximally mixed junk
/// while the real code qubits are lost, and the surviving decode weight
/// drops below the reporting threshold.
pub fn decrypt(params: &QheParams, ct: &QheCiphertext, key: &SecretKey) -> Result<Decrypted> {
    if key.columns.len() != ct.placements.len() {
        return Err(Error::InvalidScheme("key length mismatch".into()));
    }
    let p = params.p();
    let n_total = params.code.n_physical();

    // Sent positions whose column guess is wrong.
    let mismatched: Vec<usize> = params
        .sent()
        .iter()
        .enumerate()
        .filter(|(o, _)| key.columns[*o] != ct.placements[*o])
        .map(|(_, &q)| q)
        .collect();
    let branch_count = 1usize << (2 * p * mismatched.len());
    if branch_count > 4096 {
        return Err(Error::DenseCapExceeded {
            what: "key-mismatch branch ensemble",
            qubits: 2 * p * mismatched.len(),
            cap: 12,
        });
    }

    let decoder = ErasureDecoder::build(&params.code, params.withheld())?;
    let branch_weight = 1.0 / (1u64 << (p * mismatched.len())) as f64;

    let dim_l = 1usize << p;
    let mut rho_diag = vec![0.0f64; dim_l];
    let mut decode_weight = 0.0f64;

    for branch in 0..branch_count {
        // Per mismatched subsystem: p bits of lost-column projection (c) and
        // p bits of fresh noise basis (b).
        let state = if mismatched.is_empty() {
            ct.joint.clone()
        } else {
            branch_state(params, &ct.joint, &mismatched, branch)?
        };

        // Decode block by block, tracking where qubits land.
        let mut tags: Vec<QubitTag> = (0..p * n_total).map(|_| QubitTag::Other).collect();
        let mut code_positions: Vec<Vec<usize>> = (0..p)
            .map(|b| {
                decoder
                    .keep()
                    .iter()
                    .map(|&q| params.quindex(b, q))
                    .collect()
            })
            .collect();
        let mut current = state;
        for b in 0..p {
            let targets = code_positions[b].clone();
            current = decoder.apply(&current, &targets)?;
            // new register: [logical, junk...] ++ untouched survivors
            let fresh = decoder.output_qubits();
            let mut new_tags: Vec<QubitTag> = Vec::with_capacity(current.num_qubits());
            new_tags.push(QubitTag::Logical(b));
            for _ in 1..fresh {
                new_tags.push(QubitTag::Other);
            }
            let mut survivor_map: Vec<Option<usize>> = vec![None; tags.len()];
            let mut next = fresh;
            for (old_pos, tag) in tags.iter().enumerate() {
                if targets.contains(&old_pos) {
                    continue;
                }
                survivor_map[old_pos] = Some(next);
                new_tags.push(*tag);
                next += 1;
            }
            // remap pending target lists of later blocks
            for positions in code_positions.iter_mut().skip(b + 1) {
                for pos in positions.iter_mut() {
                    *pos = survivor_map[*pos].expect("later blocks never overlap targets");
                }
            }
            tags = new_tags;
        }

        let logical_positions: Vec<usize> = (0..p)
            .map(|b| {
                tags.iter()
                    .position(|t| *t == QubitTag::Logical(b))
                    .expect("logical tag present")
            })
            .collect();
        let rho = current.reduced_density(&logical_positions)?;
        for (i, slot) in rho_diag.iter_mut().enumerate() {
            *slot += branch_weight * rho.entry(i, i).re;
        }
        decode_weight += branch_weight * rho.trace().re;
    }

    if decode_weight < 1.0 - tol::DECODE_WEIGHT {
        return Err(Error::KeyMismatch {
            weight: decode_weight,
        });
    }

    let (best, &mass) = rho_diag
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).expect("finite"))
        .expect("nonempty diagonal");
    let bits: Vec<u8> = (0..p).map(|b| ((best >> (p - 1 - b)) & 1) as u8).collect();
    Ok(Decrypted {
        bits,
        probability: mass / decode_weight,
        decode_weight,
    })
}

/// Branch of the extracted state when some subsystems were grabbed from
/// noise: the lost code qubits are projected onto a computational pattern c
/// and fresh qubits appear in a computational pattern b, each pattern
/// weighted uniformly.
fn branch_state(
    params: &QheParams,
    joint: &DenseState,
    mismatched: &[usize],
    branch: usize,
) -> Result<DenseState> {
    let p = params.p();
    let n = joint.num_qubits();
    let mut masks: Vec<(usize, usize, usize)> = Vec::new(); // (qubit mask, c bits placed, b bits placed)
    let mut cursor = branch;
    for &position in mismatched {
        let c = cursor & ((1 << p) - 1);
        cursor >>= p;
        let b = cursor & ((1 << p) - 1);
        cursor >>= p;
        let mut mask = 0usize;
        let mut c_bits = 0usize;
        let mut b_bits = 0usize;
        for block in 0..p {
            let q = params.quindex(block, position);
            let bitpos = n - 1 - q;
            mask |= 1 << bitpos;
            if (c >> (p - 1 - block)) & 1 == 1 {
                c_bits |= 1 << bitpos;
            }
            if (b >> (p - 1 - block)) & 1 == 1 {
                b_bits |= 1 << bitpos;
            }
        }
        masks.push((mask, c_bits, b_bits));
    }
    let dim = joint.dim();
    let mut amps = vec![Complex64::ZERO; dim];
    let full_mask: usize = masks.iter().map(|(m, _, _)| m).fold(0, |a, b| a | b);
    let full_b: usize = masks.iter().map(|(_, _, b)| b).fold(0, |a, b| a | b);
    let full_c: usize = masks.iter().map(|(_, c, _)| c).fold(0, |a, b| a | b);
    for idx in 0..dim {
        if idx & full_mask != full_b {
            continue;
        }
        let src = (idx & !full_mask) | full_c;
        amps[idx] = joint.amplitude(src);
    }
    DenseState::from_amplitudes(joint.num_qubits(), &amps)
}

/// Dense reconstruction of the server's view: the reduced joint state of the
/// sent subsystems embedded at the key columns of the noise arrays. Array
/// layout: arrays in sent order, m columns each, p qubits per column.
pub fn server_view(params: &QheParams, ct: &QheCiphertext) -> Result<DenseOperator> {
    let total = params.server_qubits();
    if total > 10 {
        return Err(Error::DenseCapExceeded {
            what: "dense server view",
            qubits: total,
            cap: 10,
        });
    }
    let p = params.p();
    let n = params.n_sent();
    let m = params.m();

    // Reduced state on the sent subsystems, subsystem-major.
    let keep: Vec<usize> = params
        .sent()
        .iter()
        .flat_map(|&q| (0..p).map(move |b| params.quindex(b, q)))
        .collect();
    let sigma = ct.joint.reduced_density(&keep)?;
    let full = sigma.tensor(&DenseOperator::maximally_mixed(ct.noise_qubits))?;

    // Current order: code subsystems (array-major, block within), then noise
    // qubits (array-major, spare column, block). Target: arrays side by
    // side, columns within an array, blocks within a column.
    let mut perm = vec![0usize; total];
    for o in 0..n {
        let code_col = ct.placements[o];
        for b in 0..p {
            perm[o * p + b] = (o * m + code_col) * p + b;
        }
        let spare_cols: Vec<usize> = (0..m).filter(|&c| c != code_col).collect();
        for (spare_idx, &col) in spare_cols.iter().enumerate() {
            for b in 0..p {
                perm[n * p + (o * (m - 1) + spare_idx) * p + b] = (o * m + col) * p + b;
            }
        }
    }
    full.permute_qubits(&perm)
}

/// Scheme description parsed from a config file: code name or inline file,
/// parameters, and the seed.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeConfig {
    pub code: String,
    pub p: usize,
    pub m: usize,
    pub seed: u64,
    pub withheld: Option<Vec<usize>>,
}

/// Parses `key: value` scheme files (`code`, `p`, `m`, `seed`, optional
/// `withheld` as space-separated positions).
pub fn parse_scheme_config(text: &str) -> Result<SchemeConfig> {
    let mut code = None;
    let mut p = None;
    let mut m = None;
    let mut seed = 0u64;
    let mut withheld = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let line_no = idx + 1;
        let (k, v) = line
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("line {line_no}: expected `key: value`")))?;
        let v = v.trim();
        match k.trim() {
            "code" => code = Some(v.to_string()),
            "p" => {
                p = Some(v.parse().map_err(|_| {
                    Error::Parse(format!("line {line_no}: bad p `{v}`"))
                })?)
            }
            "m" => {
                m = Some(v.parse().map_err(|_| {
                    Error::Parse(format!("line {line_no}: bad m `{v}`"))
                })?)
            }
            "seed" => {
                seed = v.parse().map_err(|_| {
                    Error::Parse(format!("line {line_no}: bad seed `{v}`"))
                })?
            }
            "withheld" => {
                withheld = Some(
                    v.split_whitespace()
                        .map(|t| {
                            t.parse::<usize>().map_err(|_| {
                                Error::Parse(format!("line {line_no}: bad position `{t}`"))
                            })
                        })
                        .collect::<Result<Vec<usize>>>()?,
                )
            }
            other => {
                return Err(Error::Parse(format!(
                    "line {line_no}: unknown field `{other}`"
                )))
            }
        }
    }
    Ok(SchemeConfig {
        code: code.ok_or_else(|| Error::Parse("scheme file missing `code:`".into()))?,
        p: p.ok_or_else(|| Error::Parse("scheme file missing `p:`".into()))?,
        m: m.ok_or_else(|| Error::Parse("scheme file missing `m:`".into()))?,
        seed,
        withheld,
    })
}
