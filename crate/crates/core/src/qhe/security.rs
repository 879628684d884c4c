//! Security estimators for the scheme: the exact dense mixture, the
//! factorized Gram bound, the closed-form epsilon tradeoff, the
//! no-withholding rank experiment, and the random-access-coding harness.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qla::DenseOperator;
use crate::tol;
use crate::transversal::{verify_transversal, ProductOperator};

use super::{decrypt, encrypt, keygen, server_view, QheParams, SecretKey};

/// K^{mn} Tr(gamma_S gamma_S') through the factorized identity: only the
/// reduced states on the intersection subsystems are materialized, and the
/// noise arrays contribute exact powers of two that cancel analytically.
///
/// Disjoint keys give exactly 1 with no floating-point work.
pub fn gram_overlap(
    params: &QheParams,
    bits: &[u8],
    s1: &SecretKey,
    s2: &SecretKey,
) -> Result<f64> {
    if bits.len() != params.p() {
        return Err(Error::InvalidScheme("input length mismatch".into()));
    }
    let delta: Vec<usize> = params
        .sent()
        .iter()
        .enumerate()
        .filter(|(o, _)| s1.columns()[*o] == s2.columns()[*o])
        .map(|(_, &q)| q)
        .collect();
    gram_overlap_for_subset(params, bits, &delta)
}

/// Same quantity with the intersection pattern given directly as physical
/// positions.
fn gram_overlap_for_subset(params: &QheParams, bits: &[u8], delta: &[usize]) -> Result<f64> {
    if delta.is_empty() {
        return Ok(1.0);
    }
    let ell = delta.len();
    let mut product = 1.0f64;
    for &bit in bits {
        let block = if bit == 0 {
            params.code().logical_zero()
        } else {
            params.code().logical_one()
        };
        let marginal = block.reduced_density(delta)?;
        product *= marginal.purity();
    }
    Ok((params.subsystem_dim()).powi(ell as i32) * product)
}

/// Dense oracle for the same overlap: builds both server views and contracts
/// them, scaled by the full dimension K^{mn}.
pub fn gram_overlap_dense(
    params: &QheParams,
    bits: &[u8],
    s1: &SecretKey,
    s2: &SecretKey,
) -> Result<f64> {
    let v1 = server_view(params, &encrypt(params, s1, bits)?)?;
    let v2 = server_view(params, &encrypt(params, s2, bits)?)?;
    let dim = (1u64 << params.server_qubits()) as f64;
    Ok(dim * v1.trace_product(&v2)?.re)
}

/// Exact dense security figures, available while m n p stays within the
/// dense cap.
#[derive(Debug, Clone)]
pub struct SecurityExact {
    pub dist_to_uniform_x: f64,
    pub dist_to_uniform_y: f64,
    pub dist_between: f64,
}

fn for_each_key(params: &QheParams, mut f: impl FnMut(&SecretKey) -> Result<()>) -> Result<()> {
    let n = params.n_sent();
    let m = params.m();
    let mut columns = vec![0usize; n];
    loop {
        f(&SecretKey {
            columns: columns.clone(),
        })?;
        // mixed-radix increment
        let mut i = 0;
        loop {
            if i == n {
                return Ok(());
            }
            columns[i] += 1;
            if columns[i] < m {
                break;
            }
            columns[i] = 0;
            i += 1;
        }
    }
}

fn key_average_view(params: &QheParams, bits: &[u8]) -> Result<DenseOperator> {
    let total = params.server_qubits();
    if total > 10 {
        return Err(Error::DenseCapExceeded {
            what: "dense key average",
            qubits: total,
            cap: 10,
        });
    }
    let keys = (params.m() as f64).powi(params.n_sent() as i32);
    let mut acc = DenseOperator::zeros(total);
    for_each_key(params, |key| {
        let view = server_view(params, &encrypt(params, key, bits)?)?;
        acc = acc.add(&view)?;
        Ok(())
    })?;
    Ok(acc.scale(Complex64::new(1.0 / keys, 0.0)))
}

/// Materializes the uniform key mixture densely and reports raw 1-norm
/// distances to the maximally mixed state and between two plaintexts.
pub fn security_exact(params: &QheParams, x: &[u8], y: &[u8]) -> Result<SecurityExact> {
    let ex = key_average_view(params, x)?;
    let ey = key_average_view(params, y)?;
    let uniform = DenseOperator::maximally_mixed(params.server_qubits());
    Ok(SecurityExact {
        dist_to_uniform_x: ex.trace_distance(&uniform)?,
        dist_to_uniform_y: ey.trace_distance(&uniform)?,
        dist_between: ex.trace_distance(&ey)?,
    })
}

/// Factorized security bound and its ingredients.
#[derive(Debug, Clone)]
pub struct SecurityBound {
    /// sqrt(K^{mn} Tr(E_S[gamma_S]^2) - 1), an upper bound on the 1-norm
    /// distance to uniform.
    pub bound_1norm: f64,
    /// Intersection-size distribution over independent key pairs.
    pub p_ell: Vec<f64>,
    /// Smallest c with overlap <= K^{ell - c} over realizable intersecting
    /// patterns. Exactly 0 when nothing is withheld (pure columns do not
    /// mix); None only when no intersecting pattern is realizable.
    pub empirical_c: Option<f64>,
    /// Mean of the pairwise overlap, K^{mn} Tr(E^2).
    pub mean_gram: f64,
    /// Whether the mean is an exact aggregation (always at desk scale).
    pub exact: bool,
}

fn binomial(n: usize, k: usize) -> u128 {
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Exact intersection-size distribution C(n,l) (m-1)^{n-l} / m^n.
pub fn p_ell_table(n: usize, m: usize) -> Vec<f64> {
    let m_pow = |e: usize| -> f64 { (m as f64).powi(e as i32) };
    (0..=n)
        .map(|ell| binomial(n, ell) as f64 * (m as f64 - 1.0).powi((n - ell) as i32) / m_pow(n))
        .collect()
}

/// Evaluates the pairwise-overlap bound by aggregating over intersection
/// patterns: every key pair with the same match set contributes the same
/// overlap, so the m^{2n} pairwise sum collapses to 2^n exact terms.
pub fn security_bound(params: &QheParams, bits: &[u8]) -> Result<SecurityBound> {
    let n = params.n_sent();
    if n > 24 {
        return Err(Error::EnumerationBudget {
            pairs: (params.m() as u128).pow(2 * n as u32),
        });
    }
    let m = params.m() as f64;
    let p_match = 1.0 / m;
    let p_differ = (m - 1.0) / m;
    let k_log2 = params.p() as f64;

    let mut mean = 0.0f64;
    let mut min_c: Option<f64> = None;
    for mask in 0u64..(1 << n) {
        let ell = mask.count_ones() as usize;
        if params.m() == 1 && ell != n {
            continue; // single-column keys always coincide
        }
        let delta: Vec<usize> = (0..n)
            .filter(|o| mask >> o & 1 == 1)
            .map(|o| params.sent()[o])
            .collect();
        let gram = gram_overlap_for_subset(params, bits, &delta)?;
        let prob = if params.m() == 1 {
            1.0
        } else {
            p_match.powi(ell as i32) * p_differ.powi((n - ell) as i32)
        };
        mean += prob * gram;
        if ell >= 1 {
            // gram = K^{ell - c}  =>  c = ell - log_K gram
            let c = ell as f64 - gram.log2() / k_log2;
            min_c = Some(min_c.map_or(c, |cur: f64| cur.min(c)));
        }
    }

    Ok(SecurityBound {
        bound_1norm: (mean - 1.0).max(0.0).sqrt(),
        p_ell: p_ell_table(n, params.m()),
        empirical_c: min_c,
        mean_gram: mean,
        exact: true,
    })
}

/// Closed-form epsilon(K, m) with the constant made explicit.
#[derive(Debug, Clone, Copy)]
pub struct EpsilonValue {
    pub value: f64,
    /// The radicand went negative: the closed form is vacuous there and the
    /// reported value is clamped to 0.
    pub indeterminate: bool,
}

/// ((m-1)/m)^n - 1 + K^{-c} (2K/m)^n, square-rooted. The middle term is
/// evaluated in the log domain so large K and m stay finite.
pub fn epsilon_formula(k: f64, m: f64, n: usize, c: f64) -> Result<EpsilonValue> {
    if k < 2.0 || m < 1.0 || n == 0 {
        return Err(Error::Domain(
            "epsilon formula needs K >= 2, m >= 1, n >= 1".into(),
        ));
    }
    if !(0.0 < c && c < 1.0) {
        return Err(Error::Domain("constant c must lie in (0, 1)".into()));
    }
    let first = ((m - 1.0) / m).powi(n as i32);
    let log2_tail = -c * k.log2() + n as f64 * ((2.0 * k / m).log2());
    let tail = log2_tail.exp2();
    let radicand = first - 1.0 + tail;
    if radicand < 0.0 {
        Ok(EpsilonValue {
            value: 0.0,
            indeterminate: true,
        })
    } else {
        Ok(EpsilonValue {
            value: radicand.sqrt(),
            indeterminate: false,
        })
    }
}

/// Spectrum report of the key-averaged encrypted state.
#[derive(Debug, Clone)]
pub struct RankExperimentReport {
    pub dim: usize,
    /// Eigenvalues above the rank cutoff.
    pub rank: usize,
    pub rank_fraction: f64,
    /// m^n 2^{n p (m-1)}: the rank count for pure code columns; absent when
    /// subsystems are withheld (the columns are then mixed).
    pub rank_bound: Option<f64>,
    /// (2^n)^{log2 m - p}: fraction bound for pure code columns.
    pub fraction_bound: Option<f64>,
    /// 2 (dim - rank) / dim: uniform mass stranded on the kernel.
    pub distance_floor: f64,
    /// Actual 1-norm distance to the maximally mixed state.
    pub measured_distance: f64,
}

/// Diagonalizes E_S[gamma_S] densely and reports rank and distance figures.
/// Combine with [`QheParams::no_withhold`] for the pure-column variant.
pub fn rank_experiment(params: &QheParams, bits: &[u8]) -> Result<RankExperimentReport> {
    let mean = key_average_view(params, bits)?;
    let dim = mean.dim();
    let eigs = mean.hermitian_eigenvalues();
    let rank = eigs.iter().filter(|&&e| e > tol::RANK_CUTOFF).count();
    let uniform = 1.0 / dim as f64;
    let measured_distance = eigs.iter().map(|e| (e - uniform).abs()).sum();
    let n = params.n_sent() as f64;
    let (rank_bound, fraction_bound) = if params.withheld().is_empty() {
        let m = params.m() as f64;
        let p = params.p() as f64;
        let rb = m.powf(n) * (n * p * (m - 1.0)).exp2();
        let fb = (n * (m.log2() - p)).exp2();
        (Some(rb), Some(fb))
    } else {
        (None, None)
    };
    Ok(RankExperimentReport {
        dim,
        rank,
        rank_fraction: rank as f64 / dim as f64,
        rank_bound,
        fraction_bound,
        distance_floor: 2.0 * (dim - rank) as f64 / dim as f64,
        measured_distance,
    })
}

/// One database entry of the random-access-coding reduction: a named
/// transversal implementation together with its classical truth table over
/// p-bit inputs.
#[derive(Debug, Clone)]
pub struct QracMember {
    pub name: String,
    pub op: ProductOperator,
    /// truth[x] is the output string (as an integer) on input x.
    pub truth: Vec<usize>,
}

impl QracMember {
    /// Builds the permutation target the truth table describes.
    pub fn target(&self, p: usize) -> Result<DenseOperator> {
        let dim = 1usize << p;
        if self.truth.len() != dim {
            return Err(Error::InvalidScheme(format!(
                "truth table needs {dim} entries, got {}",
                self.truth.len()
            )));
        }
        let mut seen = vec![false; dim];
        let mut mat = nalgebra::DMatrix::<Complex64>::zeros(dim, dim);
        for (x, &y) in self.truth.iter().enumerate() {
            if y >= dim || seen[y] {
                return Err(Error::InvalidScheme(
                    "truth table is not a permutation (not classically reversible)".into(),
                ));
            }
            seen[y] = true;
            mat[(y, x)] = Complex64::ONE;
        }
        DenseOperator::from_matrix(p, mat)
    }
}

#[derive(Debug, Clone)]
pub struct QracQueryResult {
    pub name: String,
    /// Worst-case success probability over all inputs.
    pub success_probability: f64,
}

#[derive(Debug, Clone)]
pub struct QracReport {
    pub queries: Vec<QracQueryResult>,
    /// m n p qubits sent from client to server.
    pub communication_qubits: usize,
}

/// Runs the encode-evaluate-decrypt loop for every family member over every
/// input and reports per-query success probabilities.
pub fn qrac_harness(
    params: &QheParams,
    seed: u64,
    family: &[QracMember],
) -> Result<QracReport> {
    if params.p() > 2 {
        return Err(Error::DenseCapExceeded {
            what: "random-access harness",
            qubits: params.p(),
            cap: 2,
        });
    }
    let p = params.p();
    let key = keygen(params, seed);
    let mut queries = Vec::with_capacity(family.len());
    for member in family {
        let target = member.target(p)?;
        let report = verify_transversal(params.code(), &member.op, &target)?;
        if !report.logical {
            return Err(Error::InvalidScheme(format!(
                "family member `{}` has no verified transversal implementation",
                member.name
            )));
        }
        let mut worst = 1.0f64;
        for x in 0..(1usize << p) {
            let bits: Vec<u8> = (0..p).map(|b| ((x >> (p - 1 - b)) & 1) as u8).collect();
            let ct = encrypt(params, &key, &bits)?;
            let evaluated = super::evaluate(params, &ct, &member.op)?;
            let out = decrypt(params, &evaluated, &key)?;
            let decoded: usize = out
                .bits
                .iter()
                .fold(0usize, |acc, &b| (acc << 1) | b as usize);
            let success = if decoded == member.truth[x] {
                out.probability
            } else {
                0.0
            };
            worst = worst.min(success);
        }
        queries.push(QracQueryResult {
            name: member.name.clone(),
            success_probability: worst,
        });
    }
    Ok(QracReport {
        queries,
        communication_qubits: params.server_qubits(),
    })
}
