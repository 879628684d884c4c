//! Quantitative information bounds: the random-access-coding lower bound,
//! the communication floor for fully homomorphic evaluation of classical
//! functions, and the crossing analysis between a scheme's encoding size and
//! a function class's information requirement.
//!
//! Everything here is closed-form arithmetic; comparisons run in the log2
//! domain so sweeps stay finite far past double-precision integer range.

use crate::error::{Error, Result};
use crate::qla::binary_entropy;

/// n (1 - H(p)): minimum qubits to encode n bits with per-bit recovery
/// probability p.
pub fn nayak_lower_bound(n: usize, p: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    Ok(n as f64 * (1.0 - binary_entropy(p)?))
}

/// 2^n (1 - H(epsilon)): communication floor for evaluating every Boolean
/// function on n bits under security epsilon.
pub fn qfhe_comm_bound(n_input_bits: usize, epsilon: f64) -> Result<f64> {
    Ok((n_input_bits as f64).exp2() * (1.0 - binary_entropy(epsilon)?))
}

/// Outcome of comparing scheme size against a class's requirement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// The scheme's size clears the requirement at every point and the class
    /// grows no faster than affine in p; dominance is stable in range.
    SchemeDefeatsBound,
    /// The requirement overtakes the scheme size and stays above it through
    /// the end of the range.
    BoundExcludesScheme,
    /// No crossover in range; nothing asymptotic is claimed.
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::SchemeDefeatsBound => "scheme_defeats_bound",
            Verdict::BoundExcludesScheme => "bound_excludes_scheme",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// One sweep point, in log2 coordinates where it matters.
#[derive(Debug, Clone)]
pub struct CrossPoint {
    pub p: usize,
    /// log2 of the noise-array width m = ceil(K^{c'}).
    pub log2_m: f64,
    /// log2 of the total scheme size m n p.
    pub log2_scheme_size: f64,
    /// log2 of the required size log2|F_p|.
    pub log2_required: f64,
    /// Requirement exceeds the scheme size at this point.
    pub excluded_here: bool,
}

#[derive(Debug, Clone)]
pub struct CrossingReport {
    pub points: Vec<CrossPoint>,
    pub verdict: Verdict,
    /// First p from which the requirement stays above the scheme size.
    pub crossover_p: Option<usize>,
}

/// Sweeps p, sizing the scheme as m n p with m = ceil(K^{c'}), K = 2^p, and
/// compares against log2|F_p| supplied by the caller.
///
/// Verdicts over the finite sweep only: a monotone crossover excludes the
/// scheme; dominance everywhere with an at-most-affine class exponent counts
/// as a scheme win; anything else is inconclusive.
pub fn crossing_analysis(
    n: usize,
    c_prime: f64,
    log2_class_size: impl Fn(usize) -> f64,
    p_range: std::ops::RangeInclusive<usize>,
) -> Result<CrossingReport> {
    if !(0.0 < c_prime && c_prime < 1.0) {
        return Err(Error::Domain("c' must lie in (0, 1)".into()));
    }
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    let mut points = Vec::new();
    for p in p_range {
        if p == 0 {
            continue;
        }
        let log2_k = p as f64;
        // ceil only matters while m is exactly representable
        let log2_m = if c_prime * log2_k <= 52.0 {
            (c_prime * log2_k).exp2().ceil().log2()
        } else {
            c_prime * log2_k
        };
        let log2_scheme_size = log2_m + (n as f64).log2() + (p as f64).log2();
        let required = log2_class_size(p);
        if required <= 0.0 {
            return Err(Error::Domain(format!(
                "class size exponent must be positive, got {required} at p = {p}"
            )));
        }
        let log2_required = required.log2();
        points.push(CrossPoint {
            p,
            log2_m,
            log2_scheme_size,
            log2_required,
            excluded_here: log2_required > log2_scheme_size,
        });
    }
    if points.is_empty() {
        return Err(Error::Domain("empty sweep range".into()));
    }

    // Monotone crossover: the last run of excluded points reaching the end.
    let crossover_p = if points.last().expect("nonempty").excluded_here {
        let mut start = points.len() - 1;
        while start > 0 && points[start - 1].excluded_here {
            start -= 1;
        }
        Some(points[start].p)
    } else {
        None
    };

    let verdict = if crossover_p.is_some() {
        Verdict::BoundExcludesScheme
    } else if points.iter().all(|pt| !pt.excluded_here) && class_is_subaffine(&points) {
        Verdict::SchemeDefeatsBound
    } else {
        Verdict::Inconclusive
    };

    Ok(CrossingReport {
        points,
        verdict,
        crossover_p,
    })
}

/// The class exponent grows at most affinely: log2|F_p| / p never increases
/// across the sweep.
fn class_is_subaffine(points: &[CrossPoint]) -> bool {
    let mut last = f64::INFINITY;
    for pt in points {
        let ratio = pt.log2_required.exp2() / pt.p as f64;
        if ratio > last + 1e-12 {
            return false;
        }
        last = ratio;
    }
    true
}
