//! Worker-pool variants of the sweep commands. Work is split into chunks by
//! index and the partial results are merged in chunk order, so the output is
//! deterministic for a fixed worker count.

use qclab_core::codes::CodeSpace;
use qclab_core::error::{Error, Result};
use qclab_core::qhe::{self, QheParams, SecretKey, SecurityBound};
use qclab_core::qla::DenseOperator;
use qclab_core::transversal::{strongly_transversal_search, SearchHit};

/// Library search, chunked across workers; hits come back in library order.
pub fn search_chunks(
    code: &CodeSpace,
    target: &DenseOperator,
    library: &[(String, DenseOperator)],
    workers: usize,
) -> Result<Vec<SearchHit>> {
    let workers = workers.max(1).min(library.len().max(1));
    let chunk = library.len().div_ceil(workers);
    let mut partials: Vec<Result<Vec<SearchHit>>> = Vec::new();
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for slice in library.chunks(chunk) {
            handles.push(scope.spawn(move || strongly_transversal_search(code, target, slice)));
        }
        for handle in handles {
            partials.push(handle.join().expect("search worker panicked"));
        }
    });
    let mut hits = Vec::new();
    for partial in partials {
        hits.extend(partial?);
    }
    Ok(hits)
}

/// Security bound with the pairwise overlaps computed across workers.
///
/// Workers fill a pair-indexed table of overlap values; the reduction is a
/// single sequential fold in key-pair order, so the result is bit-identical
/// for every worker count. The grouped exact path in the library computes
/// the same quantity by aggregating intersection patterns; the CLI tests
/// hold the two within floating tolerance of each other.
pub fn security_bound_chunked(
    params: &QheParams,
    bits: &[u8],
    workers: usize,
) -> Result<SecurityBound> {
    let n = params.n_sent();
    let m = params.m();
    let total: u128 = (m as u128).pow(2 * n as u32);
    if total > 10_000_000 {
        return Err(Error::EnumerationBudget { pairs: total });
    }
    let total = total as usize;
    let workers = workers.max(1).min(total);
    let chunk = total.div_ceil(workers);

    fn key_of(params: &QheParams, mut idx: usize) -> SecretKey {
        let mut columns = vec![0usize; params.n_sent()];
        for slot in columns.iter_mut() {
            *slot = idx % params.m();
            idx /= params.m();
        }
        SecretKey::new(params, columns).expect("valid key")
    }

    let keys = m.pow(n as u32);
    let mut table: Vec<(f64, usize)> = vec![(0.0, 0); total];
    {
        let mut slices: Vec<&mut [(f64, usize)]> = table.chunks_mut(chunk).collect();
        let mut failures: Vec<Result<()>> = Vec::new();
        std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for (w, slice) in slices.drain(..).enumerate() {
                let start = w * chunk;
                handles.push(scope.spawn(move || {
                    for (offset, slot) in slice.iter_mut().enumerate() {
                        let pair = start + offset;
                        let s1 = key_of(params, pair / keys);
                        let s2 = key_of(params, pair % keys);
                        let ell = s1
                            .columns()
                            .iter()
                            .zip(s2.columns())
                            .filter(|(a, b)| a == b)
                            .count();
                        *slot = (qhe::gram_overlap(params, bits, &s1, &s2)?, ell);
                    }
                    Ok(())
                }));
            }
            for handle in handles {
                failures.push(handle.join().expect("security worker panicked"));
            }
        });
        for failure in failures {
            failure?;
        }
    }

    // Sequential fold in pair order: identical bits for any worker count.
    let mut mean = 0.0f64;
    let mut min_c: Option<f64> = None;
    for &(g, ell) in &table {
        mean += g;
        if ell >= 1 {
            let c = ell as f64 - g.log2() / params.p() as f64;
            min_c = Some(min_c.map_or(c, |cur: f64| cur.min(c)));
        }
    }
    mean /= total as f64;

    Ok(SecurityBound {
        bound_1norm: (mean - 1.0).max(0.0).sqrt(),
        p_ell: qhe::p_ell_table(n, m),
        empirical_c: min_c,
        mean_gram: mean,
        exact: true,
    })
}
