//! Bit-vector linear algebra over GF(2).
//!
//! Vectors are `u64` masks (registers here never exceed a few dozen bits);
//! matrices are row lists. Solvers return the lexicographically smallest
//! solution, treating coefficient 0 (the first column) as the most
//! significant position, so results are deterministic.

/// Rank of the row space.
pub fn rank(rows: &[u64]) -> usize {
    let mut basis: Vec<u64> = Vec::new();
    for &row in rows {
        let mut v = row;
        for &b in &basis {
            let pivot = 1u64 << (63 - b.leading_zeros());
            if v & pivot != 0 {
                v ^= b;
            }
        }
        if v != 0 {
            basis.push(v);
        }
    }
    basis.len()
}

/// Is `v` in the span of `rows`?
pub fn in_span(rows: &[u64], v: u64) -> bool {
    let mut aug: Vec<u64> = rows.to_vec();
    let base = rank(&aug);
    aug.push(v);
    rank(&aug) == base
}

/// Solves `A x = b` where column `j` of `A` holds `cols[j]` (each a bit mask
/// over equation indices). Returns the lexicographically smallest solution as
/// a mask over `cols` indices (bit `j` set means `x_j = 1`), or `None` when
/// the system is inconsistent.
///
/// "Lexicographically smallest" orders solutions by the tuple
/// `(x_0, x_1, ...)`, preferring 0 in the earliest coordinate.
pub fn solve_lex_min(cols: &[u64], b: u64, num_equations: usize) -> Option<u64> {
    // Gaussian elimination on the augmented matrix, rows = equations.
    let ncols = cols.len();
    let mut rows: Vec<(u64, bool)> = (0..num_equations)
        .map(|eq| {
            let mut row = 0u64;
            for (j, &col) in cols.iter().enumerate() {
                if col >> eq & 1 == 1 {
                    row |= 1 << j;
                }
            }
            (row, b >> eq & 1 == 1)
        })
        .collect();

    let mut pivot_of_col: Vec<Option<usize>> = vec![None; ncols];
    let mut next_row = 0usize;
    for col in 0..ncols {
        let Some(src) = (next_row..rows.len()).find(|&r| rows[r].0 >> col & 1 == 1) else {
            continue;
        };
        rows.swap(next_row, src);
        let (prow, pb) = rows[next_row];
        for (r, row) in rows.iter_mut().enumerate() {
            if r != next_row && row.0 >> col & 1 == 1 {
                row.0 ^= prow;
                row.1 ^= pb;
            }
        }
        pivot_of_col[col] = Some(next_row);
        next_row += 1;
    }
    // Inconsistent if a zero row demands 1.
    for &(row, rhs) in &rows {
        if row == 0 && rhs {
            return None;
        }
    }
    // Particular solution: free variables at 0.
    let mut x = 0u64;
    for col in 0..ncols {
        if let Some(r) = pivot_of_col[col] {
            if rows[r].1 {
                x |= 1 << col;
            }
        }
    }
    // Reduce the nullspace basis so every vector has a distinct lowest set
    // bit, then clear coordinates of x in ascending order. A nullspace vector
    // only touches bits at or after its leading bit, so one ascending pass
    // yields the lexicographic minimum over the whole affine solution set.
    let reduced = reduce_by_leading_bit(nullspace(cols, num_equations));
    for &nv in &reduced {
        let lead = nv.trailing_zeros() as usize;
        if x >> lead & 1 == 1 {
            x ^= nv;
        }
    }
    Some(x)
}

/// Gaussian elimination with the lowest set bit as pivot; output is sorted by
/// leading bit and every leading bit is unique.
fn reduce_by_leading_bit(mut basis: Vec<u64>) -> Vec<u64> {
    let mut reduced: Vec<u64> = Vec::new();
    basis.retain(|&v| v != 0);
    while let Some(mut v) = basis.pop() {
        loop {
            let lead = v.trailing_zeros();
            match reduced.iter().position(|r| r.trailing_zeros() == lead) {
                Some(i) => {
                    v ^= reduced[i];
                    if v == 0 {
                        break;
                    }
                }
                None => {
                    reduced.push(v);
                    break;
                }
            }
        }
    }
    // Clear later leading bits out of earlier vectors for a canonical form.
    reduced.sort_by_key(|v| v.trailing_zeros());
    for i in 0..reduced.len() {
        for j in (i + 1)..reduced.len() {
            let lead_j = reduced[j].trailing_zeros();
            if reduced[i] >> lead_j & 1 == 1 {
                reduced[i] ^= reduced[j];
            }
        }
    }
    reduced.sort_by_key(|v| v.trailing_zeros());
    reduced
}

/// Basis of the nullspace of the column system `cols` (masks over column
/// indices).
pub fn nullspace(cols: &[u64], num_equations: usize) -> Vec<u64> {
    let ncols = cols.len();
    let mut rows: Vec<u64> = (0..num_equations)
        .map(|eq| {
            let mut row = 0u64;
            for (j, &col) in cols.iter().enumerate() {
                if col >> eq & 1 == 1 {
                    row |= 1 << j;
                }
            }
            row
        })
        .collect();

    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut next_row = 0usize;
    for col in 0..ncols {
        let Some(src) = (next_row..rows.len()).find(|&r| rows[r] >> col & 1 == 1) else {
            continue;
        };
        rows.swap(next_row, src);
        let prow = rows[next_row];
        for (r, row) in rows.iter_mut().enumerate() {
            if r != next_row && *row >> col & 1 == 1 {
                *row ^= prow;
            }
        }
        pivot_cols.push(col);
        next_row += 1;
    }
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = 1u64 << free;
        for (pi, &pc) in pivot_cols.iter().enumerate() {
            if rows[pi] >> free & 1 == 1 {
                v |= 1 << pc;
            }
        }
        basis.push(v);
    }
    basis
}
