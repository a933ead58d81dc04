//! Combinatorial plumbing for the Cauchy-Binet sums: binomials, subset
//! unranking, and determinants of 0/1 incidence minors.

use crate::error::{Error, Result};

/// Rows of an incidence matrix `E`, one `bool` per basis element.
pub(crate) type Incidence = Vec<Vec<bool>>;

/// Pascal's triangle up to row `m`, saturating at `u64::MAX`.
pub(crate) struct Binomials {
    table: Vec<Vec<u64>>,
}

impl Binomials {
    pub(crate) fn new(m: usize) -> Self {
        let mut table = vec![vec![0u64; m + 1]; m + 1];
        for n in 0..=m {
            table[n][0] = 1;
            for k in 1..=n {
                table[n][k] = table[n - 1][k - 1].saturating_add(table[n - 1][k]);
            }
        }
        Binomials { table }
    }

    pub(crate) fn get(&self, n: usize, k: usize) -> u64 {
        if k > n {
            0
        } else {
            self.table[n][k]
        }
    }
}

/// Number of `k`-subsets of `m` elements, refusing counts above `cap` unless
/// `force` is set.
pub(crate) fn subset_count(
    binom: &Binomials,
    m: usize,
    k: usize,
    cap: u64,
    force: bool,
) -> Result<u64> {
    let count = binom.get(m, k);
    let blowup = || Error::CombinatorialBlowup {
        m,
        k,
        count: if count == u64::MAX {
            "more than 2^64".to_string()
        } else {
            count.to_string()
        },
        cap,
    };
    if count == u64::MAX || (count > cap && !force) {
        return Err(blowup());
    }
    Ok(count)
}

/// The `rank`th `k`-subset of `0..m` in lexicographic order.
pub(crate) fn unrank(binom: &Binomials, mut rank: u64, m: usize, k: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let mut next = 0;
    for slot in 0..k {
        let remaining = k - slot - 1;
        loop {
            let with_next = binom.get(m - next - 1, remaining);
            if rank < with_next {
                out.push(next);
                next += 1;
                break;
            }
            rank -= with_next;
            next += 1;
        }
    }
    out
}

/// Determinant of the square 0/1 minor with the given rows and columns, by
/// integer Bareiss elimination. Entries of such minors stay far below the
/// `i128` range for any size the subset cap admits.
pub(crate) fn incidence_minor(e: &Incidence, rows: &[usize], cols: &[usize]) -> i128 {
    let n = rows.len();
    debug_assert_eq!(n, cols.len());
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = rows
        .iter()
        .map(|&r| cols.iter().map(|&c| i128::from(e[r][c])).collect())
        .collect();
    // A zero row or column settles it immediately; incidence minors often have one.
    if a.iter().any(|row| row.iter().all(|&v| v == 0))
        || (0..n).any(|j| a.iter().all(|row| row[j] == 0))
    {
        return 0;
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        let Some(p) = (k..n).find(|&r| a[r][k] != 0) else {
            return 0;
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}
