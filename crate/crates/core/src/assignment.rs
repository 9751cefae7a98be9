//! Max-weight assignment with dual potentials (shortest augmenting paths).
//!
//! Works over any [`Scalar`]. Missing entries are forbidden rather than given a
//! large negative weight, so no sentinel value is needed and exact types stay exact.

use crate::scalar::Scalar;

/// An optimal assignment of every row to a distinct column.
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment<T> {
    /// Column assigned to each row.
    pub row_to_col: Vec<usize>,
    pub total: T,
    /// Dual feasible: `row_potential[i] + col_potential[j] >= w(i, j)` on every
    /// allowed entry, with equality on assigned ones.
    pub row_potential: Vec<T>,
    pub col_potential: Vec<T>,
}

fn lt<T: Scalar>(a: Option<T>, b: Option<T>) -> bool {
    match (a, b) {
        (Some(x), Some(y)) => x < y,
        (Some(_), None) => true,
        _ => false,
    }
}

/// Maximizes `Σ w(i, col(i))` over injective row-to-column maps, `rows <= cols`.
/// `weight` returns `None` for forbidden entries. Returns `None` when every
/// complete assignment uses a forbidden entry.
pub fn max_weight_assignment<T, F>(rows: usize, cols: usize, weight: F) -> Option<Assignment<T>>
where
    T: Scalar,
    F: Fn(usize, usize) -> Option<T>,
{
    assert!(rows <= cols, "need at least as many columns as rows");
    // minimize cost = -weight; index 0 is the virtual root in both u and v
    let cost = |i: usize, j: usize| weight(i - 1, j - 1).map(|w| -w);
    let zero = T::zero();
    let mut u = vec![zero; rows + 1];
    let mut v = vec![zero; cols + 1];
    let mut p = vec![0usize; cols + 1];
    let mut way = vec![0usize; cols + 1];

    for i in 1..=rows {
        p[0] = i;
        let mut j0 = 0;
        let mut minv: Vec<Option<T>> = vec![None; cols + 1];
        let mut used = vec![false; cols + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta: Option<T> = None;
            let mut j1 = 0;
            for j in 1..=cols {
                if used[j] {
                    continue;
                }
                if let Some(c) = cost(i0, j) {
                    let cur = c - u[i0] - v[j];
                    if lt(Some(cur), minv[j]) {
                        minv[j] = Some(cur);
                        way[j] = j0;
                    }
                }
                if lt(minv[j], delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            let delta = delta?;
            for j in 0..=cols {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else if let Some(m) = minv[j].as_mut() {
                    *m -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut row_to_col = vec![0; rows];
    for j in 1..=cols {
        if p[j] != 0 {
            row_to_col[p[j] - 1] = j - 1;
        }
    }
    let mut total = zero;
    for (i, &j) in row_to_col.iter().enumerate() {
        total += weight(i, j).expect("assigned entry is allowed");
    }
    Some(Assignment {
        row_to_col,
        total,
        row_potential: u[1..].iter().map(|&x| -x).collect(),
        col_potential: v[1..].iter().map(|&x| -x).collect(),
    })
}
