//! Dense Gaussian elimination over an exact field.

use super::Scalar;

/// Outcome of solving `A c = b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution<K> {
    Unique(Vec<K>),
    /// No solution; `rank` is the rank of `A`.
    Inconsistent { rank: usize },
    /// Solutions exist but `unknowns - rank` directions are free.
    Underdetermined { rank: usize, particular: Vec<K> },
}

/// Solves `rows · c = rhs` where each row is a dense coefficient vector of
/// length `unknowns`.
pub fn solve<K: Scalar>(rows: &[Vec<K>], rhs: &[K], unknowns: usize) -> Solution<K> {
    assert_eq!(rows.len(), rhs.len());
    let mut m: Vec<Vec<K>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            debug_assert_eq!(r.len(), unknowns);
            let mut row = r.clone();
            row.push(b.clone());
            row
        })
        .filter(|row| row.iter().any(|v| !v.is_zero()))
        .collect();
    let pivots = reduce(&mut m, unknowns);
    let rank = pivots.len();
    let inconsistent = m
        .iter()
        .skip(rank)
        .any(|row| !row[unknowns].is_zero());
    if inconsistent {
        return Solution::Inconsistent { rank };
    }
    let mut x = vec![K::zero(); unknowns];
    for (r, &col) in pivots.iter().enumerate() {
        x[col] = m[r][unknowns].clone();
    }
    if rank == unknowns {
        Solution::Unique(x)
    } else {
        Solution::Underdetermined { rank, particular: x }
    }
}

/// Rank of a dense matrix.
pub fn rank<K: Scalar>(rows: &[Vec<K>], cols: usize) -> usize {
    let mut m = rows.to_vec();
    reduce(&mut m, cols).len()
}

/// Leftmost maximal set of linearly independent columns.
pub fn independent_columns<K: Scalar>(rows: &[Vec<K>], cols: usize) -> Vec<usize> {
    let mut m = rows.to_vec();
    reduce(&mut m, cols)
}

/// Reduced row echelon form on the first `cols` columns, in place.
/// Returns pivot columns; pivot rows are moved to the top.
fn reduce<K: Scalar>(m: &mut [Vec<K>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = K::one() / m[row][col].clone();
        for v in m[row].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        let pivot_row = m[row].clone();
        for (r, other) in m.iter_mut().enumerate() {
            if r == row || other[col].is_zero() {
                continue;
            }
            let f = other[col].clone();
            for (v, pv) in other.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v = v.clone() - f.clone() * pv.clone();
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    fn r(n: i64) -> Rational64 {
        Rational64::from_integer(n)
    }

    #[test]
    fn unique_inconsistent_underdetermined() {
        let rows = vec![vec![r(1), r(1)], vec![r(1), r(-1)]];
        assert_eq!(
            solve(&rows, &[r(3), r(1)], 2),
            Solution::Unique(vec![r(2), r(1)])
        );
        let rows = vec![vec![r(1), r(1)], vec![r(2), r(2)]];
        assert_eq!(
            solve(&rows, &[r(1), r(3)], 2),
            Solution::Inconsistent { rank: 1 }
        );
        assert!(matches!(
            solve(&rows, &[r(1), r(2)], 2),
            Solution::Underdetermined { rank: 1, .. }
        ));
        assert_eq!(rank(&rows, 2), 1);
    }

    #[test]
    fn leftmost_independent_columns() {
        let rows = vec![vec![r(1), r(2), r(0)], vec![r(1), r(2), r(1)]];
        assert_eq!(independent_columns(&rows, 3), vec![0, 2]);
    }
}
