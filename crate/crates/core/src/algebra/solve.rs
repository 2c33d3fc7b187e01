use num_traits::{One, Zero};

use super::{AlgebraError, Matrix, Rational, Vector};

/// Classified solution set of `A·x = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Unique(Vector),
    /// `particular` solves the system; every element of `nullspace` solves
    /// the homogeneous one. Free variables of `particular` are zero.
    Parametric {
        particular: Vector,
        nullspace: Vec<Vector>,
        /// Columns that carry a free parameter, in ascending order.
        free_columns: Vec<usize>,
    },
    /// `row` is the original index of an equation that reduces to `0 = c ≠ 0`.
    Infeasible {
        row: usize,
    },
}

/// Exact Gauss-Jordan elimination. Pivots on the first nonzero entry of each
/// column, so the result is fully deterministic.
pub fn solve_linear(a: &Matrix, b: &[Rational]) -> Result<Solution, AlgebraError> {
    if a.rows() != b.len() {
        return Err(AlgebraError::DimensionMismatch {
            op: "linear system",
            left: format!("{}x{}", a.rows(), a.cols()),
            right: format!("rhs of {}", b.len()),
        });
    }
    let (m, n) = (a.rows(), a.cols());
    let mut rows: Vec<(usize, Vec<Rational>)> = (0..m)
        .map(|r| {
            let mut row = a.row(r).to_vec();
            row.push(b[r].clone());
            (r, row)
        })
        .collect();

    let mut pivots: Vec<usize> = Vec::new();
    let mut next = 0;
    for col in 0..n {
        if next == m {
            break;
        }
        let Some(p) = (next..m).find(|&r| !rows[r].1[col].is_zero()) else {
            continue;
        };
        rows.swap(next, p);
        let inv = Rational::one() / &rows[next].1[col];
        for v in rows[next].1.iter_mut() {
            *v *= &inv;
        }
        let pivot_row = rows[next].1.clone();
        for (r, (_, row)) in rows.iter_mut().enumerate() {
            if r == next || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &factor * pv;
                }
            }
        }
        pivots.push(col);
        next += 1;
    }

    if let Some((orig, _)) = rows[next..].iter().find(|(_, row)| !row[n].is_zero()) {
        return Ok(Solution::Infeasible { row: *orig });
    }

    let mut particular = vec![Rational::zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        particular[c] = rows[r].1[n].clone();
    }
    let free_columns: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    if free_columns.is_empty() {
        return Ok(Solution::Unique(particular));
    }
    let nullspace = free_columns
        .iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); n];
            v[f] = Rational::one();
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = -rows[r].1[f].clone();
            }
            v
        })
        .collect();
    Ok(Solution::Parametric {
        particular,
        nullspace,
        free_columns,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, rat};

    fn mat(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| int(v)).collect())
                .collect(),
        )
        .unwrap()
    }

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn identity_system_is_unique() {
        let s = solve_linear(&Matrix::identity(2), &v(&[1, 2])).unwrap();
        assert_eq!(s, Solution::Unique(v(&[1, 2])));
    }

    #[test]
    fn single_equation_is_parametric() {
        let s = solve_linear(&mat(&[&[1, 1]]), &v(&[1])).unwrap();
        assert_eq!(
            s,
            Solution::Parametric {
                particular: v(&[1, 0]),
                nullspace: vec![v(&[-1, 1])],
                free_columns: vec![1],
            }
        );
    }

    #[test]
    fn inconsistent_row_is_reported() {
        let a = mat(&[&[1, 1], &[0, 0], &[2, 2]]);
        let s = solve_linear(&a, &v(&[1, 0, 3])).unwrap();
        assert_eq!(s, Solution::Infeasible { row: 2 });
        let s = solve_linear(&mat(&[&[0, 0]]), &v(&[1])).unwrap();
        assert_eq!(s, Solution::Infeasible { row: 0 });
    }

    #[test]
    fn pivots_skip_zero_leading_entries() {
        let a = mat(&[&[0, 2], &[3, 1]]);
        let s = solve_linear(&a, &v(&[4, 5])).unwrap();
        assert_eq!(s, Solution::Unique(v(&[1, 2])));
    }

    #[test]
    fn rational_solution() {
        let a = mat(&[&[3, 0], &[0, 7]]);
        let s = solve_linear(&a, &v(&[1, 1])).unwrap();
        assert_eq!(
            s,
            Solution::Unique(vec![rat(1, 3).unwrap(), rat(1, 7).unwrap()])
        );
    }

    #[test]
    fn rhs_length_mismatch() {
        assert!(solve_linear(&Matrix::identity(2), &v(&[1])).is_err());
    }
}
