//! Dense Gauss-Jordan elimination with deterministic pivoting.

use super::{Field, FieldElem};
use crate::error::{Error, Result};

/// Outcome of [`solve_linear`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinearSolution {
    /// One particular solution plus a basis of the kernel of the matrix.
    Solvable { solution: Vec<FieldElem>, kernel: Vec<Vec<FieldElem>> },
    /// A left null vector `v` with `v·A = 0` and `v·b ≠ 0`.
    Inconsistent { certificate: Vec<FieldElem> },
}

struct Reduced {
    /// Row-reduced matrix.
    rows: Vec<Vec<FieldElem>>,
    /// Row-operation record: `transform · original = rows`.
    transform: Vec<Vec<FieldElem>>,
    /// Pivot column of each of the first `pivots.len()` rows.
    pivots: Vec<usize>,
}

fn check_shape(matrix: &[Vec<FieldElem>], cols: usize) -> Result<()> {
    if let Some(bad) = matrix.iter().position(|row| row.len() != cols) {
        return Err(Error::DimensionMismatch(format!("row {bad} has length {}, expected {cols}", matrix[bad].len())));
    }
    Ok(())
}

/// Reduced row echelon form, pivoting on the first nonzero entry of each column.
fn rref(field: Field, matrix: &[Vec<FieldElem>], cols: usize, track: bool) -> Reduced {
    let n = matrix.len();
    let mut rows: Vec<Vec<FieldElem>> = matrix.to_vec();
    let mut transform: Vec<Vec<FieldElem>> = if track {
        (0..n).map(|i| (0..n).map(|j| if i == j { field.one() } else { field.zero() }).collect()).collect()
    } else {
        Vec::new()
    };
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..cols {
        if next == n {
            break;
        }
        let Some(found) = (next..n).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(next, found);
        if track {
            transform.swap(next, found);
        }
        let inv = rows[next][col].inv();
        for x in rows[next].iter_mut() {
            *x *= inv;
        }
        if track {
            for x in transform[next].iter_mut() {
                *x *= inv;
            }
        }
        for r in 0..n {
            if r == next || rows[r][col].is_zero() {
                continue;
            }
            let factor = rows[r][col];
            let (pivot_row, target) = if r < next {
                let (lo, hi) = rows.split_at_mut(next);
                (&hi[0], &mut lo[r])
            } else {
                let (lo, hi) = rows.split_at_mut(r);
                (&lo[next], &mut hi[0])
            };
            for (t, &pv) in target.iter_mut().zip(pivot_row.iter()) {
                *t -= factor * pv;
            }
            if track {
                let (pivot_row, target) = if r < next {
                    let (lo, hi) = transform.split_at_mut(next);
                    (&hi[0], &mut lo[r])
                } else {
                    let (lo, hi) = transform.split_at_mut(r);
                    (&lo[next], &mut hi[0])
                };
                for (t, &pv) in target.iter_mut().zip(pivot_row.iter()) {
                    *t -= factor * pv;
                }
            }
        }
        pivots.push(col);
        next += 1;
    }
    Reduced { rows, transform, pivots }
}

fn kernel_from(field: Field, red: &Reduced, cols: usize) -> Vec<Vec<FieldElem>> {
    let free: Vec<usize> = (0..cols).filter(|c| !red.pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![field.zero(); cols];
            v[fc] = field.one();
            for (r, &pc) in red.pivots.iter().enumerate() {
                v[pc] = -red.rows[r][fc];
            }
            v
        })
        .collect()
}

/// Solve `matrix · x = rhs`. The matrix is given as rows; `cols` is explicit so
/// that empty systems are well typed.
pub fn solve_linear(field: Field, matrix: &[Vec<FieldElem>], cols: usize, rhs: &[FieldElem]) -> Result<LinearSolution> {
    check_shape(matrix, cols)?;
    if rhs.len() != matrix.len() {
        return Err(Error::DimensionMismatch(format!("{} rows but rhs of length {}", matrix.len(), rhs.len())));
    }
    let augmented: Vec<Vec<FieldElem>> = matrix
        .iter()
        .zip(rhs)
        .map(|(row, &b)| {
            let mut r = row.clone();
            r.push(b);
            r
        })
        .collect();
    let red = rref(field, &augmented, cols + 1, true);
    if let Some(pos) = red.pivots.iter().position(|&c| c == cols) {
        return Ok(LinearSolution::Inconsistent { certificate: red.transform[pos].clone() });
    }
    let mut solution = vec![field.zero(); cols];
    for (r, &pc) in red.pivots.iter().enumerate() {
        solution[pc] = red.rows[r][cols];
    }
    let kernel =
        kernel_from(field, &Reduced { rows: red.rows.clone(), transform: vec![], pivots: red.pivots.clone() }, cols);
    Ok(LinearSolution::Solvable { solution, kernel })
}

/// Basis of `{x : matrix · x = 0}`.
pub fn kernel_basis(field: Field, matrix: &[Vec<FieldElem>], cols: usize) -> Result<Vec<Vec<FieldElem>>> {
    check_shape(matrix, cols)?;
    let red = rref(field, matrix, cols, false);
    Ok(kernel_from(field, &red, cols))
}

pub fn rank(field: Field, matrix: &[Vec<FieldElem>], cols: usize) -> Result<usize> {
    check_shape(matrix, cols)?;
    Ok(rref(field, matrix, cols, false).pivots.len())
}

/// Dense matrix stored as rows.
pub type Matrix = Vec<Vec<FieldElem>>;

pub fn identity_matrix(field: Field, n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { field.one() } else { field.zero() }).collect()).collect()
}

pub fn mat_vec(m: &Matrix, v: &[FieldElem]) -> Vec<FieldElem> {
    m.iter().map(|row| row.iter().zip(v).fold(v[0].field().zero(), |acc, (a, b)| acc + *a * *b)).collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| row.iter().zip(b).fold(row[0].field().zero(), |acc, (x, brow)| acc + *x * brow[j]))
                .collect()
        })
        .collect()
}
