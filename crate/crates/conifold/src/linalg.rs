//! Small dense linear algebra: Cholesky solves and Jacobi eigenvalues for
//! the symmetric positive-definite Hessians that appear in the Newton
//! iteration, plus fraction-free integer elimination (Bareiss) for exact
//! rank and determinant questions about exponent lattices.
//!
//! Matrices are row-major `Vec<Vec<_>>`; everything here is O(d^3) on
//! dimensions small enough that no blocking or pivoting heroics are needed.

use num_bigint::BigInt;
use num_traits::Zero;

/// Lower-triangular Cholesky factor of a symmetric positive-definite
/// matrix, or `None` when a pivot is not strictly positive.
pub fn cholesky(matrix: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let d = matrix.len();
    let mut lower = vec![vec![0.0; d]; d];
    for i in 0..d {
        for j in 0..=i {
            let mut sum = matrix[i][j];
            for k in 0..j {
                sum -= lower[i][k] * lower[j][k];
            }
            if i == j {
                if sum <= 0.0 || !sum.is_finite() {
                    return None;
                }
                lower[i][i] = sum.sqrt();
            } else {
                lower[i][j] = sum / lower[j][j];
            }
        }
    }
    Some(lower)
}

/// Solve `A x = b` for symmetric positive-definite `A` via Cholesky.
pub fn cholesky_solve(matrix: &[Vec<f64>], rhs: &[f64]) -> Option<Vec<f64>> {
    let lower = cholesky(matrix)?;
    let d = rhs.len();
    // Forward substitution: L y = b.
    let mut y = vec![0.0; d];
    for i in 0..d {
        let mut sum = rhs[i];
        for k in 0..i {
            sum -= lower[i][k] * y[k];
        }
        y[i] = sum / lower[i][i];
    }
    // Back substitution: L^T x = y.
    let mut x = vec![0.0; d];
    for i in (0..d).rev() {
        let mut sum = y[i];
        for k in (i + 1)..d {
            sum -= lower[k][i] * x[k];
        }
        x[i] = sum / lower[i][i];
    }
    Some(x)
}

/// Eigenvalues of a symmetric matrix by the cyclic Jacobi method, returned
/// in ascending order.
pub fn jacobi_eigenvalues(matrix: &[Vec<f64>]) -> Vec<f64> {
    let d = matrix.len();
    let mut a: Vec<Vec<f64>> = matrix.to_vec();
    if d <= 1 {
        return a.first().map(|row| vec![row[0]]).unwrap_or_default();
    }
    for _sweep in 0..64 {
        let mut off = 0.0;
        for i in 0..d {
            for j in (i + 1)..d {
                off += a[i][j] * a[i][j];
            }
        }
        let scale: f64 = (0..d).map(|i| a[i][i].abs()).sum::<f64>().max(1e-300);
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..d {
            for q in (p + 1)..d {
                if a[p][q] == 0.0 {
                    continue;
                }
                // Classical 2x2 rotation annihilating a[p][q].
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..d {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..d {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eigenvalues: Vec<f64> = (0..d).map(|i| a[i][i]).collect();
    eigenvalues.sort_by(|x, y| x.partial_cmp(y).unwrap());
    eigenvalues
}

/// Row echelon rank of an integer matrix, computed exactly by fraction-free
/// (Bareiss) elimination.
pub fn integer_rank(matrix: &[Vec<BigInt>]) -> usize {
    let rows = matrix.len();
    if rows == 0 {
        return 0;
    }
    let cols = matrix[0].len();
    let mut a: Vec<Vec<BigInt>> = matrix.to_vec();
    let mut rank = 0;
    let mut previous_pivot = BigInt::from(1);
    for col in 0..cols {
        let Some(pivot_row) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pivot_row);
        for r in (rank + 1)..rows {
            for c in (col + 1)..cols {
                let numerator = &a[rank][col] * &a[r][c] - &a[r][col] * &a[rank][c];
                a[r][c] = numerator / &previous_pivot;
            }
            a[r][col] = BigInt::zero();
        }
        previous_pivot = a[rank][col].clone();
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Exact determinant of a square integer matrix (Bareiss elimination).
pub fn integer_determinant(matrix: &[Vec<BigInt>]) -> BigInt {
    let d = matrix.len();
    if d == 0 {
        return BigInt::from(1);
    }
    let mut a: Vec<Vec<BigInt>> = matrix.to_vec();
    let mut sign = 1i32;
    let mut previous_pivot = BigInt::from(1);
    for col in 0..d {
        let Some(pivot_row) = (col..d).find(|&r| !a[r][col].is_zero()) else {
            return BigInt::zero();
        };
        if pivot_row != col {
            a.swap(col, pivot_row);
            sign = -sign;
        }
        for r in (col + 1)..d {
            for c in (col + 1)..d {
                let numerator = &a[col][col] * &a[r][c] - &a[r][col] * &a[col][c];
                a[r][c] = numerator / &previous_pivot;
            }
            a[r][col] = BigInt::zero();
        }
        previous_pivot = a[col][col].clone();
    }
    let det = a[d - 1][d - 1].clone();
    if sign < 0 { -det } else { det }
}
