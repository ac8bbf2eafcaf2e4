//! Two-phase primal simplex over exact rationals.
//!
//! Solves `maximize c·x subject to A·x = b, x ≥ 0` for the small dense
//! systems produced by the support-validation module (a handful of rows and
//! columns). Bland's smallest-index pivoting rule is used throughout, so the
//! method terminates even on degenerate tableaus, and every number is a
//! `BigRational` — there are no tolerances anywhere in this file.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Result of an exact LP solve.
#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    /// Optimum attained; `solution` lists every structural variable.
    Optimal { objective: BigRational, solution: Vec<BigRational> },
    /// No point satisfies the constraints.
    Infeasible,
    /// The objective increases without bound along a feasible ray.
    Unbounded,
}

/// Maximize `c·x` subject to `a·x = b`, `x ≥ 0`, exactly.
///
/// `a` is row-major with `b.len()` rows of `c.len()` entries each.
pub fn maximize(a: &[Vec<BigRational>], b: &[BigRational], c: &[BigRational]) -> LpOutcome {
    let rows = b.len();
    let cols = c.len();
    debug_assert!(a.len() == rows && a.iter().all(|row| row.len() == cols));

    // Orient every row so the right-hand side is nonnegative, then append
    // an identity of artificial columns to get a trivially feasible start.
    let mut tableau: Vec<Vec<BigRational>> = Vec::with_capacity(rows);
    let mut rhs: Vec<BigRational> = Vec::with_capacity(rows);
    for i in 0..rows {
        let flip = b[i].is_negative();
        let mut row: Vec<BigRational> = a[i]
            .iter()
            .map(|x| if flip { -x } else { x.clone() })
            .collect();
        row.extend((0..rows).map(|j| {
            if j == i {
                BigRational::one()
            } else {
                BigRational::zero()
            }
        }));
        tableau.push(row);
        rhs.push(if flip { -&b[i] } else { b[i].clone() });
    }
    let mut basis: Vec<usize> = (cols..cols + rows).collect();

    // Phase 1: drive the artificial variables to zero.
    let phase1_cost: Vec<BigRational> = (0..cols + rows)
        .map(|j| if j < cols { BigRational::zero() } else { -BigRational::one() })
        .collect();
    if !run_simplex(&mut tableau, &mut rhs, &mut basis, &phase1_cost) {
        unreachable!("phase 1 objective is bounded above by zero");
    }
    let phase1_objective: BigRational = basis
        .iter()
        .zip(&rhs)
        .map(|(&j, r)| &phase1_cost[j] * r)
        .sum();
    if phase1_objective.is_negative() {
        return LpOutcome::Infeasible;
    }

    // Pivot any leftover artificial out of the basis; a row with no
    // structural entry is a redundant constraint and is dropped.
    let mut row = 0;
    while row < basis.len() {
        if basis[row] >= cols {
            if let Some(enter) = (0..cols).find(|&j| !tableau[row][j].is_zero()) {
                pivot(&mut tableau, &mut rhs, &mut basis, row, enter);
            } else {
                tableau.remove(row);
                rhs.remove(row);
                basis.remove(row);
                continue;
            }
        }
        row += 1;
    }
    for trow in tableau.iter_mut() {
        trow.truncate(cols);
    }

    // Phase 2: optimize the real objective from the feasible basis.
    if !run_simplex(&mut tableau, &mut rhs, &mut basis, c) {
        return LpOutcome::Unbounded;
    }
    let mut solution = vec![BigRational::zero(); cols];
    for (i, &j) in basis.iter().enumerate() {
        solution[j] = rhs[i].clone();
    }
    let objective = c.iter().zip(&solution).map(|(ci, xi)| ci * xi).sum();
    LpOutcome::Optimal { objective, solution }
}

/// Bland-rule simplex loop; returns false when the objective is unbounded.
fn run_simplex(
    tableau: &mut Vec<Vec<BigRational>>,
    rhs: &mut Vec<BigRational>,
    basis: &mut Vec<usize>,
    cost: &[BigRational],
) -> bool {
    let cols = tableau.first().map_or(cost.len(), Vec::len);
    loop {
        // Reduced cost r_j = c_j − y·A_j with y_i the basic costs.
        let entering = (0..cols).find(|&j| {
            if basis.contains(&j) {
                return false;
            }
            let mut reduced = cost[j].clone();
            for (i, &bj) in basis.iter().enumerate() {
                if !cost[bj].is_zero() {
                    reduced -= &cost[bj] * &tableau[i][j];
                }
            }
            reduced.is_positive()
        });
        let Some(enter) = entering else {
            return true;
        };
        // Ratio test; Bland breaks ties by smallest basic index.
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..tableau.len() {
            if !tableau[i][enter].is_positive() {
                continue;
            }
            let ratio = &rhs[i] / &tableau[i][enter];
            let better = match &leave {
                None => true,
                Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let Some((leave_row, _)) = leave else {
            return false;
        };
        pivot(tableau, rhs, basis, leave_row, enter);
    }
}

fn pivot(
    tableau: &mut [Vec<BigRational>],
    rhs: &mut [BigRational],
    basis: &mut [usize],
    row: usize,
    col: usize,
) {
    let pivot_value = tableau[row][col].clone();
    for entry in tableau[row].iter_mut() {
        *entry /= &pivot_value;
    }
    rhs[row] /= &pivot_value;
    for r in 0..tableau.len() {
        if r == row || tableau[r][col].is_zero() {
            continue;
        }
        let factor = tableau[r][col].clone();
        let pivot_row = tableau[row].clone();
        for (entry, p) in tableau[r].iter_mut().zip(&pivot_row) {
            *entry -= &factor * p;
        }
        let rhs_pivot = rhs[row].clone();
        rhs[r] -= &factor * &rhs_pivot;
    }
    basis[row] = col;
}
