//! Small dense solvers for the regression-based forecasters.

/// Solves `A x = b` for a symmetric positive semidefinite `A` by Gaussian
/// elimination with partial pivoting.
///
/// Rank-deficient but consistent systems (normal equations always are, up to
/// rounding) are solved by fixing free variables at zero. Returns `None` when
/// elimination leaves a residual that no solution can satisfy or when the
/// solution is non-finite.
pub(crate) fn solve_symmetric(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let scale = a
        .iter()
        .flat_map(|row| row.iter())
        .fold(0.0f64, |m, &v| m.max(v.abs()))
        .max(1e-300);
    let rhs_scale = b.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    let pivot_tol = scale * 1e-11;

    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let (best_row, best_val) = (row..n)
            .map(|r| (r, a[r][col].abs()))
            .max_by(|x, y| x.1.partial_cmp(&y.1).expect("finite pivots"))?;
        if best_val <= pivot_tol {
            continue; // free column, variable pinned to zero
        }
        a.swap(row, best_row);
        b.swap(row, best_row);
        for r in (row + 1)..n {
            let factor = a[r][col] / a[row][col];
            if factor != 0.0 {
                for c in col..n {
                    a[r][c] -= factor * a[row][c];
                }
                b[r] -= factor * b[row];
            }
        }
        pivots.push((row, col));
        row += 1;
        if row == n {
            break;
        }
    }

    // Fully eliminated rows must carry a (numerically) zero right-hand side.
    let residual_tol = 1e-7 * rhs_scale.max(scale);
    for r in row..n {
        if b[r].abs() > residual_tol {
            return None;
        }
    }

    let mut x = vec![0.0f64; n];
    for &(r, c) in pivots.iter().rev() {
        let mut value = b[r];
        for k in (c + 1)..n {
            value -= a[r][k] * x[k];
        }
        x[c] = value / a[r][c];
    }
    if x.iter().any(|v| !v.is_finite()) {
        return None;
    }
    Some(x)
}

/// Least squares of `y` on row-major features `x_rows`, with an optional
/// ridge penalty added to every diagonal entry of the Gram matrix.
pub(crate) fn solve_least_squares(
    x_rows: &[Vec<f64>],
    y: &[f64],
    ridge: f64,
) -> Option<Vec<f64>> {
    debug_assert_eq!(x_rows.len(), y.len());
    let k = x_rows.first().map(|r| r.len()).unwrap_or(0);
    if k == 0 {
        return Some(Vec::new());
    }
    let mut gram = vec![vec![0.0f64; k]; k];
    let mut rhs = vec![0.0f64; k];
    for (row, &target) in x_rows.iter().zip(y) {
        for i in 0..k {
            rhs[i] += row[i] * target;
            for j in i..k {
                gram[i][j] += row[i] * row[j];
            }
        }
    }
    for i in 0..k {
        for j in 0..i {
            gram[i][j] = gram[j][i];
        }
        gram[i][i] += ridge;
    }
    solve_symmetric(gram, rhs)
}
