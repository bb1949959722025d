use crate::scalar::Real;
use crate::tolerances;

use super::{DenseMatrix, DenseVector, LinalgError};

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
///
/// Fails with `Singular` when a pivot falls below `1e-12 · ‖a‖∞`.
pub fn direct_solve<T: Real>(
    a: &DenseMatrix<T>,
    b: &[T],
) -> Result<DenseVector<T>, LinalgError> {
    let (rows, cols) = a.shape();
    if rows != cols {
        return Err(LinalgError::NotSquare { rows, cols });
    }
    if b.len() != rows {
        return Err(LinalgError::DimensionMismatch {
            expected: (rows, 1),
            got: (b.len(), 1),
        });
    }
    let n = rows;
    let threshold = T::tol(tolerances::SINGULAR_PIVOT) * a.norm_inf();
    let mut m = a.clone();
    let mut rhs = b.to_vec();

    for col in 0..n {
        let (pivot_row, pivot) = (col..n)
            .map(|r| (r, m.get(r, col).abs()))
            .fold((col, T::zero()), |best, c| if c.1 > best.1 { c } else { best });
        if pivot <= threshold || pivot == T::zero() {
            return Err(LinalgError::Singular {
                column: col,
                pivot: pivot.f64(),
            });
        }
        if pivot_row != col {
            for j in 0..n {
                let tmp = m.get(col, j);
                m.set(col, j, m.get(pivot_row, j));
                m.set(pivot_row, j, tmp);
            }
            rhs.swap(col, pivot_row);
        }
        let d = m.get(col, col);
        for r in col + 1..n {
            let f = m.get(r, col) / d;
            if f == T::zero() {
                continue;
            }
            for j in col..n {
                let v = m.get(r, j) - f * m.get(col, j);
                m.set(r, j, v);
            }
            rhs[r] = rhs[r] - f * rhs[col];
        }
    }

    let mut x = vec![T::zero(); n];
    for i in (0..n).rev() {
        let mut s = rhs[i];
        for (j, &xj) in x.iter().enumerate().skip(i + 1) {
            s -= m.get(i, j) * xj;
        }
        x[i] = s / m.get(i, i);
    }
    DenseVector::new(x)
}

/// Numerical rank: row-echelon elimination, counting pivots above
/// `1e-10 · ‖a‖∞`.
pub fn rank<T: Real>(a: &DenseMatrix<T>) -> usize {
    let (rows, cols) = a.shape();
    let threshold = T::tol(tolerances::RANK_PIVOT) * a.norm_inf();
    let mut m = a.clone();
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        let (pivot_row, pivot) = (r..rows)
            .map(|i| (i, m.get(i, col).abs()))
            .fold((r, T::zero()), |best, c| if c.1 > best.1 { c } else { best });
        if pivot <= threshold || pivot == T::zero() {
            continue;
        }
        if pivot_row != r {
            for j in 0..cols {
                let tmp = m.get(r, j);
                m.set(r, j, m.get(pivot_row, j));
                m.set(pivot_row, j, tmp);
            }
        }
        let d = m.get(r, col);
        for i in r + 1..rows {
            let f = m.get(i, col) / d;
            for j in col..cols {
                let v = m.get(i, j) - f * m.get(r, j);
                m.set(i, j, v);
            }
        }
        r += 1;
    }
    r
}
