use crate::scalar::Real;
use crate::tolerances;

use super::{DenseMatrix, LinalgError};

/// Eigendecomposition of a symmetric matrix.
///
/// `values` ascend; column `k` of `vectors` is the unit eigenvector paired
/// with `values[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenResult<T> {
    pub values: Vec<T>,
    pub vectors: DenseMatrix<T>,
}

/// Full spectrum of a symmetric matrix by cyclic Jacobi rotations.
///
/// Sweeps continue until the off-diagonal Frobenius norm is at most
/// `1e-12 · ‖m‖_F`. Fails with `NotSymmetric` when `max |m_ij − m_ji|`
/// exceeds `1e-10` and with `NoConvergence` after 50 sweeps.
pub fn sym_eigen<T: Real>(m: &DenseMatrix<T>) -> Result<EigenResult<T>, LinalgError> {
    let (rows, cols) = m.shape();
    if rows != cols {
        return Err(LinalgError::NotSquare { rows, cols });
    }
    let asymmetry = m.max_asymmetry();
    if asymmetry > T::tol(tolerances::SYMMETRY) {
        return Err(LinalgError::NotSymmetric {
            asymmetry: asymmetry.f64(),
        });
    }

    let n = rows;
    let mut a = m.symmetrized();
    let mut v = DenseMatrix::<T>::identity(n);
    let target = T::tol(tolerances::JACOBI_OFF_DIAGONAL) * m.frobenius();

    let mut converged = false;
    for _ in 0..=tolerances::JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) <= target {
            converged = true;
            break;
        }
        sweep(&mut a, &mut v);
    }
    if !converged {
        return Err(LinalgError::NoConvergence {
            iterations: tolerances::JACOBI_MAX_SWEEPS,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.get(i, i).partial_cmp(&a.get(j, j)).expect("finite"));
    let values = order.iter().map(|&k| a.get(k, k)).collect();
    let vectors = DenseMatrix::from_fn(n, n, |i, j| v.get(i, order[j]));
    Ok(EigenResult { values, vectors })
}

fn off_diagonal_norm<T: Real>(a: &DenseMatrix<T>) -> T {
    let n = a.rows();
    let mut s = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a.get(i, j) * a.get(i, j);
            }
        }
    }
    s.sqrt()
}

/// One cyclic sweep over all `(p, q)`, `p < q`, applying `a ← Jᵀ a J` and
/// `v ← v J`.
fn sweep<T: Real>(a: &mut DenseMatrix<T>, v: &mut DenseMatrix<T>) {
    let n = a.rows();
    let two = T::of(2.0);
    for p in 0..n {
        for q in p + 1..n {
            let apq = a.get(p, q);
            if apq == T::zero() {
                continue;
            }
            let theta = (a.get(q, q) - a.get(p, p)) / (two * apq);
            let t = if theta == T::zero() {
                T::one()
            } else {
                theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt())
            };
            let c = T::one() / (t * t + T::one()).sqrt();
            let s = t * c;
            let tau = s / (T::one() + c);

            a.set(p, p, a.get(p, p) - t * apq);
            a.set(q, q, a.get(q, q) + t * apq);
            a.set(p, q, T::zero());
            a.set(q, p, T::zero());
            for k in (0..n).filter(|&k| k != p && k != q) {
                let (akp, akq) = (a.get(k, p), a.get(k, q));
                let new_p = akp - s * (akq + tau * akp);
                let new_q = akq + s * (akp - tau * akq);
                a.set(k, p, new_p);
                a.set(p, k, new_p);
                a.set(k, q, new_q);
                a.set(q, k, new_q);
            }
            for k in 0..n {
                let (vkp, vkq) = (v.get(k, p), v.get(k, q));
                v.set(k, p, vkp - s * (vkq + tau * vkp));
                v.set(k, q, vkq + s * (vkp - tau * vkq));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    type M = DenseMatrix<f64>;

    fn check_invariants(m: &M, e: &EigenResult<f64>) {
        let n = m.rows();
        for w in e.values.windows(2) {
            assert!(w[0] <= w[1]);
        }
        for i in 0..n {
            for j in 0..n {
                let d: f64 = (0..n).map(|k| e.vectors.get(k, i) * e.vectors.get(k, j)).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((d - want).abs() <= tolerances::EIGENVECTOR_ORTHONORMALITY);
            }
        }
        for (k, &lambda) in e.values.iter().enumerate() {
            let v = e.vectors.column(k);
            let mv = m.matvec(&v).unwrap();
            let r = mv.axpy(-lambda, &v).norm2();
            assert!(r <= tolerances::EIGEN_RESIDUAL * (1.0 + lambda.abs()) * v.norm2());
        }
    }

    #[test]
    fn diagonal_input() {
        let m = M::from_diagonal(&[3.0, 1.0, 2.0]);
        let e = sym_eigen(&m).unwrap();
        assert_eq!(e.values, vec![1.0, 2.0, 3.0]);
        check_invariants(&m, &e);
    }

    #[test]
    fn two_by_two_closed_form() {
        let m = M::from_rows(&[[1.0, -1.0], [-1.0, 1.0]]).unwrap();
        let e = sym_eigen(&m).unwrap();
        assert_abs_diff_eq!(e.values[0], 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(e.values[1], 2.0, epsilon = 1e-14);
        check_invariants(&m, &e);
    }

    #[test]
    fn single_rotation_is_exact() {
        let m = M::from_rows(&[[1.0, -1.0], [-1.0, 1.0]]).unwrap();
        assert_eq!(sym_eigen(&m).unwrap().values, vec![0.0, 2.0]);
    }

    #[test]
    fn complete_three_laplacian() {
        // det(L − λI) = −λ(λ − 3)² for L(K₃).
        let m = M::from_rows(&[[2.0, -1.0, -1.0], [-1.0, 2.0, -1.0], [-1.0, -1.0, 2.0]]).unwrap();
        let e = sym_eigen(&m).unwrap();
        for (got, want) in e.values.iter().zip([0.0, 3.0, 3.0]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-12);
        }
        check_invariants(&m, &e);
    }

    #[test]
    fn zero_and_empty_matrices() {
        let e = sym_eigen(&M::zeros(3, 3)).unwrap();
        assert_eq!(e.values, vec![0.0; 3]);
        assert!(sym_eigen(&M::zeros(0, 0)).unwrap().values.is_empty());
    }

    #[test]
    fn rejects_asymmetric_and_rectangular() {
        let m = M::from_rows(&[[1.0, 2.0], [0.0, 1.0]]).unwrap();
        assert!(matches!(sym_eigen(&m), Err(LinalgError::NotSymmetric { .. })));
        assert!(matches!(
            sym_eigen(&M::zeros(2, 3)),
            Err(LinalgError::NotSquare { .. })
        ));
    }

    #[test]
    fn single_precision_path() {
        let m = DenseMatrix::<f32>::from_rows(&[[2.0, 1.0], [1.0, 2.0]]).unwrap();
        let e = sym_eigen(&m).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-5);
        assert!((e.values[1] - 3.0).abs() < 1e-5);
    }

    fn symmetric_matrix() -> impl Strategy<Value = M> {
        (1usize..=12).prop_flat_map(|n| {
            proptest::collection::vec(-10.0f64..10.0, n * n).prop_map(move |d| {
                let raw = M::new(n, n, d).unwrap();
                raw.symmetrized()
            })
        })
    }

    proptest! {
        #[test]
        fn random_symmetric_reconstruction(m in symmetric_matrix()) {
            let e = sym_eigen(&m).unwrap();
            check_invariants(&m, &e);
            let trace: f64 = (0..m.rows()).map(|i| m.get(i, i)).sum();
            let sum: f64 = e.values.iter().sum();
            prop_assert!((trace - sum).abs() <= 1e-9 * (1.0 + trace.abs()));
        }
    }
}
