use crate::linalg::{direct_solve, DenseMatrix, DenseVector, LinalgError};
use crate::scalar::Real;

use super::FlowError;

/// Orthogonal projector onto `ker A_i`, together with the right inverse
/// `A_i⁺ = A_iᵀ (A_i A_iᵀ)⁻¹` it is built from.
///
/// For a single row `a` this is `P = I − a aᵀ / (aᵀ a)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection<T> {
    block: DenseMatrix<T>,
    right_inverse: DenseMatrix<T>,
    matrix: DenseMatrix<T>,
}

/// Builds the projector for one row block. `RankDeficientBlock` (reported
/// with block index 0) when `A_i A_iᵀ` is numerically singular.
pub fn projection_for_block<T: Real>(block: &DenseMatrix<T>) -> Result<Projection<T>, FlowError> {
    let (r, n) = block.shape();
    let at = block.transpose();
    let gram = block.matmul(&at)?;
    // (A Aᵀ)⁻¹, one column at a time.
    let mut inverse = DenseMatrix::zeros(r, r);
    for c in 0..r {
        let unit: Vec<T> = (0..r).map(|i| if i == c { T::one() } else { T::zero() }).collect();
        let col = direct_solve(&gram, &unit).map_err(|e| match e {
            LinalgError::Singular { .. } => FlowError::RankDeficientBlock { block: 0 },
            other => other.into(),
        })?;
        for i in 0..r {
            inverse.set(i, c, col[i]);
        }
    }
    let right_inverse = at.matmul(&inverse)?;
    let matrix = DenseMatrix::identity(n)
        .sub(&right_inverse.matmul(block)?)?
        .symmetrized();
    Ok(Projection {
        block: block.clone(),
        right_inverse,
        matrix,
    })
}

impl<T: Real> Projection<T> {
    pub fn matrix(&self) -> &DenseMatrix<T> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// `P y`, evaluated as `y − A⁺ (A y)`.
    pub fn project(&self, y: &[T]) -> DenseVector<T> {
        let ay = self.block.matvec(y).expect("dimension checked at setup");
        let correction = self.right_inverse.matvec(&ay).expect("dimension checked at setup");
        DenseVector::from_raw(y.iter().zip(correction.iter()).map(|(&a, &c)| a - c).collect())
    }

    /// `A⁺ (A x − b)`: the component of `x` normal to the manifold, measured
    /// from it. Equals `(I − P) x − A⁺ b`.
    pub fn normal_offset(&self, x: &[T], b: &[T]) -> DenseVector<T> {
        let r = self.block.matvec(x).expect("dimension checked at setup").sub(b);
        self.right_inverse.matvec(&r).expect("dimension checked at setup")
    }

    /// The point of `{x : A x = b}` closest to the origin, `A⁺ b`.
    pub fn min_norm_point(&self, b: &[T]) -> DenseVector<T> {
        self.right_inverse.matvec(b).expect("dimension checked at setup")
    }
}
