use crate::linalg::{rank, DenseMatrix, DenseVector};
use crate::scalar::Real;

use super::FlowError;

/// The equation `A x = b`, split into row blocks `A_i x = b_i`, one per agent.
///
/// Each block has full row rank and no zero rows; the total row count does
/// not exceed the number of unknowns.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem<T> {
    blocks: Vec<DenseMatrix<T>>,
    rhs: Vec<DenseVector<T>>,
    unknowns: usize,
}

impl<T: Real> LinearSystem<T> {
    pub fn new(
        blocks: Vec<DenseMatrix<T>>,
        rhs: Vec<DenseVector<T>>,
        unknowns: usize,
    ) -> Result<Self, FlowError> {
        if blocks.len() != rhs.len() {
            return Err(FlowError::BadConfig(format!(
                "{} blocks but {} right-hand sides",
                blocks.len(),
                rhs.len()
            )));
        }
        if blocks.is_empty() {
            return Err(FlowError::BadConfig("system has no rows".into()));
        }
        let mut total = 0;
        for (k, (block, b)) in blocks.iter().zip(&rhs).enumerate() {
            if block.cols() != unknowns || block.rows() == 0 {
                return Err(FlowError::BlockShape {
                    block: k,
                    expected: unknowns,
                    got: block.cols(),
                });
            }
            if b.dim() != block.rows() {
                return Err(FlowError::BadConfig(format!(
                    "block {k} has {} rows but {} right-hand side entries",
                    block.rows(),
                    b.dim()
                )));
            }
            if let Some(row) = (0..block.rows()).find(|&r| block.row(r).iter().all(|v| v.is_zero())) {
                return Err(FlowError::ZeroRow { block: k, row });
            }
            if rank(block) < block.rows() {
                return Err(FlowError::RankDeficientBlock { block: k });
            }
            total += block.rows();
        }
        if total > unknowns {
            return Err(FlowError::TooManyRows {
                rows: total,
                unknowns,
            });
        }
        Ok(Self {
            blocks,
            rhs,
            unknowns,
        })
    }

    /// One agent per row of `a`.
    pub fn from_rows(a: &DenseMatrix<T>, b: &[T]) -> Result<Self, FlowError> {
        Self::from_blocks(a, b, &vec![1; a.rows()])
    }

    /// Consecutive rows of `a` grouped into blocks of the given sizes.
    pub fn from_blocks(a: &DenseMatrix<T>, b: &[T], sizes: &[usize]) -> Result<Self, FlowError> {
        if b.len() != a.rows() {
            return Err(FlowError::BadConfig(format!(
                "matrix has {} rows but right-hand side has {} entries",
                a.rows(),
                b.len()
            )));
        }
        if sizes.iter().sum::<usize>() != a.rows() || sizes.contains(&0) {
            return Err(FlowError::BadConfig(format!(
                "block sizes {sizes:?} do not partition {} rows",
                a.rows()
            )));
        }
        let mut blocks = Vec::with_capacity(sizes.len());
        let mut rhs = Vec::with_capacity(sizes.len());
        let mut r0 = 0;
        for &s in sizes {
            blocks.push(DenseMatrix::from_fn(s, a.cols(), |i, j| a.get(r0 + i, j)));
            rhs.push(DenseVector::new(b[r0..r0 + s].to_vec())?);
            r0 += s;
        }
        Self::new(blocks, rhs, a.cols())
    }

    pub fn agents(&self) -> usize {
        self.blocks.len()
    }

    pub fn unknowns(&self) -> usize {
        self.unknowns
    }

    pub fn total_rows(&self) -> usize {
        self.blocks.iter().map(DenseMatrix::rows).sum()
    }

    pub fn block(&self, i: usize) -> &DenseMatrix<T> {
        &self.blocks[i]
    }

    pub fn blocks(&self) -> &[DenseMatrix<T>] {
        &self.blocks
    }

    pub fn rhs(&self) -> &[DenseVector<T>] {
        &self.rhs
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(DenseMatrix::rows).collect()
    }

    /// The full `m × n` matrix `A`.
    pub fn matrix(&self) -> DenseMatrix<T> {
        DenseMatrix::vstack(&self.blocks).expect("blocks share the column count")
    }

    /// The full right-hand side `b`.
    pub fn stacked_rhs(&self) -> DenseVector<T> {
        DenseVector::concat(&self.rhs)
    }

    pub fn rank(&self) -> usize {
        rank(&self.matrix())
    }

    pub fn is_full_row_rank(&self) -> bool {
        self.rank() == self.total_rows()
    }

    pub fn is_square(&self) -> bool {
        self.total_rows() == self.unknowns
    }

    /// `ker A = 0`: square with full rank.
    pub fn is_nonsingular(&self) -> bool {
        self.is_square() && self.is_full_row_rank()
    }

    /// Fails with `RankDeficient` unless `A` has full row rank.
    pub fn require_full_row_rank(&self) -> Result<(), FlowError> {
        let (r, m) = (self.rank(), self.total_rows());
        if r < m {
            return Err(FlowError::RankDeficient { rank: r, rows: m });
        }
        Ok(())
    }

    /// `max_i ‖A_i x − b_i‖∞` for a single candidate solution.
    pub fn residual_of(&self, x: &[T]) -> T {
        self.blocks
            .iter()
            .zip(&self.rhs)
            .map(|(a, b)| a.matvec(x).expect("dimension checked").sub(b).norm_inf())
            .fold(T::zero(), T::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = DenseMatrix<f64>;

    #[test]
    fn scalar_rows_and_blocks() {
        let a = M::from_rows(&[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 2.0]]).unwrap();
        let s = LinearSystem::from_rows(&a, &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(s.agents(), 3);
        assert!(s.is_nonsingular());
        let s = LinearSystem::from_blocks(&a, &[1.0, 2.0, 3.0], &[2, 1]).unwrap();
        assert_eq!(s.block_sizes(), vec![2, 1]);
        assert_eq!(s.matrix(), a);
        assert_eq!(s.stacked_rhs().as_slice(), &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn rejects_zero_rows_and_deficient_blocks() {
        let a = M::from_rows(&[[1.0, 0.0], [0.0, 0.0]]).unwrap();
        assert_eq!(
            LinearSystem::from_rows(&a, &[1.0, 0.0]),
            Err(FlowError::ZeroRow { block: 1, row: 0 })
        );
        let a = M::from_rows(&[[1.0, 2.0], [2.0, 4.0]]).unwrap();
        assert_eq!(
            LinearSystem::from_blocks(&a, &[1.0, 2.0], &[2]),
            Err(FlowError::RankDeficientBlock { block: 0 })
        );
        // Duplicate scalar rows are admitted; the global rank check is separate.
        let s = LinearSystem::from_rows(&a, &[1.0, 2.0]).unwrap();
        assert!(!s.is_full_row_rank());
        assert!(matches!(
            s.require_full_row_rank(),
            Err(FlowError::RankDeficient { rank: 1, rows: 2 })
        ));
    }

    #[test]
    fn rejects_tall_and_misshaped_input() {
        let a = M::from_rows(&[[1.0], [2.0]]).unwrap();
        assert!(matches!(
            LinearSystem::from_rows(&a, &[1.0, 2.0]),
            Err(FlowError::TooManyRows { .. })
        ));
        let a = M::identity(2);
        assert!(LinearSystem::from_rows(&a, &[1.0]).is_err());
        assert!(LinearSystem::from_blocks(&a, &[1.0, 2.0], &[1]).is_err());
        assert!(LinearSystem::from_blocks(&a, &[1.0, 2.0], &[2, 0]).is_err());
    }
}
