//! Seeded random instances for experiments and sweeps.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::flow::LinearSystem;
use crate::graph::{generate, NetworkGraph, Topology};
use crate::linalg::{sym_eigen, DenseMatrix};
use crate::scalar::Real;

/// Upper bound on the condition number of any generated matrix.
pub const MAX_CONDITION: f64 = 1e3;

/// Condition number used by the default generators. Nearly parallel rows
/// make the decay rate scale roughly like `1/cond²`, so simulations on
/// matrices near [`MAX_CONDITION`] would need ~10⁸ steps.
pub const GENERATED_CONDITION: f64 = 10.0;

/// 2-norm condition number `σ_max / σ_min` of a full-row-rank matrix, from
/// the spectrum of `A Aᵀ`; infinite when rank deficient.
pub fn condition_number<T: Real>(a: &DenseMatrix<T>) -> T {
    let gram = a.matmul(&a.transpose()).expect("conformable").symmetrized();
    let values = match sym_eigen(&gram) {
        Ok(e) => e.values,
        Err(_) => return T::infinity(),
    };
    let (lo, hi) = (values[0], values[values.len() - 1]);
    if lo <= T::zero() {
        T::infinity()
    } else {
        (hi / lo).sqrt()
    }
}

/// Rows of a random `n × n` orthogonal matrix (Gram–Schmidt on uniform
/// draws).
fn random_orthogonal(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<f64>> {
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n);
    while rows.len() < n {
        let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        for q in &rows {
            let d: f64 = v.iter().zip(q).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(q).for_each(|(a, b)| *a -= d * b);
        }
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > 1e-3 {
            v.iter_mut().for_each(|a| *a /= norm);
            rows.push(v);
        }
    }
    rows
}

/// `rows × cols` matrix `U diag(σ) Vᵀ` with random orthogonal factors and
/// singular values uniform in `[1, condition]`, the extremes pinned, so
/// its condition number is `condition`.
pub fn random_with_condition<T: Real>(
    rng: &mut ChaCha8Rng,
    rows: usize,
    cols: usize,
    condition: f64,
) -> DenseMatrix<T> {
    assert!(rows >= 1 && rows <= cols, "need 1 <= rows <= cols");
    assert!((1.0..=MAX_CONDITION).contains(&condition), "condition out of range");
    let u = random_orthogonal(rng, rows);
    let v = random_orthogonal(rng, cols);
    let sigma: Vec<f64> = (0..rows)
        .map(|k| match k {
            0 => 1.0,
            1 => condition,
            _ => rng.random_range(1.0..=condition),
        })
        .map(|s| if rows == 1 { 1.0 } else { s })
        .collect();
    DenseMatrix::from_fn(rows, cols, |i, j| {
        T::of((0..rows).map(|k| u[i][k] * sigma[k] * v[k][j]).sum())
    })
}

fn random_rhs<T: Real>(rng: &mut ChaCha8Rng, m: usize) -> Vec<T> {
    (0..m).map(|_| T::of(rng.random_range(-1.0..1.0))).collect()
}

/// Scalar-row system: one agent per row of a random `rows × cols` matrix
/// of condition [`GENERATED_CONDITION`], with `b` uniform in `[−1, 1]`.
pub fn random_system<T: Real>(seed: u64, rows: usize, cols: usize) -> LinearSystem<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = random_with_condition(&mut rng, rows, cols, GENERATED_CONDITION);
    let b = random_rhs(&mut rng, rows);
    LinearSystem::from_rows(&a, &b).expect("well-conditioned rows form a valid system")
}

/// Square system of size `n`.
pub fn random_square_system<T: Real>(seed: u64, n: usize) -> LinearSystem<T> {
    random_system(seed, n, n)
}

/// Square system of size `n` whose rows are grouped into consecutive
/// blocks of 1 to 3 rows.
pub fn random_block_system<T: Real>(seed: u64, n: usize) -> LinearSystem<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = random_with_condition(&mut rng, n, n, GENERATED_CONDITION);
    let b = random_rhs(&mut rng, n);
    let mut sizes = Vec::new();
    let mut left = n;
    while left > 0 {
        let s = rng.random_range(1..=3usize).min(left);
        sizes.push(s);
        left -= s;
    }
    LinearSystem::from_blocks(&a, &b, &sizes).expect("blocks of a nonsingular matrix have full rank")
}

/// Graph on `n` vertices; a lone vertex for `n = 1`.
pub fn random_graph(topology: Topology, n: usize, seed: u64) -> NetworkGraph {
    if n == 1 {
        return NetworkGraph::new(1, &[]).expect("single vertex");
    }
    generate(topology, n, seed).expect("n >= 2 is valid for every topology")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn condition_of_simple_matrices() {
        let d = DenseMatrix::<f64>::from_diagonal(&[1.0, 10.0]);
        assert!((condition_number(&d) - 10.0).abs() < 1e-12);
        let s = DenseMatrix::<f64>::from_rows(&[[1.0, 1.0], [1.0, 1.0]]).unwrap();
        assert!(condition_number(&s).is_infinite() || condition_number(&s) > 1e7);
    }

    #[test]
    fn prescribed_condition_is_met() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for &(r, c, k) in &[(4, 4, 1.0), (3, 3, 1e3), (2, 5, 50.0), (1, 3, 10.0)] {
            let a: DenseMatrix<f64> = random_with_condition(&mut rng, r, c, k);
            let want = if r == 1 { 1.0 } else { k };
            assert!((condition_number(&a) - want).abs() <= 1e-8 * want);
        }
    }

    #[test]
    fn generated_systems_are_capped_and_reproducible() {
        for seed in 0..20 {
            let s = random_square_system::<f64>(seed, 5);
            assert!((condition_number(&s.matrix()) - GENERATED_CONDITION).abs() < 1e-8);
            assert!(s.is_nonsingular());
            assert_eq!(s.matrix(), random_square_system::<f64>(seed, 5).matrix());
            let r = random_system::<f64>(seed, 3, 6);
            assert!(r.is_full_row_rank() && r.total_rows() == 3);
            let blocks = random_block_system::<f64>(seed, 7);
            assert_eq!(blocks.block_sizes().iter().sum::<usize>(), 7);
            assert!(blocks.block_sizes().iter().all(|&s| (1..=3).contains(&s)));
        }
    }
}
