//! Spectral analysis of the stacked dynamics.
//!
//! With `P = diag(P_1, …, P_N)` and `L̄ = L ⊗ I_n`, the plain flow is
//! `Ẋ = −P L̄ X` and the restoring flow's error obeys
//! `ė = −(P L̄ + I − P) e`. Everything here is computed through symmetric
//! similar forms (`P L̄ P`, `P L̄ P + I − P`, `Q̄ᵀ L̄ Q̄`), cross-checked
//! against the general eigenvalue path on small instances.
//!
//! Sign convention: reported eigenvalues are those of `P L̄ P`, i.e. the
//! negated exponents of the flow, so decay rates are positive numbers.

use serde::Serialize;
use thiserror::Error;

use crate::flow::{projection_for_block, FlowError, LinearSystem};
use crate::graph::{is_connected, lambda2, laplacian, GraphError, NetworkGraph};
use crate::linalg::{
    general_eigenvalues, kron, spectrum_distance, sym_eigen, Complex, DenseMatrix, LinalgError,
};
use crate::scalar::Real;
use crate::tolerances;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("system is rank deficient (rank {rank} < {rows} rows)")]
    RankDeficient { rank: usize, rows: usize },
    #[error("ker A is nontrivial: {rows} independent rows for {unknowns} unknowns")]
    NontrivialKernel { rows: usize, unknowns: usize },
    #[error("communication graph is disconnected")]
    Disconnected,
    #[error("graph has {vertices} vertices but the system has {agents} row blocks")]
    MismatchedTopology { vertices: usize, agents: usize },
    #[error("stacked operator has no nonzero eigenvalue")]
    NoNonzeroEigenvalue,
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn check_topology<T: Real>(system: &LinearSystem<T>, g: &NetworkGraph) -> Result<(), SpectralError> {
    if g.vertex_count() != system.agents() {
        return Err(SpectralError::MismatchedTopology {
            vertices: g.vertex_count(),
            agents: system.agents(),
        });
    }
    Ok(())
}

fn check_analyzable<T: Real>(system: &LinearSystem<T>, g: &NetworkGraph) -> Result<(), SpectralError> {
    check_topology(system, g)?;
    if !is_connected(g) {
        return Err(SpectralError::Disconnected);
    }
    let (rank, rows) = (system.rank(), system.total_rows());
    if rank < rows {
        return Err(SpectralError::RankDeficient { rank, rows });
    }
    Ok(())
}

/// `P = diag(P_1, …, P_N)` and `L̄ = L ⊗ I_n`, both `(N·n) × (N·n)`.
pub fn stacked_operators<T: Real>(
    system: &LinearSystem<T>,
    g: &NetworkGraph,
) -> Result<(DenseMatrix<T>, DenseMatrix<T>), SpectralError> {
    check_topology(system, g)?;
    let blocks = system
        .blocks()
        .iter()
        .enumerate()
        .map(|(k, b)| {
            projection_for_block(b)
                .map(|p| p.matrix().clone())
                .map_err(|e| match e {
                    FlowError::RankDeficientBlock { .. } => FlowError::RankDeficientBlock { block: k },
                    other => other,
                })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let p = DenseMatrix::block_diagonal(&blocks);
    let lbar = kron(&laplacian::<T>(g), &DenseMatrix::identity(system.unknowns()));
    Ok((p, lbar))
}

/// Symmetric `P L̄ P`.
fn projected_laplacian<T: Real>(p: &DenseMatrix<T>, lbar: &DenseMatrix<T>) -> Result<DenseMatrix<T>, LinalgError> {
    Ok(p.matmul(lbar)?.matmul(p)?.symmetrized())
}

/// `τ = 1e-9 · λ_max`, with eigenvalues at or below it counted as zero.
fn zero_threshold<T: Real>(ascending: &[T]) -> T {
    let lambda_max = ascending.last().copied().unwrap_or_else(T::zero).max(T::zero());
    T::tol(tolerances::ZERO_EIGENVALUE_RELATIVE) * lambda_max
}

fn smallest_nonzero<T: Real>(ascending: &[T]) -> Result<T, SpectralError> {
    let tau = zero_threshold(ascending);
    ascending
        .iter()
        .copied()
        .find(|&v| v > tau)
        .ok_or(SpectralError::NoNonzeroEigenvalue)
}

fn zero_multiplicity<T: Real>(ascending: &[T]) -> usize {
    let tau = zero_threshold(ascending);
    ascending.iter().filter(|&&v| v <= tau).count()
}

/// Smallest nonzero eigenvalue of `P L̄ P` (equivalently of `P L̄`): the
/// asymptotic decay rate of the flow.
pub fn rho<T: Real>(system: &LinearSystem<T>, g: &NetworkGraph) -> Result<T, SpectralError> {
    check_analyzable(system, g)?;
    let (p, lbar) = stacked_operators(system, g)?;
    smallest_nonzero(&sym_eigen(&projected_laplacian(&p, &lbar)?)?.values)
}

/// Orthonormal basis `Q̄` of `Im P`, from unit eigenvectors of each `P_i`.
pub fn image_basis<T: Real>(system: &LinearSystem<T>) -> Result<DenseMatrix<T>, SpectralError> {
    let n = system.unknowns();
    let agents = system.agents();
    let mut columns: Vec<Vec<T>> = Vec::new();
    for (k, block) in system.blocks().iter().enumerate() {
        let pk = projection_for_block(block)
            .map_err(|_| FlowError::RankDeficientBlock { block: k })?;
        let e = sym_eigen(pk.matrix())?;
        for (c, &value) in e.values.iter().enumerate() {
            if (value - T::one()).abs() <= T::tol(tolerances::PROJECTOR_UNIT_EIGENVALUE) {
                let mut col = vec![T::zero(); agents * n];
                for i in 0..n {
                    col[k * n + i] = e.vectors.get(i, c);
                }
                columns.push(col);
            }
        }
    }
    // Re-orthonormalize (modified Gram–Schmidt).
    for c in 0..columns.len() {
        for prev in 0..c {
            let d: T = columns[c].iter().zip(&columns[prev]).map(|(&a, &b)| a * b).sum();
            let (head, tail) = columns.split_at_mut(c);
            for (x, &q) in tail[0].iter_mut().zip(&head[prev]) {
                *x -= d * q;
            }
        }
        let norm = columns[c].iter().map(|&v| v * v).sum::<T>().sqrt();
        columns[c].iter_mut().for_each(|v| *v /= norm);
    }
    Ok(DenseMatrix::from_fn(agents * n, columns.len(), |i, j| columns[j][i]))
}

/// Ascending spectrum of `Q̄ᵀ L̄ Q̄`, the restriction of `L̄` to `Im P`.
fn restricted_spectrum<T: Real>(system: &LinearSystem<T>, g: &NetworkGraph) -> Result<Vec<T>, SpectralError> {
    let q = image_basis(system)?;
    let lbar = kron(&laplacian::<T>(g), &DenseMatrix::identity(system.unknowns()));
    let restricted = q.transpose().matmul(&lbar)?.matmul(&q)?.symmetrized();
    Ok(sym_eigen(&restricted)?.values)
}

/// `ρ` by the second route: smallest nonzero eigenvalue of `Q̄ᵀ L̄ Q̄`.
pub fn rho_projected<T: Real>(system: &LinearSystem<T>, g: &NetworkGraph) -> Result<T, SpectralError> {
    check_analyzable(system, g)?;
    smallest_nonzero(&restricted_spectrum(system, g)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theorem2Check<T> {
    pub rho: T,
    pub rho_projected: T,
    pub lambda2: T,
    /// `ρ ≤ λ₂(L) + 1e-9`.
    pub holds: bool,
    /// `|ρ − ρ_projected| ≤ 1e-7`.
    pub paths_agree: bool,
}

/// Checks `ρ ≤ λ₂(L)` and the agreement of the two `ρ` computations.
pub fn verify_theorem2<T: Real>(system: &LinearSystem<T>, g: &NetworkGraph) -> Result<Theorem2Check<T>, SpectralError> {
    let rho = rho(system, g)?;
    let rho_projected = rho_projected(system, g)?;
    let lambda2 = lambda2::<T>(g)?;
    Ok(Theorem2Check {
        rho,
        rho_projected,
        lambda2,
        holds: rho <= lambda2 + T::tol(tolerances::BOUND_SLACK),
        paths_agree: (rho - rho_projected).abs() <= T::tol(tolerances::RHO_PATH_AGREEMENT),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lemma1Check<T> {
    /// Smallest eigenvalue of `P L̄ P + I − P`.
    pub min_real: T,
    /// Largest `|Im λ|` over the eigenvalues of `P L̄ + I − P`; present when
    /// the stacked dimension admits the general path.
    pub max_imag: Option<T>,
    /// Smallest `Re λ` by the general path.
    pub general_min_real: Option<T>,
    /// Paired distance between the general and symmetric spectra.
    pub path_distance: Option<T>,
}

impl<T: Real> Lemma1Check<T> {
    /// Every eigenvalue real (to 1e-7) and positive, and both paths agree.
    pub fn holds(&self) -> bool {
        self.min_real > T::zero()
            && self.general_min_real.is_none_or(|v| v > T::zero())
            && self.max_imag.is_none_or(|v| v <= T::tol(tolerances::IMAGINARY_PART))
            && self
                .path_distance
                .is_none_or(|d| d <= T::tol(tolerances::SPECTRUM_PATH_AGREEMENT))
    }
}

/// Eigenvalues of the error dynamics `P L̄ + I − P` for `ker A = 0`.
pub fn verify_lemma1<T: Real>(system: &LinearSystem<T>, g: &NetworkGraph) -> Result<Lemma1Check<T>, SpectralError> {
    check_analyzable(system, g)?;
    if !system.is_square() {
        return Err(SpectralError::NontrivialKernel {
            rows: system.total_rows(),
            unknowns: system.unknowns(),
        });
    }
    let (p, lbar) = stacked_operators(system, g)?;
    let dim = p.rows();
    let identity = DenseMatrix::identity(dim);
    let complement = identity.sub(&p)?;
    let symmetric = projected_laplacian(&p, &lbar)?.add(&complement)?;
    let sym_values = sym_eigen(&symmetric)?.values;
    let mut check = Lemma1Check {
        min_real: sym_values[0],
        max_imag: None,
        general_min_real: None,
        path_distance: None,
    };
    if dim <= tolerances::GENERAL_EIGEN_MAX_DIM {
        let general = p.matmul(&lbar)?.add(&complement)?;
        let values = general_eigenvalues(&general)?;
        let as_complex: Vec<Complex<T>> = sym_values.iter().map(|&v| Complex::new(v, T::zero())).collect();
        check.max_imag = Some(values.iter().map(|c| c.im.abs()).fold(T::zero(), T::max));
        check.general_min_real = Some(values.iter().map(|c| c.re).fold(T::infinity(), T::min));
        check.path_distance = Some(spectrum_distance(&values, &as_complex));
    }
    Ok(check)
}

/// Multiplicity of the zero eigenvalue of `P L̄ P` at threshold `τ`.
pub fn equilibrium_space_dim<T: Real>(system: &LinearSystem<T>, g: &NetworkGraph) -> Result<usize, SpectralError> {
    check_analyzable(system, g)?;
    let (p, lbar) = stacked_operators(system, g)?;
    Ok(zero_multiplicity(&sym_eigen(&projected_laplacian(&p, &lbar)?)?.values))
}

/// Dimension of the equilibrium set inside the constraint manifolds: the
/// zero multiplicity of `Q̄ᵀ L̄ Q̄`, which is `dim ker A`.
pub fn manifold_equilibrium_dim<T: Real>(system: &LinearSystem<T>, g: &NetworkGraph) -> Result<usize, SpectralError> {
    check_analyzable(system, g)?;
    Ok(zero_multiplicity(&restricted_spectrum(system, g)?))
}

/// Paired distance between the spectra of `MN` and `NM` for square `M`, `N`.
pub fn commuted_product_distance<T: Real>(m: &DenseMatrix<T>, n: &DenseMatrix<T>) -> Result<T, SpectralError> {
    let mn = general_eigenvalues(&m.matmul(n)?)?;
    let nm = general_eigenvalues(&n.matmul(m)?)?;
    Ok(spectrum_distance(&mn, &nm))
}

/// Flat summary of the spectral checks for one `(A, G)` instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralReport<T> {
    pub agents: usize,
    pub unknowns: usize,
    pub stacked_dim: usize,
    pub rho: T,
    pub rho_projected: T,
    pub rho_paths_agree: bool,
    pub lambda2: T,
    pub theorem2_holds: bool,
    pub equilibrium_dim: usize,
    pub manifold_equilibrium_dim: usize,
    /// Lemma fields are present only when `ker A = 0`.
    pub lemma1_min_eigenvalue: Option<T>,
    pub lemma1_max_imag: Option<T>,
    pub lemma1_path_distance: Option<T>,
}

pub fn spectral_report<T: Real>(system: &LinearSystem<T>, g: &NetworkGraph) -> Result<SpectralReport<T>, SpectralError> {
    let t2 = verify_theorem2(system, g)?;
    let lemma = if system.is_square() {
        Some(verify_lemma1(system, g)?)
    } else {
        None
    };
    Ok(SpectralReport {
        agents: system.agents(),
        unknowns: system.unknowns(),
        stacked_dim: system.agents() * system.unknowns(),
        rho: t2.rho,
        rho_projected: t2.rho_projected,
        rho_paths_agree: t2.paths_agree,
        lambda2: t2.lambda2,
        theorem2_holds: t2.holds,
        equilibrium_dim: equilibrium_space_dim(system, g)?,
        manifold_equilibrium_dim: manifold_equilibrium_dim(system, g)?,
        lemma1_min_eigenvalue: lemma.as_ref().map(|l| l.min_real),
        lemma1_max_imag: lemma.as_ref().and_then(|l| l.max_imag),
        lemma1_path_distance: lemma.as_ref().and_then(|l| l.path_distance),
    })
}
