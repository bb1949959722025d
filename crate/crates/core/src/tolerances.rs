//! Every numeric threshold used by the implementation and its tests.

/// Max `|m_ij - m_ji|` admitted by the symmetric eigensolver.
pub const SYMMETRY: f64 = 1e-10;
/// Jacobi stops when the off-diagonal Frobenius norm falls below this times `‖m‖_F`.
pub const JACOBI_OFF_DIAGONAL: f64 = 1e-12;
pub const JACOBI_MAX_SWEEPS: usize = 50;
/// Pairwise orthonormality of computed eigenvectors.
pub const EIGENVECTOR_ORTHONORMALITY: f64 = 1e-10;
/// `‖M v − λ v‖ ≤ EIGEN_RESIDUAL · (1 + |λ|) · ‖v‖`.
pub const EIGEN_RESIDUAL: f64 = 1e-8;

/// Iteration cap for the Hessenberg QR eigenvalue path.
pub const GENERAL_EIGEN_MAX_ITERATIONS: usize = 500;
/// Largest stacked dimension on which the nonsymmetric cross-checks run.
pub const GENERAL_EIGEN_MAX_DIM: usize = 25;

/// Pivot threshold of `direct_solve`, relative to `‖a‖∞`.
pub const SINGULAR_PIVOT: f64 = 1e-12;
/// Pivot threshold of `rank`, relative to `‖a‖∞`.
pub const RANK_PIVOT: f64 = 1e-10;

pub const PROJECTION_SYMMETRY: f64 = 1e-10;
pub const PROJECTION_IDEMPOTENCE: f64 = 1e-9;
/// `‖A_i P_i‖∞ ≤ PROJECTION_ANNIHILATION · ‖A_i‖∞`.
pub const PROJECTION_ANNIHILATION: f64 = 1e-9;

/// Zero-eigenvalue threshold for stacked operators, relative to `λ_max`.
pub const ZERO_EIGENVALUE_RELATIVE: f64 = 1e-9;
/// Eigenvalues of `P` within this distance of 1 span `Im P`.
pub const PROJECTOR_UNIT_EIGENVALUE: f64 = 1e-6;
/// Slack on `ρ ≤ λ₂(L)` and on the algebraic connectivity bounds.
pub const BOUND_SLACK: f64 = 1e-9;
/// Agreement of the two independent `ρ` computations.
pub const RHO_PATH_AGREEMENT: f64 = 1e-7;
/// Agreement of symmetric-path and general-path spectra.
pub const SPECTRUM_PATH_AGREEMENT: f64 = 1e-6;
/// Imaginary parts below this count as real.
pub const IMAGINARY_PART: f64 = 1e-7;
/// `λ₂ = n` on complete graphs, to this tolerance.
pub const COMPLETE_GRAPH_LAMBDA2: f64 = 1e-7;

pub const DEFAULT_CONVERGENCE: f64 = 1e-8;
/// Per-step slack on the monotone decrease of the consensus cost.
pub const COST_MONOTONICITY: f64 = 1e-12;
/// Oracle distances at or below this are excluded from rate fits.
pub const RATE_FIT_FLOOR: f64 = 1e-13;
pub const RATE_FIT_MIN_POINTS: usize = 30;
/// Leading fraction of the fit-eligible records treated as transient.
pub const RATE_FIT_TRANSIENT: f64 = 0.2;
/// Trailing fraction of a tracking run used for the steady-state lag.
pub const STEADY_STATE_WINDOW: f64 = 0.3;
/// Fitted rates above `(1 + RATE_BAND) · ρ` are flagged as nongeneric.
pub const RATE_BAND: f64 = 0.1;
