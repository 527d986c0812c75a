//! Default tolerances, collected in one place.
//!
//! Scale-dependent values are expressed as factors; the call sites multiply
//! by the relevant scale (matrix dimension, interval length, norm).

/// Hermiticity certification: defect allowance per unit of dimension.
pub const HERMITIAN_TOL_PER_DIM: f64 = 1e-12;

/// Commutator defect allowance for a commuting tuple.
pub const COMMUTING_TOL: f64 = 1e-10;

/// Jacobi sweep convergence: off-diagonal Frobenius norm relative to the
/// Frobenius norm of the input.
pub const JACOBI_OFF_FACTOR: f64 = 1e-13;

/// Jacobi sweep limit before reporting non-convergence.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigenvalue grouping tolerance per unit of interval length.
pub const GROUP_TOL_FACTOR: f64 = 1e-8;

/// Projections: idempotency / orthogonality / resolution-of-identity checks.
pub const PROJECTION_TOL: f64 = 1e-10;

/// Relative reconstruction tolerance for spectral decompositions.
pub const RECONSTRUCTION_TOL: f64 = 1e-10;

/// Corner-space construction: vectors below this norm are discarded after a
/// band split, and Gram-Schmidt residuals below it do not open a new
/// direction.
pub const RANK_TOL: f64 = 1e-10;

/// Divided-difference coincidence threshold per unit of interval length.
pub const COINCIDENCE_TOL_FACTOR: f64 = 1e-9;

/// Default dyadic truncation depth (below double-precision resolution of
/// [0,1] remainders at the tolerances used here).
pub const DYADIC_DEPTH_DEFAULT: u32 = 40;

/// Default tail cut for the corner-compressed approximants.
pub const K_CUT_DEFAULT: u32 = 50;

/// Eigenvalues of an operator expected in [0,1] may stick out by this much.
pub const UNIT_RANGE_TOL: f64 = 1e-10;

/// Imaginary mass above this in a nominally real trace is a hard failure.
pub const XI_IMAG_TOL: f64 = 1e-10;

/// Relative agreement required between the four-term and two-term forms of
/// the spectral-integral trace.
pub const FOUR_TERM_TOL: f64 = 1e-10;
