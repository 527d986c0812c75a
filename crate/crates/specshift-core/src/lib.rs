//! Finite-dimensional spectral calculus for pairs of commuting Hermitian
//! operators: certified Hermitian matrices with Schatten norms, a cyclic
//! Jacobi eigensolver with atom grouping and joint diagonalization, dyadic
//! band decompositions of [0,1]-operators, corner-space compression of
//! commuting tuples, operator-valued Riemann-Stieltjes and line integrals,
//! divided-difference double spectral integrals, and the two-variable
//! spectral shift field with four independent evaluation paths of the same
//! trace expression.
//!
//! Everything is deterministic and pure; values are immutable after
//! construction and safe to share across threads.

pub mod berg;
pub mod eigen;
pub mod error;
pub mod field;
pub mod hermitian;
pub mod integrals;
pub mod interval;
pub mod matrix;
pub mod spectral;
pub mod tol;
pub mod trace;

pub use error::{Error, Result};
pub use hermitian::{CommutingTuple, HermitianOperator};
pub use interval::Interval;
pub use matrix::{hs_inner, ComplexMatrix};

pub use num_complex::Complex64;
