//! Hermitian certification and commuting tuples.

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::tol;

/// A matrix certified Hermitian: stores the symmetrized matrix together with
/// the operator-norm defect of the original input.
#[derive(Debug, Clone)]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
    hermiticity_defect: f64,
}

impl HermitianOperator {
    /// Default certification tolerance for a given dimension.
    pub fn default_tolerance(dim: usize) -> f64 {
        tol::HERMITIAN_TOL_PER_DIM * dim as f64
    }

    /// Certifies `m` Hermitian within `tolerance` and wraps the symmetrized
    /// matrix (M + M*)/2. The recorded defect is ||M - M*|| (operator norm).
    pub fn certify(m: &ComplexMatrix, tolerance: f64) -> Result<Self> {
        m.check_finite()?;
        let defect = m.sub(&m.adjoint()).op_norm();
        if defect > tolerance {
            return Err(Error::HermitianDefect {
                defect,
                tol: tolerance,
            });
        }
        Ok(HermitianOperator {
            matrix: m.hermitian_part(),
            hermiticity_defect: defect,
        })
    }

    /// Certification at the default tolerance 1e-12 * dim.
    pub fn certify_default(m: &ComplexMatrix) -> Result<Self> {
        Self::certify(m, Self::default_tolerance(m.dim()))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.hermiticity_defect
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Operator norm; for a Hermitian matrix this is max |eigenvalue|.
    pub fn op_norm(&self) -> f64 {
        self.matrix.op_norm()
    }

    /// Schatten-p norm computed from |eigenvalue| rather than a generic SVD.
    pub fn schatten_norm(&self, p: f64) -> Result<f64> {
        if !(p >= 1.0) {
            return Err(Error::domain(format!("Schatten index p = {p} < 1")));
        }
        if p == 2.0 {
            return Ok(self.matrix.frobenius_norm());
        }
        if p.is_infinite() {
            return Ok(self.matrix.op_norm());
        }
        let eigs = crate::eigen::hermitian_eigenvalues(&self.matrix)?;
        Ok(eigs
            .iter()
            .map(|l| l.abs().powf(p))
            .sum::<f64>()
            .powf(1.0 / p))
    }
}

/// A finite family of Hermitian operators that commute within tolerance.
#[derive(Debug, Clone)]
pub struct CommutingTuple {
    operators: Vec<HermitianOperator>,
    commutator_defect: f64,
}

impl CommutingTuple {
    /// Validates pairwise commutators; `tolerance` defaults to 1e-10 through
    /// [`CommutingTuple::new_default`].
    pub fn new(operators: Vec<HermitianOperator>, tolerance: f64) -> Result<Self> {
        if operators.is_empty() {
            return Err(Error::invalid("empty tuple"));
        }
        let dim = operators[0].dim();
        for op in &operators {
            if op.dim() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: op.dim(),
                });
            }
        }
        let mut defect = 0.0_f64;
        for i in 0..operators.len() {
            for j in i + 1..operators.len() {
                let a = operators[i].matrix();
                let b = operators[j].matrix();
                let comm = a.mul(b).sub(&b.mul(a));
                defect = defect.max(comm.op_norm());
            }
        }
        if defect > tolerance {
            return Err(Error::CommutatorDefect {
                defect,
                tol: tolerance,
            });
        }
        Ok(CommutingTuple {
            operators,
            commutator_defect: defect,
        })
    }

    pub fn new_default(operators: Vec<HermitianOperator>) -> Result<Self> {
        Self::new(operators, tol::COMMUTING_TOL)
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.operators[0].dim()
    }

    pub fn operators(&self) -> &[HermitianOperator] {
        &self.operators
    }

    pub fn operator(&self, i: usize) -> &HermitianOperator {
        &self.operators[i]
    }

    pub fn commutator_defect(&self) -> f64 {
        self.commutator_defect
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn accepts_real_symmetric() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let h = HermitianOperator::certify(&m, 1e-12).unwrap();
        assert_eq!(h.hermiticity_defect(), 0.0);
    }

    #[test]
    fn rejects_anti_hermitian() {
        // [[0, i], [i, 0]] has M - M* = [[0, 2i], [2i, 0]], defect 2.
        let i = Complex64::new(0.0, 1.0);
        let z = Complex64::new(0.0, 0.0);
        let m = ComplexMatrix::from_rows(&[vec![z, i], vec![i, z]]).unwrap();
        match HermitianOperator::certify(&m, 1e-12) {
            Err(Error::HermitianDefect { defect, .. }) => {
                assert!((defect - 2.0).abs() < 1e-10);
            }
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn symmetrized_input_has_zero_defect() {
        let m = ComplexMatrix::from_rows(&[
            vec![Complex64::new(1.0, 0.3), Complex64::new(2.0, -1.0)],
            vec![Complex64::new(0.5, 0.7), Complex64::new(-1.0, 0.1)],
        ])
        .unwrap();
        let sym = m.hermitian_part();
        let h = HermitianOperator::certify(&sym, 1e-15 * 2.0).unwrap();
        assert!(h.hermiticity_defect() <= 1e-15 * 2.0);
    }

    #[test]
    fn diagonal_pair_commutes() {
        let a = HermitianOperator::certify_default(&ComplexMatrix::diag(&[1.0, 2.0]).unwrap())
            .unwrap();
        let b = HermitianOperator::certify_default(&ComplexMatrix::diag(&[3.0, 4.0]).unwrap())
            .unwrap();
        let t = CommutingTuple::new_default(vec![a, b]).unwrap();
        assert!(t.commutator_defect() <= 1e-15);
    }

    #[test]
    fn rejects_non_commuting() {
        let x = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let z = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]).unwrap();
        let a = HermitianOperator::certify_default(&x).unwrap();
        let b = HermitianOperator::certify_default(&z).unwrap();
        assert!(matches!(
            CommutingTuple::new_default(vec![a, b]),
            Err(Error::CommutatorDefect { .. })
        ));
    }
}
