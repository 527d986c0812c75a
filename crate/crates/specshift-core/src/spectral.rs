//! Dyadic band projections and partial-sum reconstruction for operators with
//! spectrum in [0, 1].
//!
//! Level-k bands are the half-open unions U_j (2^-k (2j-1), 2^-k (2j)] for
//! j = 1..2^(k-1). Membership of an eigenvalue equals the k-th digit of its
//! binary expansion, in the variant that ends in repeating 1s at dyadic
//! rationals (forced by the left-open intervals). An eigenvalue of exactly 0
//! therefore lies in no band and an eigenvalue of exactly 1 in every band.

use num_complex::Complex64;

use crate::eigen::SpectralDecomposition;
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, ONE};
use crate::tol;

/// Spectral projection onto one dyadic band level.
#[derive(Debug, Clone)]
pub struct DyadicBand {
    pub level: u32,
    pub projection: ComplexMatrix,
}

/// The half-open intervals making up the level-k band set (small k only;
/// the list has 2^(k-1) entries).
pub fn band_intervals(k: u32) -> Vec<(f64, f64)> {
    let scale = 0.5_f64.powi(k as i32);
    (1..=(1u64 << (k - 1)))
        .map(|j| (scale * (2 * j - 1) as f64, scale * (2 * j) as f64))
        .collect()
}

/// Whether `lambda` (in [0,1]) lies in the level-k band set, i.e. whether the
/// k-th binary digit of the repeating-1s expansion is 1.
///
/// With m = ceil(lambda * 2^k): membership in (2^-k (m-1), 2^-k m] holds by
/// definition of the ceiling, and the band set consists of the intervals
/// with even m >= 2.
pub fn dyadic_digit(lambda: f64, k: u32) -> bool {
    debug_assert!((0.0..=1.0).contains(&lambda));
    let scaled = lambda * 2.0_f64.powi(k as i32);
    let m = scaled.ceil();
    m >= 1.0 && (m as u64) % 2 == 0
}

/// Scalar partial sum: sum over k <= depth of 2^-k * digit_k(lambda).
pub fn dyadic_partial_sum_scalar(lambda: f64, depth: u32) -> f64 {
    let mut acc = 0.0;
    for k in 1..=depth {
        if dyadic_digit(lambda, k) {
            acc += 0.5_f64.powi(k as i32);
        }
    }
    acc
}

/// The collapsed floor form: m 2^-K for lambda in (m 2^-K, (m+1) 2^-K],
/// which is ceil(lambda 2^K) - 1 clamped below at 0.
pub fn dyadic_floor_form_scalar(lambda: f64, depth: u32) -> f64 {
    debug_assert!((0.0..=1.0).contains(&lambda));
    let scale = 2.0_f64.powi(depth as i32);
    let m = (lambda * scale).ceil() - 1.0;
    if m < 0.0 {
        0.0
    } else {
        m / scale
    }
}

fn clamp_unit(sd: &SpectralDecomposition, range_tol: f64) -> Result<Vec<f64>> {
    sd.atoms()
        .iter()
        .map(|a| {
            let l = a.eigenvalue;
            if l < -range_tol || l > 1.0 + range_tol {
                Err(Error::domain(format!(
                    "eigenvalue {l} outside [0,1] beyond tolerance {range_tol:e}"
                )))
            } else {
                Ok(l.clamp(0.0, 1.0))
            }
        })
        .collect()
}

/// Level-k band projection of an operator with 0 <= A <= I, assembled from
/// its spectral decomposition.
pub fn dyadic_band(sd: &SpectralDecomposition, k: u32) -> Result<DyadicBand> {
    if k == 0 {
        return Err(Error::invalid("band level k must be >= 1"));
    }
    let lambdas = clamp_unit(sd, tol::UNIT_RANGE_TOL)?;
    let mut projection = ComplexMatrix::zeros_unchecked(sd.dim());
    for (atom, &l) in sd.atoms().iter().zip(&lambdas) {
        if dyadic_digit(l, k) {
            projection.add_scaled(&atom.projection, ONE);
        }
    }
    Ok(DyadicBand {
        level: k,
        projection,
    })
}

/// Partial sum S_K = sum over k <= depth of 2^-k E_k. Satisfies
/// ||A - S_K|| <= 2^-K.
pub fn dyadic_partial_sum(sd: &SpectralDecomposition, depth: u32) -> Result<ComplexMatrix> {
    if depth == 0 {
        return Err(Error::invalid("depth must be >= 1"));
    }
    let lambdas = clamp_unit(sd, tol::UNIT_RANGE_TOL)?;
    let mut acc = ComplexMatrix::zeros_unchecked(sd.dim());
    for k in 1..=depth {
        let w = Complex64::new(0.5_f64.powi(k as i32), 0.0);
        for (atom, &l) in sd.atoms().iter().zip(&lambdas) {
            if dyadic_digit(l, k) {
                acc.add_scaled(&atom.projection, w);
            }
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::eigh;
    use crate::hermitian::HermitianOperator;

    fn sd_of_diag(values: &[f64]) -> SpectralDecomposition {
        let h = HermitianOperator::certify_default(&ComplexMatrix::diag(values).unwrap()).unwrap();
        eigh(&h, 1e-12).unwrap()
    }

    #[test]
    fn band_membership_quarters() {
        // A = diag(0.25, 0.75): k=1 selects only 0.75, k=2 neither, k=3 both.
        let sd = sd_of_diag(&[0.25, 0.75]);
        let b1 = dyadic_band(&sd, 1).unwrap();
        let b2 = dyadic_band(&sd, 2).unwrap();
        let b3 = dyadic_band(&sd, 3).unwrap();
        let e11 = ComplexMatrix::diag(&[0.0, 1.0]).unwrap();
        let zero = ComplexMatrix::zeros(2).unwrap();
        let id = ComplexMatrix::identity(2).unwrap();
        assert!(b1.projection.sub(&e11).op_norm() < 1e-12);
        assert!(b2.projection.sub(&zero).op_norm() < 1e-12);
        assert!(b3.projection.sub(&id).op_norm() < 1e-12);
    }

    #[test]
    fn zero_operator_has_empty_bands() {
        let sd = sd_of_diag(&[0.0, 0.0]);
        for k in 1..=6 {
            assert_eq!(dyadic_band(&sd, k).unwrap().projection.op_norm(), 0.0);
        }
    }

    #[test]
    fn identity_is_in_every_band() {
        let sd = sd_of_diag(&[1.0, 1.0, 1.0]);
        for k in 1..=8 {
            let b = dyadic_band(&sd, k).unwrap();
            let id = ComplexMatrix::identity(3).unwrap();
            assert!(b.projection.sub(&id).op_norm() < 1e-12);
        }
        // Partial sums are (1 - 2^-K) I.
        let s = dyadic_partial_sum(&sd, 7).unwrap();
        let want = ComplexMatrix::identity(3).unwrap().scale_re(1.0 - 0.5f64.powi(7));
        assert!(s.sub(&want).op_norm() < 1e-13);
    }

    #[test]
    fn digit_law_exhaustive_on_64ths() {
        // Oracle: for lambda = m/64 > 0 the repeating-1s expansion has
        // digits of (m-1) in the first six positions, then all ones.
        for m in 0..=64u64 {
            let lambda = m as f64 / 64.0;
            for k in 1..=10u32 {
                let oracle = if m == 0 {
                    false
                } else if k <= 6 {
                    ((m - 1) >> (6 - k)) & 1 == 1
                } else {
                    true
                };
                assert_eq!(
                    dyadic_digit(lambda, k),
                    oracle,
                    "lambda = {m}/64, k = {k}"
                );
            }
        }
    }

    #[test]
    fn partial_sum_error_bound() {
        let sd = sd_of_diag(&[0.25, 0.75, 0.3, 0.9431]);
        let a = sd.reconstruct();
        for depth in [1u32, 3, 5, 10] {
            let s = dyadic_partial_sum(&sd, depth).unwrap();
            let err = a.sub(&s).op_norm();
            assert!(
                err <= 0.5f64.powi(depth as i32) + 1e-14,
                "depth {depth}: err {err:e}"
            );
        }
    }

    #[test]
    fn collapse_matches_literal_floor_sum() {
        // Independent oracle: enumerate the floor-form sum literally.
        let eigs = [0.13, 0.25, 0.5, 0.77, 0.999];
        let sd = sd_of_diag(&eigs);
        for depth in [1u32, 2, 4, 7] {
            let s = dyadic_partial_sum(&sd, depth).unwrap();
            let scale = 0.5f64.powi(depth as i32);
            let mut direct = ComplexMatrix::zeros(eigs.len()).unwrap();
            for m in 1..(1u64 << depth) {
                let lo = m as f64 * scale;
                let hi = (m + 1) as f64 * scale;
                for atom in sd.atoms() {
                    let l = atom.eigenvalue;
                    if l > lo && l <= hi {
                        direct.add_scaled(&atom.projection, Complex64::new(lo, 0.0));
                    }
                }
            }
            assert!(
                s.sub(&direct).op_norm() < 1e-12,
                "depth {depth} collapse failed"
            );
        }
    }

    #[test]
    fn scalar_paths_agree() {
        for &l in &[0.0, 0.1, 0.25, 1.0 / 3.0, 0.5, 0.9, 1.0] {
            for depth in [1u32, 5, 20, 40] {
                let a = dyadic_partial_sum_scalar(l, depth);
                let b = dyadic_floor_form_scalar(l, depth);
                assert!(
                    (a - b).abs() < 1e-15,
                    "lambda {l}, depth {depth}: {a} vs {b}"
                );
            }
        }
    }

    #[test]
    fn rejects_spectrum_outside_unit() {
        let sd = sd_of_diag(&[0.5, 1.5]);
        assert!(dyadic_band(&sd, 1).is_err());
    }
}
