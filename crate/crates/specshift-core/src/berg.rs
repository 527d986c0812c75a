//! Corner-space compression of commuting Hermitian tuples.
//!
//! Given a commuting tuple rescaled into [0, I], the level-N corner space is
//! the span of all sign-resolved products of dyadic band projections (levels
//! k <= N, all operators) applied to the first N basis vectors. The
//! compressed approximants
//!
//!   B_i^(N) = sum_{k<=N} 2^-k E_k^(i) + sum_{k>N} 2^-k E_k^(i) (I - P_k)
//!
//! form a commuting family of positive contractions supported (through
//! P_N B P_N = B P_N) on the corner, monotone in N, with Schatten-norm
//! distance to A_i controlled by the tail sum of corner ranks.

use num_complex::Complex64;

use crate::eigen::{eigh, SpectralDecomposition};
use crate::error::{Error, Result};
use crate::hermitian::{CommutingTuple, HermitianOperator};
use crate::matrix::{vec_dot, vec_norm, vec_scale, ComplexMatrix, ONE, ZERO};
use crate::spectral::dyadic_digit;
use crate::tol;

/// An orthonormal basis of the ambient space, stored as unitary columns.
#[derive(Debug, Clone)]
pub struct OrthonormalBasis {
    matrix: ComplexMatrix,
    label: String,
}

impl OrthonormalBasis {
    /// Standard coordinate basis.
    pub fn standard(dim: usize) -> Result<Self> {
        Ok(OrthonormalBasis {
            matrix: ComplexMatrix::identity(dim)?,
            label: "standard".into(),
        })
    }

    /// Wraps unitary columns; the Gram matrix must be the identity within
    /// 1e-12.
    pub fn from_unitary(matrix: ComplexMatrix, label: impl Into<String>) -> Result<Self> {
        let gram = matrix.adjoint().mul(&matrix);
        let defect = gram.sub(&ComplexMatrix::identity(matrix.dim())?).op_norm();
        if defect > 1e-12 {
            return Err(Error::numerical(format!(
                "basis Gram defect {defect:.3e} exceeds 1e-12"
            )));
        }
        Ok(OrthonormalBasis {
            matrix,
            label: label.into(),
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.dim()).map(|r| self.matrix.get(r, j)).collect()
    }
}

/// Affine rescaling of one operator into [0, I] (shift 1/2, scale
/// 1/(2 ||C||)); `degenerate` marks the zero operator, which maps to I/2 by
/// convention with the scale undefined.
#[derive(Debug, Clone, Copy)]
pub struct RescaleData {
    pub norm: f64,
    pub degenerate: bool,
}

/// A = C / (2 ||C||) + I/2, so that 0 <= A <= I and C = 2||C|| (A - I/2).
///
/// The norm is taken from the exact eigenvalue extremes (padded by one part
/// in 1e12), not the iterative estimator: the containment 0 <= A <= I must
/// be certain for the band projections downstream.
pub fn rescale_to_unit(c: &HermitianOperator) -> Result<(HermitianOperator, RescaleData)> {
    let eigs = crate::eigen::hermitian_eigenvalues(c.matrix())?;
    let norm = eigs
        .iter()
        .map(|l| l.abs())
        .fold(0.0_f64, f64::max)
        * (1.0 + 1e-12);
    let dim = c.dim();
    if norm == 0.0 {
        let half = ComplexMatrix::identity(dim)?.scale_re(0.5);
        return Ok((
            HermitianOperator::certify(&half, 1e-12)?,
            RescaleData {
                norm: 0.0,
                degenerate: true,
            },
        ));
    }
    let a = c
        .matrix()
        .scale_re(0.5 / norm)
        .add(&ComplexMatrix::identity(dim)?.scale_re(0.5));
    Ok((
        HermitianOperator::certify(&a, HermitianOperator::default_tolerance(dim))?,
        RescaleData {
            norm,
            degenerate: false,
        },
    ))
}

/// Inverse of [`rescale_to_unit`] applied to an approximant of A.
pub fn unrescale_matrix(b: &ComplexMatrix, data: &RescaleData) -> Result<ComplexMatrix> {
    if data.degenerate {
        return ComplexMatrix::zeros(b.dim());
    }
    let id = ComplexMatrix::identity(b.dim())?;
    Ok(b.sub(&id.scale_re(0.5)).scale_re(2.0 * data.norm))
}

/// dim L_N <= min(D, N (2^t - 1)^N + N) for a tuple of length t.
pub fn corner_dimension_bound(n: usize, tuple_len: usize, ambient_dim: usize) -> usize {
    let base = (1u128 << tuple_len) - 1;
    let mut pow: u128 = 1;
    for _ in 0..n {
        pow = pow.saturating_mul(base);
    }
    let bound = (n as u128)
        .saturating_mul(pow)
        .saturating_add(n as u128);
    bound.min(ambient_dim as u128) as usize
}

/// Orthonormal spanning set of the level-N corner space, as columns, plus
/// the projection onto it.
///
/// The span is computed by iterative splitting: starting from the first N
/// basis vectors, every (level, operator) pair replaces each vector v by
/// E v and (I - E) v; vectors of norm <= 1e-10 are discarded and the rest
/// orthonormalized by modified Gram-Schmidt with re-orthogonalization at
/// rank tolerance 1e-10. Splitting preserves spans, so the set may be
/// re-orthonormalized after every step without changing the result.
pub fn build_corner_space(
    bands: &BandTable,
    basis: &OrthonormalBasis,
    n: usize,
) -> Result<CornerSpace> {
    if n < 1 {
        return Err(Error::invalid("corner level N must be >= 1"));
    }
    let dim = basis.dim();
    let mut set: Vec<Vec<Complex64>> = (0..n.min(dim)).map(|j| basis.column(j)).collect();

    'levels: for k in 1..=n {
        for i in 0..bands.tuple_len() {
            if set.len() == dim {
                break 'levels;
            }
            let e = bands.band(i, k as u32)?;
            let mut next: Vec<Vec<Complex64>> = Vec::with_capacity(2 * set.len());
            for v in &set {
                let ev = e.matvec(v);
                let mut rest = v.clone();
                for (r, x) in rest.iter_mut().enumerate() {
                    *x -= ev[r];
                }
                for cand in [ev, rest] {
                    if vec_norm(&cand) > tol::RANK_TOL {
                        orthonormalize_into(&mut next, cand);
                    }
                }
            }
            set = next;
        }
    }

    let mut projection = ComplexMatrix::zeros_unchecked(dim);
    for col in &set {
        for a in 0..dim {
            for b in 0..dim {
                let v = projection.get(a, b) + col[a] * col[b].conj();
                projection.set(a, b, v);
            }
        }
    }
    Ok(CornerSpace {
        n,
        dim: set.len(),
        columns: set,
        projection,
    })
}

fn orthonormalize_into(out: &mut Vec<Vec<Complex64>>, mut v: Vec<Complex64>) {
    for _ in 0..2 {
        for q in out.iter() {
            let c = vec_dot(q, &v);
            for (r, x) in v.iter_mut().enumerate() {
                *x -= c * q[r];
            }
        }
    }
    let n = vec_norm(&v);
    if n > tol::RANK_TOL {
        vec_scale(&mut v, 1.0 / n);
        out.push(v);
    }
}

/// One corner space: level, orthonormal columns, projection.
#[derive(Debug, Clone)]
pub struct CornerSpace {
    pub n: usize,
    pub dim: usize,
    pub columns: Vec<Vec<Complex64>>,
    pub projection: ComplexMatrix,
}

impl CornerSpace {
    /// Corner basis as a (ambient x corner-dim) column list.
    pub fn basis_columns(&self) -> &[Vec<Complex64>] {
        &self.columns
    }
}

/// Cache of dyadic band projections E_k^(i) for the rescaled tuple.
pub struct BandTable {
    decompositions: Vec<SpectralDecomposition>,
    cache: std::cell::RefCell<std::collections::BTreeMap<(usize, u32), ComplexMatrix>>,
}

impl BandTable {
    pub fn new(rescaled: &[HermitianOperator]) -> Result<Self> {
        let decompositions = rescaled
            .iter()
            .map(|a| eigh(a, 0.0))
            .collect::<Result<Vec<_>>>()?;
        Ok(BandTable {
            decompositions,
            cache: Default::default(),
        })
    }

    pub fn tuple_len(&self) -> usize {
        self.decompositions.len()
    }

    pub fn decomposition(&self, i: usize) -> &SpectralDecomposition {
        &self.decompositions[i]
    }

    /// E_k^(i), cached.
    pub fn band(&self, i: usize, k: u32) -> Result<ComplexMatrix> {
        if let Some(m) = self.cache.borrow().get(&(i, k)) {
            return Ok(m.clone());
        }
        let sd = &self.decompositions[i];
        let mut proj = ComplexMatrix::zeros_unchecked(sd.dim());
        for atom in sd.atoms() {
            let l = atom.eigenvalue;
            if l < -tol::UNIT_RANGE_TOL || l > 1.0 + tol::UNIT_RANGE_TOL {
                return Err(Error::domain(format!(
                    "eigenvalue {l} outside [0,1]; rescale the tuple first"
                )));
            }
            if dyadic_digit(l.clamp(0.0, 1.0), k) {
                proj.add_scaled(&atom.projection, ONE);
            }
        }
        self.cache.borrow_mut().insert((i, k), proj.clone());
        Ok(proj)
    }
}

/// Per-level record of the construction.
#[derive(Debug, Clone)]
pub struct BergLevel {
    pub n: usize,
    pub corner: CornerSpace,
    pub approximants: Vec<HermitianOperator>,
    /// Max defect of P_N B P_N = B P_N = sum_{k<=N} 2^-k E_k P_N.
    pub corner_identity_defect: f64,
    pub saturated: bool,
}

/// Options for [`BergSequence::build`].
#[derive(Debug, Clone, Copy)]
pub struct BergOptions {
    /// Tail truncation level; the tail is exact once the corner ladder
    /// saturates, otherwise the residual 2^-k_cut is recorded.
    pub k_cut: u32,
}

impl Default for BergOptions {
    fn default() -> Self {
        BergOptions {
            k_cut: tol::K_CUT_DEFAULT,
        }
    }
}

/// The full construction for one commuting tuple and one basis choice.
pub struct BergSequence {
    pub rescaled: Vec<HermitianOperator>,
    pub rescale_data: Vec<RescaleData>,
    pub bands: BandTable,
    pub levels: Vec<BergLevel>,
    /// rank P_k for k = 1..=ladder length (the ladder stops at saturation
    /// or at k_cut).
    pub ladder_ranks: Vec<usize>,
    /// First k with P_k = I, when reached.
    pub saturation_level: Option<usize>,
    /// 0 when the tail is exact, else 2^-k_cut.
    pub truncation_residual: f64,
    pub options: BergOptions,
    ambient_dim: usize,
    tuple_len: usize,
}

impl BergSequence {
    /// Rescales the tuple, builds the corner ladder P_1, P_2, ... up to
    /// saturation (or k_cut), and assembles the approximants for every
    /// requested level.
    pub fn build(
        tuple: &CommutingTuple,
        basis: &OrthonormalBasis,
        n_list: &[usize],
        options: BergOptions,
    ) -> Result<Self> {
        if n_list.is_empty() {
            return Err(Error::invalid("empty level list"));
        }
        let mut sorted = n_list.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted[0] < 1 {
            return Err(Error::invalid("levels must be >= 1"));
        }
        let dim = tuple.dim();
        if basis.dim() != dim {
            return Err(Error::DimensionMismatch {
                left: basis.dim(),
                right: dim,
            });
        }

        let mut rescaled = Vec::new();
        let mut rescale_data = Vec::new();
        for op in tuple.operators() {
            let (a, data) = rescale_to_unit(op)?;
            rescaled.push(a);
            rescale_data.push(data);
        }
        let bands = BandTable::new(&rescaled)?;

        let max_n = *sorted.last().unwrap();
        let ladder_limit = (options.k_cut as usize).max(max_n);
        let mut ladder: Vec<CornerSpace> = Vec::new();
        let mut saturation_level = None;
        for k in 1..=ladder_limit {
            let cs = build_corner_space(&bands, basis, k)?;
            let saturated = cs.dim == dim;
            ladder.push(cs);
            if saturated {
                saturation_level = Some(k);
                break;
            }
            if k >= options.k_cut as usize && k >= max_n {
                break;
            }
        }
        let ladder_ranks: Vec<usize> = ladder.iter().map(|c| c.dim).collect();
        let truncation_residual = if saturation_level.is_some() {
            0.0
        } else {
            0.5_f64.powi(options.k_cut as i32)
        };

        let mut levels = Vec::new();
        for &n in &sorted {
            let corner = match saturation_level {
                Some(ks) if n >= ks => full_corner(dim, n)?,
                _ => {
                    if n <= ladder.len() {
                        ladder[n - 1].clone()
                    } else {
                        // No saturation by k_cut and n beyond the ladder.
                        build_corner_space(&bands, basis, n)?
                    }
                }
            };
            let saturated = corner.dim == dim;
            let mut approximants = Vec::new();
            let mut defect = 0.0_f64;
            for i in 0..rescaled.len() {
                let b = build_bn(
                    &bands,
                    &ladder,
                    saturation_level,
                    i,
                    n,
                    options.k_cut,
                    dim,
                )?;
                defect = defect.max(corner_identity_defect(&bands, &b, &corner.projection, i, n)?);
                approximants.push(HermitianOperator::certify(
                    &b,
                    HermitianOperator::default_tolerance(dim).max(1e-10),
                )?);
            }
            if defect > 1e-8 {
                return Err(Error::numerical(format!(
                    "corner identity defect {defect:.3e} at level {n}"
                )));
            }
            levels.push(BergLevel {
                n,
                corner,
                approximants,
                corner_identity_defect: defect,
                saturated,
            });
        }

        Ok(BergSequence {
            rescaled,
            rescale_data,
            bands,
            levels,
            ladder_ranks,
            saturation_level,
            truncation_residual,
            options,
            ambient_dim: dim,
            tuple_len: tuple.len(),
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn tuple_len(&self) -> usize {
        self.tuple_len
    }

    /// rank P_k, continuing with the ambient dimension beyond the ladder.
    pub fn rank_at(&self, k: usize) -> usize {
        if k == 0 {
            return 0;
        }
        match self.saturation_level {
            Some(ks) if k >= ks => self.ambient_dim,
            _ => self
                .ladder_ranks
                .get(k - 1)
                .copied()
                .unwrap_or(self.ambient_dim),
        }
    }

    /// The tail estimate sum_{k>n} 2^-k (rank P_k)^(1/t): the explicit bound
    /// on ||A_i - B_i^(N)||_t from the construction.
    pub fn tail_bound(&self, n: usize) -> f64 {
        let t = self.tuple_len as f64;
        let horizon = match self.saturation_level {
            Some(ks) => ks.max(n + 1),
            None => (self.options.k_cut as usize).max(n + 1),
        };
        let mut acc = 0.0;
        for k in (n + 1)..=horizon {
            acc += 0.5_f64.powi(k as i32) * (self.rank_at(k) as f64).powf(1.0 / t);
        }
        // Geometric remainder with full rank beyond the horizon.
        acc += 0.5_f64.powi(horizon as i32) * (self.ambient_dim as f64).powf(1.0 / t);
        acc
    }

    pub fn dimension_bound(&self, n: usize) -> usize {
        corner_dimension_bound(n, self.tuple_len, self.ambient_dim)
    }

    /// The approximant mapped back to the scale of the original operator.
    pub fn unrescaled_approximant(&self, level: &BergLevel, i: usize) -> Result<ComplexMatrix> {
        unrescale_matrix(level.approximants[i].matrix(), &self.rescale_data[i])
    }

    /// ||P_N - P_(N+1) P_N|| for consecutive built levels.
    pub fn nesting_defects(&self) -> Vec<f64> {
        self.levels
            .windows(2)
            .map(|w| {
                let p = &w[0].corner.projection;
                let q = &w[1].corner.projection;
                p.sub(&q.mul(p)).op_norm()
            })
            .collect()
    }

    /// Diagnostics rows for every built level and every requested Schatten
    /// index. All p must satisfy p >= tuple length (the tail estimate
    /// hypothesis "for p >= n").
    pub fn diagnostics(&self, p_list: &[f64]) -> Result<Vec<BergDiagRow>> {
        let t = self.tuple_len as f64;
        for &p in p_list {
            if p < t {
                return Err(Error::domain(format!(
                    "Schatten index p = {p} violates the hypothesis p >= n = {t}"
                )));
            }
        }
        let mut rows = Vec::new();
        for (li, level) in self.levels.iter().enumerate() {
            let next = self.levels.get(li + 1);
            let max_pairwise = self.max_pairwise_commutator(level);
            for i in 0..self.tuple_len {
                let a = self.rescaled[i].matrix();
                let b = level.approximants[i].matrix();
                let p_n = &level.corner.projection;
                let diff = a.sub(b);
                let comm = a.mul(p_n).sub(&p_n.mul(a));
                let compress = p_n.mul(a).mul(p_n).sub(&b.mul(p_n));
                let min_inc = match next {
                    Some(nl) => Some(crate::eigen::hermitian_min_eigenvalue(
                        &nl.approximants[i].matrix().sub(b),
                    )?),
                    None => None,
                };
                // The tail estimate applies to the Schatten-n norm.
                let tail_bound = self.tail_bound(level.n);
                let tail_bound_ok = diff.schatten_norm(t)? <= tail_bound;
                for &p in p_list {
                    rows.push(BergDiagRow {
                        n: level.n,
                        op_index: i,
                        p,
                        approx_error: diff.schatten_norm(p)?,
                        corner_commutator: comm.schatten_norm(p)?,
                        compression_error: compress.schatten_norm(p)?,
                        tail_bound,
                        tail_bound_ok,
                        corner_dim: level.corner.dim,
                        dim_bound: self.dimension_bound(level.n),
                        min_increment_eig: min_inc,
                        max_pairwise_commutator: max_pairwise,
                    });
                }
            }
        }
        Ok(rows)
    }

    fn max_pairwise_commutator(&self, level: &BergLevel) -> f64 {
        let mut best = 0.0_f64;
        for i in 0..self.tuple_len {
            for j in (i + 1)..self.tuple_len {
                let a = level.approximants[i].matrix();
                let b = level.approximants[j].matrix();
                best = best.max(a.mul(b).sub(&b.mul(a)).op_norm());
            }
        }
        best
    }
}

/// One diagnostics row (per level, operator and Schatten index).
#[derive(Debug, Clone)]
pub struct BergDiagRow {
    pub n: usize,
    pub op_index: usize,
    pub p: f64,
    pub approx_error: f64,
    pub corner_commutator: f64,
    pub compression_error: f64,
    pub tail_bound: f64,
    /// Whether the Schatten-n error (n = tuple length) sits under the tail
    /// estimate.
    pub tail_bound_ok: bool,
    pub corner_dim: usize,
    pub dim_bound: usize,
    pub min_increment_eig: Option<f64>,
    pub max_pairwise_commutator: f64,
}

fn full_corner(dim: usize, n: usize) -> Result<CornerSpace> {
    let id = ComplexMatrix::identity(dim)?;
    let columns = (0..dim)
        .map(|j| {
            let mut e = vec![ZERO; dim];
            e[j] = ONE;
            e
        })
        .collect();
    Ok(CornerSpace {
        n,
        dim,
        columns,
        projection: id,
    })
}

/// The compressed approximant
/// B_i^(N) = sum_{k<=N} 2^-k E_k^(i) + sum_{k>N} 2^-k E_k^(i) (I - P_k),
/// with the tail cut when the ladder saturates (exact) or at k_cut
/// (residual 2^-k_cut). `ladder` holds the corner spaces P_1, P_2, ... and
/// `saturation` the first full-rank level when reached.
pub fn build_bn(
    bands: &BandTable,
    ladder: &[CornerSpace],
    saturation: Option<usize>,
    i: usize,
    n: usize,
    k_cut: u32,
    dim: usize,
) -> Result<ComplexMatrix> {
    let mut b = ComplexMatrix::zeros(dim)?;
    for k in 1..=n {
        b.add_scaled(
            &bands.band(i, k as u32)?,
            Complex64::new(0.5_f64.powi(k as i32), 0.0),
        );
    }
    let tail_end = match saturation {
        Some(ks) => ks.saturating_sub(1),
        None => k_cut as usize,
    };
    let id = ComplexMatrix::identity(dim)?;
    for k in (n + 1)..=tail_end {
        let p_k = ladder
            .get(k - 1)
            .map(|c| &c.projection)
            .ok_or_else(|| Error::numerical(format!("missing corner projection P_{k}")))?;
        let complement = id.sub(p_k);
        let term = bands.band(i, k as u32)?.mul(&complement);
        b.add_scaled(&term, Complex64::new(0.5_f64.powi(k as i32), 0.0));
    }
    Ok(b)
}

/// Defect of P_N B P_N = B P_N = sum_{k<=N} 2^-k E_k P_N.
fn corner_identity_defect(
    bands: &BandTable,
    b: &ComplexMatrix,
    p_n: &ComplexMatrix,
    i: usize,
    n: usize,
) -> Result<f64> {
    let bp = b.mul(p_n);
    let pbp = p_n.mul(&bp);
    let mut head = ComplexMatrix::zeros(b.dim())?;
    for k in 1..=n {
        head.add_scaled(
            &bands.band(i, k as u32)?,
            Complex64::new(0.5_f64.powi(k as i32), 0.0),
        );
    }
    let head_p = head.mul(p_n);
    Ok(pbp.sub(&bp).op_norm().max(bp.sub(&head_p).op_norm()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn herm(m: ComplexMatrix) -> HermitianOperator {
        HermitianOperator::certify_default(&m).unwrap()
    }

    fn diag_tuple(d1: &[f64], d2: &[f64]) -> CommutingTuple {
        CommutingTuple::new_default(vec![
            herm(ComplexMatrix::diag(d1).unwrap()),
            herm(ComplexMatrix::diag(d2).unwrap()),
        ])
        .unwrap()
    }

    #[test]
    fn rescale_examples() {
        // C = diag(-1, 1) -> A = diag(0, 1).
        let c = herm(ComplexMatrix::diag(&[-1.0, 1.0]).unwrap());
        let (a, data) = rescale_to_unit(&c).unwrap();
        assert!((data.norm - 1.0).abs() < 1e-10);
        assert!(a
            .matrix()
            .sub(&ComplexMatrix::diag(&[0.0, 1.0]).unwrap())
            .op_norm()
            < 1e-10);
        // C = I -> A = I.
        let id = herm(ComplexMatrix::identity(3).unwrap());
        let (a, _) = rescale_to_unit(&id).unwrap();
        assert!(a.matrix().sub(&ComplexMatrix::identity(3).unwrap()).op_norm() < 1e-10);
        // Round trip.
        let c = herm(
            ComplexMatrix::from_real_rows(&[&[0.4, 0.1], &[0.1, -0.9]]).unwrap(),
        );
        let (a, data) = rescale_to_unit(&c).unwrap();
        let back = unrescale_matrix(a.matrix(), &data).unwrap();
        assert!(back.sub(c.matrix()).op_norm() < 1e-10);
        let eigs = crate::eigen::hermitian_eigenvalues(a.matrix()).unwrap();
        assert!(eigs[0] >= -1e-12 && eigs[eigs.len() - 1] <= 1.0 + 1e-12);
    }

    #[test]
    fn zero_operator_is_degenerate() {
        let z = herm(ComplexMatrix::zeros(2).unwrap());
        let (a, data) = rescale_to_unit(&z).unwrap();
        assert!(data.degenerate);
        assert!(a
            .matrix()
            .sub(&ComplexMatrix::identity(2).unwrap().scale_re(0.5))
            .op_norm()
            < 1e-12);
        assert_eq!(unrescale_matrix(a.matrix(), &data).unwrap().op_norm(), 0.0);
    }

    #[test]
    fn corner_space_single_eigenvector_start() {
        // n = 1 tuple, A = diag(0.25, 0.75), standard basis, N = 1:
        // e1 is an eigenvector of the band projections, so L_1 = span{e1}.
        let a = herm(ComplexMatrix::diag(&[0.25, 0.75]).unwrap());
        let bands = BandTable::new(&[a]).unwrap();
        let basis = OrthonormalBasis::standard(2).unwrap();
        let cs = build_corner_space(&bands, &basis, 1).unwrap();
        assert_eq!(cs.dim, 1);
        assert!(cs.projection.get(0, 0).re > 0.999);
        assert!(cs.projection.get(1, 1).norm() < 1e-12);
        assert!(cs.dim <= corner_dimension_bound(1, 1, 2));
    }

    #[test]
    fn corner_space_saturates_at_ambient() {
        let t = diag_tuple(&[0.13, 0.62, 0.81], &[0.27, 0.55, 0.91]);
        let basis = OrthonormalBasis::standard(3).unwrap();
        let seq = BergSequence::build(&t, &basis, &[3, 4], BergOptions::default()).unwrap();
        // N >= D: the first D basis vectors already span.
        let last = seq.levels.last().unwrap();
        assert_eq!(last.corner.dim, 3);
        assert!(last
            .corner
            .projection
            .sub(&ComplexMatrix::identity(3).unwrap())
            .op_norm()
            < 1e-10);
    }

    #[test]
    fn dimension_bound_formula() {
        assert_eq!(corner_dimension_bound(1, 1, 100), 2);
        assert_eq!(corner_dimension_bound(2, 2, 100), 20);
        assert_eq!(corner_dimension_bound(2, 2, 10), 10);
    }

    #[test]
    fn approximant_equals_partial_sum_after_saturation() {
        let t = diag_tuple(&[0.1, 0.6, 0.9], &[0.3, 0.5, 0.7]);
        let basis = OrthonormalBasis::standard(3).unwrap();
        let seq = BergSequence::build(&t, &basis, &[6], BergOptions::default()).unwrap();
        let level = &seq.levels[0];
        assert!(level.saturated);
        for i in 0..2 {
            let s = crate::spectral::dyadic_partial_sum(seq.bands.decomposition(i), 6).unwrap();
            let diff = level.approximants[i].matrix().sub(&s).op_norm();
            assert!(diff < 1e-12, "operator {i}: {diff:e}");
            // After saturation ||A - B^(N)|| <= 2^-N.
            let err = seq.rescaled[i].matrix().sub(level.approximants[i].matrix());
            assert!(err.op_norm() <= 0.5f64.powi(6) + 1e-12);
        }
    }

    #[test]
    fn approximants_commute_and_are_contractions() {
        let t = diag_tuple(&[0.15, 0.35, 0.77, 0.92], &[0.22, 0.48, 0.66, 0.84]);
        let basis = OrthonormalBasis::standard(4).unwrap();
        let seq = BergSequence::build(&t, &basis, &[1, 2, 3], BergOptions::default()).unwrap();
        for level in &seq.levels {
            for i in 0..2 {
                let eigs =
                    crate::eigen::hermitian_eigenvalues(level.approximants[i].matrix()).unwrap();
                assert!(eigs[0] >= -1e-10 && eigs[eigs.len() - 1] <= 1.0 + 1e-10);
            }
        }
        // Monotone increments.
        let rows = seq.diagnostics(&[2.0]).unwrap();
        for row in &rows {
            if let Some(m) = row.min_increment_eig {
                assert!(m >= -1e-10, "increment min eig {m:e}");
            }
            assert!(row.max_pairwise_commutator <= 1e-10);
            assert!(row.approx_error <= row.tail_bound + 1e-12);
            assert!(row.tail_bound_ok);
            assert!(row.corner_dim <= row.dim_bound);
        }
        // The approximation error trends down in N.
        for i in 0..2 {
            let errs: Vec<f64> = rows
                .iter()
                .filter(|r| r.op_index == i)
                .map(|r| r.approx_error)
                .collect();
            for w in errs.windows(2) {
                assert!(w[1] <= w[0] + 1e-12, "error increased: {:?}", errs);
            }
        }
    }

    #[test]
    fn diagonal_operators_commute_with_corners() {
        // A_i diagonal in the standard basis: splits keep coordinate
        // vectors, so [A_i, P_N] = 0.
        let t = diag_tuple(&[0.1, 0.4, 0.8], &[0.2, 0.5, 0.6]);
        let basis = OrthonormalBasis::standard(3).unwrap();
        let seq = BergSequence::build(&t, &basis, &[1, 2], BergOptions::default()).unwrap();
        let rows = seq.diagnostics(&[2.0]).unwrap();
        for row in rows {
            assert!(row.corner_commutator < 1e-12);
        }
    }

    #[test]
    fn diagnostics_reject_small_p() {
        let t = diag_tuple(&[0.1, 0.9], &[0.3, 0.7]);
        let basis = OrthonormalBasis::standard(2).unwrap();
        let seq = BergSequence::build(&t, &basis, &[1], BergOptions::default()).unwrap();
        assert!(seq.diagnostics(&[1.0]).is_err());
    }

    #[test]
    fn nesting_holds() {
        let t = diag_tuple(&[0.11, 0.37, 0.54, 0.78, 0.93], &[0.21, 0.42, 0.58, 0.69, 0.88]);
        let basis = OrthonormalBasis::standard(5).unwrap();
        let seq = BergSequence::build(&t, &basis, &[1, 2, 3, 4], BergOptions::default()).unwrap();
        for d in seq.nesting_defects() {
            assert!(d <= 1e-10, "nesting defect {d:e}");
        }
    }
}
