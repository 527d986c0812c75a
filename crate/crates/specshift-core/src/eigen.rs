//! Hermitian eigendecomposition by cyclic Jacobi rotations, atom grouping,
//! and simultaneous diagonalization of commuting families by recursive block
//! compression.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hermitian::{CommutingTuple, HermitianOperator};
use crate::interval::Interval;
use crate::matrix::{vec_dot, ComplexMatrix, ONE, ZERO};
use crate::tol;

/// One spectral atom: an eigenvalue together with the orthogonal projection
/// onto the (possibly grouped) eigenspace.
#[derive(Debug, Clone)]
pub struct SpectralAtom {
    pub eigenvalue: f64,
    pub projection: ComplexMatrix,
    pub rank: usize,
}

/// Full spectral resolution of a Hermitian operator: atoms with strictly
/// increasing eigenvalues whose projections sum to the identity.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    atoms: Vec<SpectralAtom>,
    interval: Interval,
    dim: usize,
}

/// Joint atom of a commuting tuple: a point of the joint spectrum and the
/// projection onto the common eigenspace.
#[derive(Debug, Clone)]
pub struct JointAtom {
    pub point: Vec<f64>,
    pub projection: ComplexMatrix,
    pub rank: usize,
}

/// Joint spectral resolution of a commuting tuple.
#[derive(Debug, Clone)]
pub struct JointSpectralDecomposition {
    atoms: Vec<JointAtom>,
    interval: Interval,
    dim: usize,
}

/// Eigenvalues of a Hermitian matrix, ascending. No eigenvectors, no
/// grouping; used for norms and diagnostics.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let (vals, _) = jacobi(m, false)?;
    Ok(vals)
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn hermitian_min_eigenvalue(m: &ComplexMatrix) -> Result<f64> {
    let vals = hermitian_eigenvalues(m)?;
    Ok(vals[0])
}

/// Default eigenvalue grouping tolerance for spectra living on `interval`.
pub fn default_group_tol(interval: &Interval) -> f64 {
    tol::GROUP_TOL_FACTOR * interval.length()
}

/// Full eigendecomposition of a certified Hermitian operator.
///
/// Cyclic Jacobi sweeps run until the off-diagonal Frobenius norm drops
/// below 1e-13 times the Frobenius norm of the input (non-convergence after
/// 100 sweeps is an error). Eigenvalues closer than `group_tol` are merged
/// into a single atom whose projection is the sum of the rank-one
/// projectors.
pub fn eigh(h: &HermitianOperator, group_tol: f64) -> Result<SpectralDecomposition> {
    let (vals, vecs) = jacobi(h.matrix(), true)?;
    let vecs = vecs.expect("jacobi with vectors");
    let n = h.dim();

    // Greedy chain grouping on the sorted eigenvalues.
    let mut atoms: Vec<SpectralAtom> = Vec::new();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && vals[end] - vals[end - 1] <= group_tol {
            end += 1;
        }
        let mut projection = ComplexMatrix::zeros_unchecked(n);
        let mut sum = 0.0;
        for k in start..end {
            sum += vals[k];
            let col: Vec<Complex64> = (0..n).map(|r| vecs.get(r, k)).collect();
            for i in 0..n {
                for j in 0..n {
                    let v = projection.get(i, j) + col[i] * col[j].conj();
                    projection.set(i, j, v);
                }
            }
        }
        atoms.push(SpectralAtom {
            eigenvalue: sum / (end - start) as f64,
            projection,
            rank: end - start,
        });
        start = end;
    }

    let lo = atoms.first().map(|a| a.eigenvalue).unwrap_or(0.0);
    let hi = atoms.last().map(|a| a.eigenvalue).unwrap_or(0.0);
    let interval = Interval::containing(lo, hi);
    Ok(SpectralDecomposition {
        atoms,
        interval,
        dim: n,
    })
}

/// [`eigh`] with the default grouping tolerance derived from the spread of
/// the computed spectrum.
pub fn eigh_default(h: &HermitianOperator) -> Result<SpectralDecomposition> {
    let vals = hermitian_eigenvalues(h.matrix())?;
    let spread = (vals[vals.len() - 1] - vals[0]).max(1e-300);
    eigh(h, tol::GROUP_TOL_FACTOR * spread)
}

impl SpectralDecomposition {
    pub fn atoms(&self) -> &[SpectralAtom] {
        &self.atoms
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn interval(&self) -> &Interval {
        &self.interval
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.atoms[0].eigenvalue
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.atoms[self.atoms.len() - 1].eigenvalue
    }

    /// Replaces the bookkeeping interval; it must cover the spectrum.
    pub fn with_interval(mut self, interval: Interval) -> Result<Self> {
        if self.min_eigenvalue() < interval.a() || self.max_eigenvalue() > interval.b() {
            return Err(Error::domain(format!(
                "interval [{}, {}] does not cover spectrum [{}, {}]",
                interval.a(),
                interval.b(),
                self.min_eigenvalue(),
                self.max_eigenvalue()
            )));
        }
        self.interval = interval;
        Ok(self)
    }

    /// Builds a decomposition from externally supplied atoms (corner
    /// compressions use this). Invariants are the caller's responsibility;
    /// `validate` is available to check them.
    pub fn from_atoms(atoms: Vec<SpectralAtom>, interval: Interval, dim: usize) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::invalid("no atoms"));
        }
        for w in atoms.windows(2) {
            if w[1].eigenvalue <= w[0].eigenvalue {
                return Err(Error::invalid("atom eigenvalues must strictly increase"));
            }
        }
        Ok(SpectralDecomposition {
            atoms,
            interval,
            dim,
        })
    }

    /// Cumulative spectral projection E(lambda): the sum of atom projections
    /// with eigenvalue <= lambda (right-continuous convention).
    pub fn cumulative_projector(&self, lambda: f64) -> ComplexMatrix {
        let mut acc = ComplexMatrix::zeros_unchecked(self.dim);
        for atom in &self.atoms {
            if atom.eigenvalue <= lambda {
                acc.add_scaled(&atom.projection, ONE);
            }
        }
        acc
    }

    /// Scalar functional calculus: sum of f(lambda_i) P_i.
    pub fn apply_function<F: Fn(f64) -> Complex64>(&self, f: F) -> Result<ComplexMatrix> {
        let mut acc = ComplexMatrix::zeros_unchecked(self.dim);
        for atom in &self.atoms {
            let w = f(atom.eigenvalue);
            if !w.re.is_finite() || !w.im.is_finite() {
                return Err(Error::domain(format!(
                    "function not finite at eigenvalue {}",
                    atom.eigenvalue
                )));
            }
            acc.add_scaled(&atom.projection, w);
        }
        Ok(acc)
    }

    /// Sum of lambda_i P_i.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let mut acc = ComplexMatrix::zeros_unchecked(self.dim);
        for atom in &self.atoms {
            acc.add_scaled(&atom.projection, Complex64::new(atom.eigenvalue, 0.0));
        }
        acc
    }

    /// Checks the structural invariants: projections Hermitian and
    /// idempotent, summing to the identity, and reconstruction of `h` when
    /// given.
    pub fn validate(&self, h: Option<&ComplexMatrix>) -> Result<()> {
        let mut sum = ComplexMatrix::zeros_unchecked(self.dim);
        for atom in &self.atoms {
            let p = &atom.projection;
            let herm = p.sub(&p.adjoint()).op_norm();
            let idem = p.mul(p).sub(p).op_norm();
            if herm > tol::PROJECTION_TOL || idem > tol::PROJECTION_TOL {
                return Err(Error::numerical(format!(
                    "atom projection defects: hermitian {herm:.3e}, idempotent {idem:.3e}"
                )));
            }
            if !self.interval.contains(atom.eigenvalue) {
                return Err(Error::domain(format!(
                    "eigenvalue {} outside interval [{}, {}]",
                    atom.eigenvalue,
                    self.interval.a(),
                    self.interval.b()
                )));
            }
            sum.add_scaled(p, ONE);
        }
        let id = ComplexMatrix::identity(self.dim)?;
        let res = sum.sub(&id).op_norm();
        if res > tol::PROJECTION_TOL {
            return Err(Error::numerical(format!(
                "projections do not resolve the identity: defect {res:.3e}"
            )));
        }
        if let Some(h) = h {
            let scale = h.op_norm().max(1.0);
            let rec = self.reconstruct().sub(h).op_norm();
            if rec > tol::RECONSTRUCTION_TOL * scale {
                return Err(Error::numerical(format!(
                    "reconstruction defect {rec:.3e} exceeds {:.3e}",
                    tol::RECONSTRUCTION_TOL * scale
                )));
            }
        }
        Ok(())
    }
}

impl JointSpectralDecomposition {
    pub fn atoms(&self) -> &[JointAtom] {
        &self.atoms
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn interval(&self) -> &Interval {
        &self.interval
    }

    pub fn tuple_len(&self) -> usize {
        self.atoms.first().map(|a| a.point.len()).unwrap_or(0)
    }

    /// Sum over atoms of point[coord] * projection.
    pub fn reconstruct_coordinate(&self, coord: usize) -> ComplexMatrix {
        let mut acc = ComplexMatrix::zeros_unchecked(self.dim);
        for atom in &self.atoms {
            acc.add_scaled(&atom.projection, Complex64::new(atom.point[coord], 0.0));
        }
        acc
    }

    /// Pairwise orthogonality, resolution of identity, and coordinate-wise
    /// reconstruction against the source tuple.
    pub fn validate(&self, tuple: Option<&CommutingTuple>) -> Result<()> {
        let mut sum = ComplexMatrix::zeros_unchecked(self.dim);
        for atom in &self.atoms {
            sum.add_scaled(&atom.projection, ONE);
        }
        let res = sum.sub(&ComplexMatrix::identity(self.dim)?).op_norm();
        if res > tol::PROJECTION_TOL {
            return Err(Error::numerical(format!(
                "joint projections do not resolve the identity: defect {res:.3e}"
            )));
        }
        for i in 0..self.atoms.len() {
            for j in i + 1..self.atoms.len() {
                let cross = self.atoms[i]
                    .projection
                    .mul(&self.atoms[j].projection)
                    .op_norm();
                if cross > tol::PROJECTION_TOL {
                    return Err(Error::numerical(format!(
                        "joint projections not orthogonal: overlap {cross:.3e}"
                    )));
                }
            }
        }
        if let Some(t) = tuple {
            let scale = t
                .operators()
                .iter()
                .map(|o| o.op_norm())
                .fold(1.0, f64::max);
            for (c, op) in t.operators().iter().enumerate() {
                let rec = self.reconstruct_coordinate(c).sub(op.matrix()).op_norm();
                if rec > tol::RECONSTRUCTION_TOL * scale {
                    return Err(Error::numerical(format!(
                        "joint reconstruction defect {rec:.3e} on coordinate {c}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Simultaneous block diagonalization of a commuting tuple.
///
/// The first operator is diagonalized; inside every eigenblock the next
/// operator is compressed and diagonalized recursively. The result is a
/// family of joint atoms ((lambda_1, ..., lambda_n), P). Deterministic, with
/// no genericity assumption on the tuple.
pub fn joint_eigh(tuple: &CommutingTuple, group_tol: f64) -> Result<JointSpectralDecomposition> {
    let dim = tuple.dim();
    let ops: Vec<&ComplexMatrix> = tuple.operators().iter().map(|o| o.matrix()).collect();
    let scale = ops.iter().map(|m| m.op_norm()).fold(1.0, f64::max);

    // Basis of the current invariant subspace, as columns.
    let full: Vec<Vec<Complex64>> = (0..dim)
        .map(|j| {
            let mut e = vec![ZERO; dim];
            e[j] = ONE;
            e
        })
        .collect();

    let mut atoms = Vec::new();
    split_block(&ops, full, &mut Vec::new(), group_tol, scale, &mut atoms)?;

    // Lexicographic order on the joint points.
    atoms.sort_by(|a, b| {
        a.point
            .partial_cmp(&b.point)
            .unwrap_or(std::cmp::Ordering::Equal)
    });

    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for a in &atoms {
        for &x in &a.point {
            lo = lo.min(x);
            hi = hi.max(x);
        }
    }
    Ok(JointSpectralDecomposition {
        atoms,
        interval: Interval::containing(lo, hi),
        dim,
    })
}

fn split_block(
    ops: &[&ComplexMatrix],
    basis: Vec<Vec<Complex64>>,
    point: &mut Vec<f64>,
    group_tol: f64,
    scale: f64,
    out: &mut Vec<JointAtom>,
) -> Result<()> {
    let depth = point.len();
    let dim = basis[0].len();
    if depth == ops.len() {
        // Leaf: projection onto span(basis).
        let mut projection = ComplexMatrix::zeros_unchecked(dim);
        for col in &basis {
            for i in 0..dim {
                for j in 0..dim {
                    let v = projection.get(i, j) + col[i] * col[j].conj();
                    projection.set(i, j, v);
                }
            }
        }
        out.push(JointAtom {
            point: point.clone(),
            projection,
            rank: basis.len(),
        });
        return Ok(());
    }

    let op = ops[depth];
    let m = basis.len();

    // Compress the current operator to the block: C = W* A W.
    let images: Vec<Vec<Complex64>> = basis.iter().map(|col| op.matvec(col)).collect();
    let mut compressed = ComplexMatrix::zeros_unchecked(m);
    for (j, img) in images.iter().enumerate() {
        for (i, col) in basis.iter().enumerate() {
            compressed.set(i, j, vec_dot(col, img));
        }
    }
    // Leakage out of the block signals a broken invariant subspace.
    for (j, img) in images.iter().enumerate() {
        let mut inside = vec![ZERO; dim];
        for (i, col) in basis.iter().enumerate() {
            let c = compressed.get(i, j);
            for r in 0..dim {
                inside[r] += c * col[r];
            }
        }
        let leak: f64 = (0..dim)
            .map(|r| (img[r] - inside[r]).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if leak > 1e-8 * scale.max(1.0) {
            return Err(Error::numerical(format!(
                "block not invariant under operator {depth}: leakage {leak:.3e}"
            )));
        }
    }

    let herm_defect = compressed.sub(&compressed.adjoint()).op_norm();
    if herm_defect > 1e-8 * scale.max(1.0) {
        return Err(Error::numerical(format!(
            "block compression not Hermitian: defect {herm_defect:.3e}"
        )));
    }
    let compressed = compressed.hermitian_part();
    let (vals, vecs) = jacobi(&compressed, true)?;
    let vecs = vecs.expect("jacobi with vectors");

    let mut start = 0;
    while start < m {
        let mut end = start + 1;
        while end < m && vals[end] - vals[end - 1] <= group_tol {
            end += 1;
        }
        // Lift the eigencolumns back into the ambient space.
        let mut sub_basis = Vec::with_capacity(end - start);
        let mut sum = 0.0;
        for k in start..end {
            sum += vals[k];
            let mut col = vec![ZERO; dim];
            for (i, b) in basis.iter().enumerate() {
                let c = vecs.get(i, k);
                for r in 0..dim {
                    col[r] += c * b[r];
                }
            }
            sub_basis.push(col);
        }
        point.push(sum / (end - start) as f64);
        split_block(ops, sub_basis, point, group_tol, scale, out)?;
        point.pop();
        start = end;
    }
    Ok(())
}

/// Ascending eigenvalues with the unitary of eigenvectors as columns.
pub(crate) fn jacobi_with_vectors(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let (vals, vecs) = jacobi(m, true)?;
    Ok((vals, vecs.expect("jacobi with vectors")))
}

/// Cyclic Jacobi for complex Hermitian matrices. Returns ascending
/// eigenvalues and, when requested, the unitary of eigenvectors (columns,
/// matching the eigenvalue order).
fn jacobi(m: &ComplexMatrix, want_vectors: bool) -> Result<(Vec<f64>, Option<ComplexMatrix>)> {
    let n = m.dim();
    let mut a = m.hermitian_part();
    let mut v = if want_vectors {
        Some(ComplexMatrix::identity(n)?)
    } else {
        None
    };

    let fro = a.frobenius_norm();
    let target = tol::JACOBI_OFF_FACTOR * fro;
    if fro > 0.0 && n > 1 {
        let mut converged = false;
        for _sweep in 0..tol::JACOBI_MAX_SWEEPS {
            if off_norm(&a) <= target {
                converged = true;
                break;
            }
            for p in 0..n - 1 {
                for q in p + 1..n {
                    rotate(&mut a, v.as_mut(), p, q);
                }
            }
        }
        if !converged && off_norm(&a) > target {
            return Err(Error::numerical(format!(
                "Jacobi sweeps did not converge: off-diagonal {:.3e} > {:.3e}",
                off_norm(&a),
                target
            )));
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap());
    let vals: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let vecs = v.map(|v| {
        let mut out = ComplexMatrix::zeros_unchecked(n);
        for (newcol, &oldcol) in order.iter().enumerate() {
            for r in 0..n {
                out.set(r, newcol, v.get(r, oldcol));
            }
        }
        out
    });
    Ok((vals, vecs))
}

fn off_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut acc = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            acc += a.get(i, j).norm_sqr();
        }
    }
    (2.0 * acc).sqrt()
}

/// One complex Jacobi rotation annihilating A[p][q].
///
/// The 2x2 pivot [[alpha, beta], [conj(beta), gamma]] is reduced to real
/// symmetric form by the phase of beta and then rotated by the classical
/// tangent formula; the combined unitary updates rows/columns p, q of A and
/// the accumulated eigenvector matrix.
fn rotate(a: &mut ComplexMatrix, v: Option<&mut ComplexMatrix>, p: usize, q: usize) {
    let beta = a.get(p, q);
    let absb = beta.norm();
    if absb == 0.0 {
        return;
    }
    let alpha = a.get(p, p).re;
    let gamma = a.get(q, q).re;
    let phase = beta / absb; // e^{i phi}
    let tau = (gamma - alpha) / (2.0 * absb);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let n = a.dim();
    let cp = Complex64::new(c, 0.0);
    let sp = Complex64::new(s, 0.0);
    let phase_conj = phase.conj();

    // Columns: B = A U with U[p][p]=c, U[p][q]=s, U[q][p]=-s e^{-i phi},
    // U[q][q]=c e^{-i phi}.
    for r in 0..n {
        let arp = a.get(r, p);
        let arq = a.get(r, q);
        a.set(r, p, cp * arp - sp * phase_conj * arq);
        a.set(r, q, sp * arp + cp * phase_conj * arq);
    }
    // Rows: C = U* B.
    for r in 0..n {
        let apr = a.get(p, r);
        let aqr = a.get(q, r);
        a.set(p, r, cp * apr - sp * phase * aqr);
        a.set(q, r, sp * apr + cp * phase * aqr);
    }
    // Clean the pivot: the new off-diagonal entry is zero by construction
    // and the diagonal is real.
    a.set(p, q, ZERO);
    a.set(q, p, ZERO);
    let app = a.get(p, p).re;
    let aqq = a.get(q, q).re;
    a.set(p, p, Complex64::new(app, 0.0));
    a.set(q, q, Complex64::new(aqq, 0.0));

    if let Some(v) = v {
        for r in 0..n {
            let vrp = v.get(r, p);
            let vrq = v.get(r, q);
            v.set(r, p, cp * vrp - sp * phase_conj * vrq);
            v.set(r, q, sp * vrp + cp * phase_conj * vrq);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn herm(m: ComplexMatrix) -> HermitianOperator {
        HermitianOperator::certify_default(&m).unwrap()
    }

    #[test]
    fn pauli_x_spectrum() {
        let h = herm(ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap());
        let sd = eigh(&h, 1e-9).unwrap();
        let vals: Vec<f64> = sd.atoms().iter().map(|a| a.eigenvalue).collect();
        assert_eq!(vals.len(), 2);
        assert!((vals[0] + 1.0).abs() < 1e-12);
        assert!((vals[1] - 1.0).abs() < 1e-12);
        sd.validate(Some(h.matrix())).unwrap();
    }

    #[test]
    fn grouping_merges_degenerate_eigenvalues() {
        let h = herm(ComplexMatrix::diag(&[2.0, 2.0, 5.0]).unwrap());
        let sd = eigh(&h, 1e-9).unwrap();
        assert_eq!(sd.atoms().len(), 2);
        assert_eq!(sd.atoms()[0].rank, 2);
        assert!((sd.atoms()[0].eigenvalue - 2.0).abs() < 1e-13);
        assert_eq!(sd.atoms()[1].rank, 1);
        assert!((sd.atoms()[1].eigenvalue - 5.0).abs() < 1e-13);
    }

    #[test]
    fn reconstruction_of_dense_hermitian() {
        let i = Complex64::new(0.0, 1.0);
        let m = ComplexMatrix::from_rows(&[
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.3, 0.0) + i * 0.2],
            vec![Complex64::new(0.3, 0.0) - i * 0.2, Complex64::new(-0.5, 0.0)],
        ])
        .unwrap();
        let h = herm(m.clone());
        let sd = eigh_default(&h).unwrap();
        let rec = sd.reconstruct().sub(&m).op_norm();
        assert!(rec <= 1e-12 * m.op_norm().max(1.0), "rec = {rec:e}");
    }

    #[test]
    fn dim_one_accepted() {
        let h = herm(ComplexMatrix::diag(&[0.75]).unwrap());
        let sd = eigh(&h, 1e-9).unwrap();
        assert_eq!(sd.atoms().len(), 1);
        assert!((sd.atoms()[0].eigenvalue - 0.75).abs() < 1e-15);
    }

    #[test]
    fn joint_of_diagonal_pair() {
        let t = CommutingTuple::new_default(vec![
            herm(ComplexMatrix::diag(&[1.0, 2.0]).unwrap()),
            herm(ComplexMatrix::diag(&[3.0, 4.0]).unwrap()),
        ])
        .unwrap();
        let jsd = joint_eigh(&t, 1e-9).unwrap();
        assert_eq!(jsd.atoms().len(), 2);
        assert_eq!(jsd.atoms()[0].point, vec![1.0, 3.0]);
        assert_eq!(jsd.atoms()[1].point, vec![2.0, 4.0]);
        // Projections are the coordinate rank-one projectors.
        assert!((jsd.atoms()[0].projection.get(0, 0) - ONE).norm() < 1e-12);
        assert!(jsd.atoms()[0].projection.get(1, 1).norm() < 1e-12);
        jsd.validate(Some(&t)).unwrap();
    }

    #[test]
    fn joint_of_operator_and_its_square() {
        let m = ComplexMatrix::from_real_rows(&[
            &[0.3, 0.1, 0.0],
            &[0.1, 0.7, 0.2],
            &[0.0, 0.2, 0.9],
        ])
        .unwrap();
        let h = herm(m.clone());
        let h2 = herm(m.mul(&m));
        let t = CommutingTuple::new_default(vec![h.clone(), h2]).unwrap();
        let jsd = joint_eigh(&t, 1e-9).unwrap();
        // Joint points must be (lambda, lambda^2) for eigenvalues of h.
        let sd = eigh_default(&h).unwrap();
        assert_eq!(jsd.atoms().len(), sd.atoms().len());
        for atom in jsd.atoms() {
            let l = atom.point[0];
            assert!((atom.point[1] - l * l).abs() < 1e-9, "point {:?}", atom.point);
        }
        jsd.validate(Some(&t)).unwrap();
    }
}
