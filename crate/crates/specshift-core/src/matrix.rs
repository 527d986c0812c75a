//! Dense complex square matrices with the handful of operations the spectral
//! machinery needs: arithmetic, adjoints, traces, Frobenius and spectral
//! norms, Hilbert-Schmidt inner products and Schatten norms.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex square matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

impl ComplexMatrix {
    /// Builds a matrix from row-major entries. Rejects dim 0, a length
    /// mismatch and non-finite entries.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if entries.len() != dim * dim {
            return Err(Error::invalid(format!(
                "expected {} entries for dim {}, got {}",
                dim * dim,
                dim,
                entries.len()
            )));
        }
        let m = ComplexMatrix { dim, entries };
        m.check_finite()?;
        Ok(m)
    }

    pub(crate) fn zeros_unchecked(dim: usize) -> Self {
        ComplexMatrix {
            dim,
            entries: vec![ZERO; dim * dim],
        }
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        Ok(Self::zeros_unchecked(dim))
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m.set(i, i, ONE);
        }
        Ok(m)
    }

    /// Diagonal matrix from real entries.
    pub fn diag(values: &[f64]) -> Result<Self> {
        let mut m = Self::zeros(values.len())?;
        for (i, &v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::non_finite("diagonal entry"));
            }
            m.set(i, i, Complex64::new(v, 0.0));
        }
        Ok(m)
    }

    /// Convenience constructor from real row slices (tests mostly).
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::invalid("ragged rows"));
            }
            entries.extend(row.iter().map(|&v| Complex64::new(v, 0.0)));
        }
        Self::new(dim, entries)
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::invalid("ragged rows"));
            }
            entries.extend_from_slice(row);
        }
        Self::new(dim, entries)
    }

    /// Rank-one projector v v* / ||v||^2 is NOT built here; this is the plain
    /// outer product v w*.
    pub fn outer(v: &[Complex64], w: &[Complex64]) -> Result<Self> {
        if v.len() != w.len() {
            return Err(Error::DimensionMismatch {
                left: v.len(),
                right: w.len(),
            });
        }
        let dim = v.len();
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            for j in 0..dim {
                m.set(i, j, v[i] * w[j].conj());
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.entries[i * self.dim + j] = v;
    }

    #[inline]
    pub(crate) fn row(&self, i: usize) -> &[Complex64] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    pub fn check_finite(&self) -> Result<()> {
        for e in &self.entries {
            if !e.re.is_finite() || !e.im.is_finite() {
                return Err(Error::non_finite("matrix entry"));
            }
        }
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        self.check_finite().is_ok()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros_unchecked(n);
        for i in 0..n {
            for j in 0..n {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    /// Hermitian part (M + M*)/2.
    pub fn hermitian_part(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros_unchecked(n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, (self.get(i, j) + self.get(j, i).conj()) * 0.5);
            }
        }
        out
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        ComplexMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|e| e * factor).collect(),
        }
    }

    pub fn scale_re(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch in add");
        ComplexMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch in sub");
        ComplexMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// In-place `self += factor * other`.
    pub fn add_scaled(&mut self, other: &Self, factor: Complex64) {
        assert_eq!(self.dim, other.dim, "dimension mismatch in add_scaled");
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            *a += factor * b;
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch in mul");
        let n = self.dim;
        let mut out = Self::zeros_unchecked(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == ZERO {
                    continue;
                }
                let row_b = other.row(k);
                let row_o = &mut out.entries[i * n..(i + 1) * n];
                for j in 0..n {
                    row_o[j] += a * row_b[j];
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.dim, v.len(), "dimension mismatch in matvec");
        let n = self.dim;
        let mut out = vec![ZERO; n];
        for i in 0..n {
            let row = self.row(i);
            let mut acc = ZERO;
            for j in 0..n {
                acc += row[j] * v[j];
            }
            out[i] = acc;
        }
        out
    }

    /// Adjoint-vector product M* v without forming M*.
    pub fn adjoint_matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.dim, v.len(), "dimension mismatch in adjoint_matvec");
        let n = self.dim;
        let mut out = vec![ZERO; n];
        for i in 0..n {
            let row = self.row(i);
            let vi = v[i];
            for j in 0..n {
                out[j] += row[j].conj() * vi;
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Frobenius norm; coincides with the Schatten-2 norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries.iter().map(|e| e.norm()).fold(0.0, f64::max)
    }

    /// Largest singular value, computed by power iteration on M* M.
    ///
    /// Deterministic (fixed start vectors seeded in the row space), converges
    /// to well below 1e-12 relative for the symmetric problems this crate
    /// produces; the estimate never exceeds the true norm by more than
    /// rounding.
    pub fn op_norm(&self) -> f64 {
        let n = self.dim;
        let fro = self.frobenius_norm();
        if fro == 0.0 {
            return 0.0;
        }
        let mut best = max_column_norm(self);
        for start in 0..2 {
            // Seed in the row space: v = M* u for a generic u.
            let u: Vec<Complex64> = (0..n)
                .map(|j| {
                    let t = 0.7548776662466927 * (j as f64 + 1.0) + 0.31 * start as f64;
                    Complex64::new((2.0 * t).cos() + 0.5, (3.0 * t).sin())
                })
                .collect();
            let mut v = self.adjoint_matvec(&u);
            let vn = vec_norm(&v);
            if vn < fro * 1e-300 {
                continue;
            }
            vec_scale(&mut v, 1.0 / vn);
            let mut sigma = 0.0_f64;
            for _ in 0..120 {
                let w = self.matvec(&v);
                let new_sigma = vec_norm(&w);
                if new_sigma == 0.0 {
                    break;
                }
                let mut next = self.adjoint_matvec(&w);
                let nn = vec_norm(&next);
                if nn == 0.0 {
                    break;
                }
                vec_scale(&mut next, 1.0 / nn);
                v = next;
                if (new_sigma - sigma).abs() <= 1e-15 * new_sigma {
                    sigma = new_sigma;
                    break;
                }
                sigma = new_sigma;
            }
            best = best.max(sigma);
        }
        best
    }

    /// Schatten-p norm (sum of p-th powers of singular values, p-th root).
    ///
    /// `p` must satisfy p >= 1; `f64::INFINITY` gives the operator norm.
    /// p = 2 short-circuits to the Frobenius norm.
    pub fn schatten_norm(&self, p: f64) -> Result<f64> {
        if !(p >= 1.0) {
            return Err(Error::domain(format!("Schatten index p = {p} < 1")));
        }
        if p == 2.0 {
            return Ok(self.frobenius_norm());
        }
        if p.is_infinite() {
            return Ok(self.op_norm());
        }
        let sigmas = self.singular_values()?;
        Ok(sigmas
            .iter()
            .map(|s| s.powf(p))
            .sum::<f64>()
            .powf(1.0 / p))
    }

    /// All singular values, descending, via the eigenvalues of M* M.
    pub fn singular_values(&self) -> Result<Vec<f64>> {
        let gram = self.adjoint().mul(self);
        let mut eigs = crate::eigen::hermitian_eigenvalues(&gram)?;
        eigs.reverse();
        Ok(eigs.iter().map(|&l| l.max(0.0).sqrt()).collect())
    }
}

/// Hilbert-Schmidt inner product Tr(A* B), conjugate-linear in the first
/// argument (the convention used throughout this crate).
pub fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Complex64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let mut acc = ZERO;
    for (x, y) in a.entries.iter().zip(&b.entries) {
        acc += x.conj() * y;
    }
    Ok(acc)
}

/// Tr(A B) without forming the product.
pub fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    assert_eq!(a.dim(), b.dim(), "dimension mismatch in trace_product");
    let n = a.dim();
    let mut acc = ZERO;
    for i in 0..n {
        let row_a = a.row(i);
        for j in 0..n {
            acc += row_a[j] * b.get(j, i);
        }
    }
    acc
}

pub(crate) fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|e| e.norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn vec_scale(v: &mut [Complex64], s: f64) {
    for e in v.iter_mut() {
        *e *= s;
    }
}

pub(crate) fn vec_dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn max_column_norm(m: &ComplexMatrix) -> f64 {
    let n = m.dim();
    let mut best = 0.0_f64;
    for j in 0..n {
        let mut acc = 0.0;
        for i in 0..n {
            acc += m.get(i, j).norm_sqr();
        }
        best = best.max(acc.sqrt());
    }
    best
}
