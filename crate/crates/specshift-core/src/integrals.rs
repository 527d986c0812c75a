//! Operator-valued Riemann-Stieltjes integrals against atomic spectral
//! measures, the line-integral symbol between two operators, divided
//! difference kernels and the double-spectral-integral pairing.

use num_complex::Complex64;

use crate::eigen::{JointSpectralDecomposition, SpectralDecomposition};
use crate::error::{Error, Result};
use crate::field::ScalarField2D;
use crate::interval::Interval;
use crate::matrix::{trace_product, ComplexMatrix};

/// An operator-valued curve alpha -> A(alpha) with advertised Hoelder data
/// ||A(s) - A(t)|| <= C |s - t|^k.
pub struct OperatorCurve {
    eval: Box<dyn Fn(f64) -> Result<ComplexMatrix> + Send + Sync>,
    pub holder_constant: f64,
    pub holder_index: f64,
}

/// Result of spot-checking a curve's advertised Hoelder data on sampled
/// pairs. `index_admissible` is false when k <= 1/2, where the partition
/// sums are not guaranteed to converge; callers decide whether to warn or
/// reject.
#[derive(Debug, Clone)]
pub struct HolderCheck {
    pub max_ratio: f64,
    pub bound_ok: bool,
    pub index_admissible: bool,
}

impl OperatorCurve {
    pub fn new(
        eval: impl Fn(f64) -> Result<ComplexMatrix> + Send + Sync + 'static,
        holder_constant: f64,
        holder_index: f64,
    ) -> Self {
        OperatorCurve {
            eval: Box::new(eval),
            holder_constant,
            holder_index,
        }
    }

    pub fn eval(&self, alpha: f64) -> Result<ComplexMatrix> {
        (self.eval)(alpha)
    }

    /// Spot-checks the advertised bound on a deterministic grid of pairs.
    pub fn check_holder(&self, interval: &Interval, samples: usize) -> Result<HolderCheck> {
        let n = samples.max(2);
        let mut max_ratio = 0.0_f64;
        for i in 0..n {
            let s = interval.a() + interval.length() * (i as f64 + 0.21) / n as f64;
            for j in (i + 1)..n {
                let t = interval.a() + interval.length() * (j as f64 + 0.73) / n as f64;
                let gap = (s - t).abs();
                if gap == 0.0 {
                    continue;
                }
                let diff = self.eval(s)?.sub(&self.eval(t)?).op_norm();
                let bound = self.holder_constant * gap.powf(self.holder_index);
                if bound > 0.0 {
                    max_ratio = max_ratio.max(diff / bound);
                } else if diff > 0.0 {
                    max_ratio = f64::INFINITY;
                }
            }
        }
        Ok(HolderCheck {
            max_ratio,
            bound_ok: max_ratio <= 1.0 + 1e-6,
            index_admissible: self.holder_index > 0.5,
        })
    }
}

/// Where a partition cell evaluates its integrand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalRule {
    Left,
    Midpoint,
    Right,
}

/// A partition of an interval with one evaluation point per cell.
#[derive(Debug, Clone)]
pub struct Partition {
    breakpoints: Vec<f64>,
    eval_points: Vec<f64>,
}

impl Partition {
    pub fn new(breakpoints: Vec<f64>, eval_points: Vec<f64>) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::invalid("partition needs at least two breakpoints"));
        }
        for w in breakpoints.windows(2) {
            if !(w[0] < w[1]) {
                return Err(Error::invalid("breakpoints must strictly increase"));
            }
        }
        if eval_points.len() != breakpoints.len() - 1 {
            return Err(Error::invalid("one evaluation point per cell required"));
        }
        for (i, &xi) in eval_points.iter().enumerate() {
            if xi < breakpoints[i] || xi > breakpoints[i + 1] {
                return Err(Error::invalid("evaluation point outside its cell"));
            }
        }
        Ok(Partition {
            breakpoints,
            eval_points,
        })
    }

    pub fn uniform(interval: &Interval, cells: usize, rule: EvalRule) -> Result<Self> {
        if cells == 0 {
            return Err(Error::invalid("need at least one cell"));
        }
        let h = interval.length() / cells as f64;
        let breakpoints: Vec<f64> = (0..=cells)
            .map(|i| {
                if i == cells {
                    interval.b()
                } else {
                    interval.a() + h * i as f64
                }
            })
            .collect();
        let eval_points = breakpoints
            .windows(2)
            .map(|w| match rule {
                EvalRule::Left => w[0],
                EvalRule::Midpoint => 0.5 * (w[0] + w[1]),
                EvalRule::Right => w[1],
            })
            .collect();
        Partition::new(breakpoints, eval_points)
    }

    /// 2^levels equal cells (dyadic refinement of the interval).
    pub fn dyadic(interval: &Interval, levels: u32, rule: EvalRule) -> Result<Self> {
        Self::uniform(interval, 1usize << levels, rule)
    }

    pub fn mesh(&self) -> f64 {
        self.breakpoints
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0, f64::max)
    }

    pub fn cells(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.breakpoints
            .windows(2)
            .zip(&self.eval_points)
            .map(|(w, &xi)| (w[0], w[1], xi))
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }
}

/// Exact value of the Riemann-Stieltjes integral of A(alpha) against an
/// atomic spectral measure: sum of A(lambda_i) P_i.
pub fn rs_integral_exact(
    curve: &OperatorCurve,
    sd: &SpectralDecomposition,
) -> Result<ComplexMatrix> {
    let mut acc = ComplexMatrix::zeros(sd.dim())?;
    for atom in sd.atoms() {
        let a = curve.eval(atom.eigenvalue)?;
        if a.dim() != sd.dim() {
            return Err(Error::DimensionMismatch {
                left: a.dim(),
                right: sd.dim(),
            });
        }
        acc = acc.add(&a.mul(&atom.projection));
    }
    Ok(acc)
}

/// Partition approximation: sum of A(xi_i) E((t_i, t_{i+1}]).
///
/// Eigenvalues at or below the first breakpoint are not captured by the
/// half-open convention; partitions should start strictly below the
/// spectrum.
pub fn rs_integral_partition(
    curve: &OperatorCurve,
    sd: &SpectralDecomposition,
    partition: &Partition,
) -> Result<ComplexMatrix> {
    let mut acc = ComplexMatrix::zeros(sd.dim())?;
    for (lo, hi, xi) in partition.cells() {
        // E((lo, hi]) assembled atom by atom.
        let mut block: Option<ComplexMatrix> = None;
        for atom in sd.atoms() {
            if atom.eigenvalue > lo && atom.eigenvalue <= hi {
                match &mut block {
                    Some(b) => b.add_scaled(&atom.projection, crate::matrix::ONE),
                    None => block = Some(atom.projection.clone()),
                }
            }
        }
        if let Some(block) = block {
            let a = curve.eval(xi)?;
            acc = acc.add(&a.mul(&block));
        }
    }
    Ok(acc)
}

/// The line-integral symbol between two operators: the integral of
/// T(alpha) = integral from a to alpha of phi(x, C) dx against the measure
/// E_B - E_A, realized atomically for any matrix-valued alpha -> T(alpha).
pub fn line_integral_general<F>(
    from_sd: &SpectralDecomposition,
    to_sd: &SpectralDecomposition,
    mut t_of_alpha: F,
) -> Result<ComplexMatrix>
where
    F: FnMut(f64) -> Result<ComplexMatrix>,
{
    if from_sd.dim() != to_sd.dim() {
        return Err(Error::DimensionMismatch {
            left: from_sd.dim(),
            right: to_sd.dim(),
        });
    }
    let mut acc = ComplexMatrix::zeros(to_sd.dim())?;
    for atom in to_sd.atoms() {
        acc = acc.add(&t_of_alpha(atom.eigenvalue)?.mul(&atom.projection));
    }
    for atom in from_sd.atoms() {
        acc = acc.sub(&t_of_alpha(atom.eigenvalue)?.mul(&atom.projection));
    }
    Ok(acc)
}

/// The inner operator T(alpha) = integral from `anchor` to alpha of
/// phi(x, C) dx, evaluated through the spectral decomposition of C.
pub fn phi_line_operator(
    phi: &ScalarField2D,
    c_sd: &SpectralDecomposition,
    anchor: f64,
    alpha: f64,
) -> Result<ComplexMatrix> {
    let mut acc = ComplexMatrix::zeros(c_sd.dim())?;
    for atom in c_sd.atoms() {
        let w = phi.integral_x(atom.eigenvalue, anchor, alpha)?;
        acc.add_scaled(&atom.projection, w);
    }
    Ok(acc)
}

/// Same with the roles of the variables swapped: integral from `anchor` to
/// alpha of phi(C, y) dy.
pub fn phi_line_operator_y(
    phi: &ScalarField2D,
    c_sd: &SpectralDecomposition,
    anchor: f64,
    alpha: f64,
) -> Result<ComplexMatrix> {
    let mut acc = ComplexMatrix::zeros(c_sd.dim())?;
    for atom in c_sd.atoms() {
        let w = phi.integral_y(atom.eigenvalue, anchor, alpha)?;
        acc.add_scaled(&atom.projection, w);
    }
    Ok(acc)
}

/// The operator integral from A to B of phi(x, C) dx, with the inner
/// anchor taken from the x-domain of `phi`.
pub fn line_integral(
    a_sd: &SpectralDecomposition,
    b_sd: &SpectralDecomposition,
    phi: &ScalarField2D,
    c_sd: &SpectralDecomposition,
) -> Result<ComplexMatrix> {
    let anchor = phi.domain().x.a();
    line_integral_general(a_sd, b_sd, |alpha| {
        phi_line_operator(phi, c_sd, anchor, alpha)
    })
}

/// Iterated-mean divided difference of psi at (x1, x2) x (y1, y2):
/// the rectangle integral divided by (x1-x2)(y1-y2), with derivative-type
/// limits when arguments coincide within `coincidence_tol`.
pub fn divided_difference_kernel(
    psi: &ScalarField2D,
    x1: f64,
    x2: f64,
    y1: f64,
    y2: f64,
    coincidence_tol: f64,
) -> Result<Complex64> {
    let dx = x1 - x2;
    let dy = y1 - y2;
    let x_close = dx.abs() <= coincidence_tol;
    let y_close = dy.abs() <= coincidence_tol;
    match (x_close, y_close) {
        (false, false) => Ok(psi.integral_rect(x2, x1, y2, y1)? / (dx * dy)),
        (true, false) => Ok(psi.integral_y(x1, y2, y1)? / dy),
        (false, true) => Ok(psi.integral_x(y1, x2, x1)? / dx),
        (true, true) => psi.eval(x1, y1),
    }
}

/// Default coincidence threshold for spectra on `interval`.
pub fn default_coincidence_tol(interval: &Interval) -> f64 {
    crate::tol::COINCIDENCE_TOL_FACTOR * interval.length()
}

/// Double-spectral-integral pairing: the sum over atom pairs
/// ((x2, y1), F0) of `jsd0` and ((x1, y2), F) of `jsd1` of the divided
/// difference of psi times Tr(V1 F0 V2 F).
///
/// Outer projections (when not the identity) are expected to be folded into
/// `v1` / `v2` by the caller; the pairing itself is linear in both.
pub fn doi_pairing(
    v1: &ComplexMatrix,
    v2: &ComplexMatrix,
    jsd0: &JointSpectralDecomposition,
    jsd1: &JointSpectralDecomposition,
    psi: &ScalarField2D,
    coincidence_tol: f64,
) -> Result<Complex64> {
    let dim = v1.dim();
    for d in [v2.dim(), jsd0.dim(), jsd1.dim()] {
        if d != dim {
            return Err(Error::DimensionMismatch { left: dim, right: d });
        }
    }
    if jsd0.tuple_len() != 2 || jsd1.tuple_len() != 2 {
        return Err(Error::domain(
            "doi_pairing needs joint decompositions of pairs",
        ));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for atom0 in jsd0.atoms() {
        // Unperturbed atom carries (x2, y1).
        let (x2, y1) = (atom0.point[0], atom0.point[1]);
        let left = v1.mul(&atom0.projection).mul(v2);
        for atom1 in jsd1.atoms() {
            // Perturbed atom carries (x1, y2).
            let (x1, y2) = (atom1.point[0], atom1.point[1]);
            let kernel = divided_difference_kernel(psi, x1, x2, y1, y2, coincidence_tol)?;
            if kernel.norm() == 0.0 {
                continue;
            }
            acc += kernel * trace_product(&left, &atom1.projection);
        }
    }
    Ok(acc)
}
