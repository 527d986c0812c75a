//! The two-variable spectral shift field and the four evaluation paths of
//! the Stokes-like trace expression for a pair of commuting Hermitian pairs:
//!
//!   * closed-form polynomial sums,
//!   * the spectral line-integral form (four-term and two-term variants),
//!   * the integral of psi against the shift field xi,
//!   * the divided-difference double-spectral-integral pairing,
//!
//! plus the corner-space reduction experiment that rebuilds the identity
//! from compressed operators level by level.

use num_complex::Complex64;

use crate::berg::{BergLevel, BergOptions, BergSequence, OrthonormalBasis};
use crate::eigen::{
    default_group_tol, eigh, joint_eigh, SpectralAtom, SpectralDecomposition,
};
use crate::error::{Error, Result};
use crate::field::{Poly2, ScalarField2D};
use crate::hermitian::CommutingTuple;
use crate::integrals::{
    default_coincidence_tol, doi_pairing, line_integral_general, phi_line_operator,
    phi_line_operator_y,
};
use crate::interval::Interval;
use crate::matrix::{trace_product, vec_dot, ComplexMatrix, ONE, ZERO};
use crate::tol;

/// Two commuting Hermitian pairs with Hilbert-Schmidt differences, optional
/// sandwich projections and a covering interval. The four spectral
/// decompositions are computed at construction.
#[derive(Debug)]
pub struct PerturbedSystem {
    tuple0: CommutingTuple,
    tuple1: CommutingTuple,
    p: ComplexMatrix,
    q: ComplexMatrix,
    v: [ComplexMatrix; 2],
    interval: Interval,
    sd1: SpectralDecomposition,
    sd2: SpectralDecomposition,
    sd1_0: SpectralDecomposition,
    sd2_0: SpectralDecomposition,
    group_tol: f64,
}

impl PerturbedSystem {
    /// `tuple0` is the unperturbed pair (H1_0, H2_0), `tuple1` the perturbed
    /// pair (H1, H2); both must be pairs of the same dimension with spectra
    /// inside `interval`.
    pub fn new(tuple0: CommutingTuple, tuple1: CommutingTuple, interval: Interval) -> Result<Self> {
        if tuple0.len() != 2 || tuple1.len() != 2 {
            return Err(Error::invalid("perturbed systems are built from pairs"));
        }
        if tuple0.dim() != tuple1.dim() {
            return Err(Error::DimensionMismatch {
                left: tuple0.dim(),
                right: tuple1.dim(),
            });
        }
        let dim = tuple0.dim();
        let group_tol = default_group_tol(&interval);
        let sd = |t: &CommutingTuple, i: usize| -> Result<SpectralDecomposition> {
            let d = eigh(t.operator(i), group_tol)?;
            if d.min_eigenvalue() < interval.a() || d.max_eigenvalue() > interval.b() {
                return Err(Error::domain(format!(
                    "spectrum [{}, {}] escapes interval [{}, {}]",
                    d.min_eigenvalue(),
                    d.max_eigenvalue(),
                    interval.a(),
                    interval.b()
                )));
            }
            d.with_interval(interval)
        };
        let sd1_0 = sd(&tuple0, 0)?;
        let sd2_0 = sd(&tuple0, 1)?;
        let sd1 = sd(&tuple1, 0)?;
        let sd2 = sd(&tuple1, 1)?;
        let v1 = tuple1.operator(0).matrix().sub(tuple0.operator(0).matrix());
        let v2 = tuple1.operator(1).matrix().sub(tuple0.operator(1).matrix());
        let id = ComplexMatrix::identity(dim)?;
        Ok(PerturbedSystem {
            tuple0,
            tuple1,
            p: id.clone(),
            q: id,
            v: [v1, v2],
            interval,
            sd1,
            sd2,
            sd1_0,
            sd2_0,
            group_tol,
        })
    }

    /// Installs sandwich projections (defaults are the identity). Both must
    /// be Hermitian idempotents.
    pub fn with_projections(mut self, p: ComplexMatrix, q: ComplexMatrix) -> Result<Self> {
        for (name, m) in [("P", &p), ("Q", &q)] {
            if m.dim() != self.dim() {
                return Err(Error::DimensionMismatch {
                    left: m.dim(),
                    right: self.dim(),
                });
            }
            let herm = m.sub(&m.adjoint()).op_norm();
            let idem = m.mul(m).sub(m).op_norm();
            if herm > tol::PROJECTION_TOL || idem > tol::PROJECTION_TOL {
                return Err(Error::invalid(format!(
                    "{name} is not a projection: hermitian defect {herm:.3e}, idempotent defect {idem:.3e}"
                )));
            }
        }
        self.p = p;
        self.q = q;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.tuple0.dim()
    }

    pub fn interval(&self) -> &Interval {
        &self.interval
    }

    pub fn tuple0(&self) -> &CommutingTuple {
        &self.tuple0
    }

    pub fn tuple1(&self) -> &CommutingTuple {
        &self.tuple1
    }

    pub fn perturbation(&self, j: usize) -> &ComplexMatrix {
        &self.v[j]
    }

    pub fn sandwich_p(&self) -> &ComplexMatrix {
        &self.p
    }

    pub fn sandwich_q(&self) -> &ComplexMatrix {
        &self.q
    }

    pub fn group_tol(&self) -> f64 {
        self.group_tol
    }
}

/// Piecewise-constant field on the rectangle grid induced by eigenvalue
/// breakpoints; also the density of the induced measure. Cell values are
/// complex: real whenever the sandwich projections reduce the tuples (in
/// particular for the identity), complex in general for corner sandwiches,
/// matching the complex measure they generate.
#[derive(Debug, Clone)]
pub struct SpectralShiftField {
    x_breaks: Vec<f64>,
    y_breaks: Vec<f64>,
    /// Row-major by x-cell: values[ix * (y_breaks.len()-1) + iy].
    values: Vec<Complex64>,
}

impl SpectralShiftField {
    pub fn x_breakpoints(&self) -> &[f64] {
        &self.x_breaks
    }

    pub fn y_breakpoints(&self) -> &[f64] {
        &self.y_breaks
    }

    pub fn cell_value(&self, ix: usize, iy: usize) -> Complex64 {
        self.values[ix * (self.y_breaks.len() - 1) + iy]
    }

    /// Value at a point; zero outside the grid.
    pub fn value_at(&self, x: f64, y: f64) -> Complex64 {
        let locate = |breaks: &[f64], t: f64| -> Option<usize> {
            if t < breaks[0] || t >= breaks[breaks.len() - 1] {
                return None;
            }
            let mut idx = match breaks.binary_search_by(|b| b.partial_cmp(&t).unwrap()) {
                Ok(i) => i,
                Err(i) => i - 1,
            };
            if idx >= breaks.len() - 1 {
                idx = breaks.len() - 2;
            }
            Some(idx)
        };
        match (locate(&self.x_breaks, x), locate(&self.y_breaks, y)) {
            (Some(ix), Some(iy)) => self.cell_value(ix, iy),
            _ => ZERO,
        }
    }

    pub fn cells(&self) -> impl Iterator<Item = (f64, f64, f64, f64, Complex64)> + '_ {
        let ny = self.y_breaks.len() - 1;
        (0..self.values.len()).map(move |flat| {
            let ix = flat / ny;
            let iy = flat % ny;
            (
                self.x_breaks[ix],
                self.x_breaks[ix + 1],
                self.y_breaks[iy],
                self.y_breaks[iy + 1],
                self.values[flat],
            )
        })
    }

    /// Closed-form integral of psi against the field.
    pub fn integrate_against(&self, psi: &ScalarField2D) -> Result<Complex64> {
        let mut acc = ZERO;
        for (xl, xr, yl, yr, v) in self.cells() {
            if v == ZERO {
                continue;
            }
            acc += psi.integral_rect(xl, xr, yl, yr)? * v;
        }
        Ok(acc)
    }

    /// Integral of |density| over the rectangle.
    pub fn total_variation(&self) -> f64 {
        self.cells()
            .map(|(xl, xr, yl, yr, v)| v.norm() * (xr - xl) * (yr - yl))
            .sum()
    }

    pub fn sup_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_imag(&self) -> f64 {
        self.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }

    /// Asserts the field real within `imag_tol` and discards the imaginary
    /// parts. Only identity-like sandwich projections guarantee a real
    /// field; with genuine corner sandwiches the field (and its measure)
    /// stays complex.
    pub fn into_real_checked(mut self, imag_tol: f64) -> Result<Self> {
        let worst = self.max_imag();
        if worst > imag_tol {
            return Err(Error::numerical(format!(
                "xi has imaginary mass {worst:.3e}; Hermiticity broken upstream"
            )));
        }
        for v in &mut self.values {
            v.im = 0.0;
        }
        Ok(self)
    }
}

/// The field of the trace expression
/// xi(x, y) = Tr{ Q [E_x1(x) - E_x0(x)] P [E_y1(y) - E_y0(y)] Q },
/// assembled from four spectral decompositions. `outer` plays Q, `middle`
/// plays P. Cell values are exact (event prefix sums of the pairwise atom
/// traces; xi is constant on the open cells, so this equals the midpoint
/// evaluation).
pub fn xi_field_parts(
    x_new: &SpectralDecomposition,
    x_old: &SpectralDecomposition,
    y_new: &SpectralDecomposition,
    y_old: &SpectralDecomposition,
    middle: &ComplexMatrix,
    outer: &ComplexMatrix,
    interval: &Interval,
) -> Result<SpectralShiftField> {
    let mut x_events: Vec<(f64, f64, &ComplexMatrix)> = x_new
        .atoms()
        .iter()
        .map(|a| (a.eigenvalue, 1.0, &a.projection))
        .chain(x_old.atoms().iter().map(|a| (a.eigenvalue, -1.0, &a.projection)))
        .collect();
    x_events.sort_by(|u, v| u.0.partial_cmp(&v.0).unwrap());
    let mut y_events: Vec<(f64, f64, &ComplexMatrix)> = y_new
        .atoms()
        .iter()
        .map(|a| (a.eigenvalue, 1.0, &a.projection))
        .chain(y_old.atoms().iter().map(|a| (a.eigenvalue, -1.0, &a.projection)))
        .collect();
    y_events.sort_by(|u, v| u.0.partial_cmp(&v.0).unwrap());

    // Pairwise event traces: G[e][f] = s_e s_f Tr(Q P_e P P_f Q).
    let ex = x_events.len();
    let ey = y_events.len();
    let left: Vec<ComplexMatrix> = x_events
        .iter()
        .map(|(_, s, proj)| outer.mul(proj).mul(middle).scale_re(*s))
        .collect();
    let right: Vec<ComplexMatrix> = y_events
        .iter()
        .map(|(_, s, proj)| proj.mul(outer).scale_re(*s))
        .collect();
    let mut cum = vec![ZERO; ex * ey];
    for e in 0..ex {
        for f in 0..ey {
            let g = trace_product(&left[e], &right[f]);
            let above = if e > 0 { cum[(e - 1) * ey + f] } else { ZERO };
            let side = if f > 0 { cum[e * ey + f - 1] } else { ZERO };
            let diag = if e > 0 && f > 0 {
                cum[(e - 1) * ey + f - 1]
            } else {
                ZERO
            };
            cum[e * ey + f] = g + above + side - diag;
        }
    }

    let breaks = |events: &[(f64, f64, &ComplexMatrix)]| -> Vec<f64> {
        let mut b: Vec<f64> = events.iter().map(|e| e.0).collect();
        b.push(interval.a());
        b.push(interval.b());
        b.sort_by(|u, v| u.partial_cmp(v).unwrap());
        b.dedup();
        b
    };
    let x_breaks = breaks(&x_events);
    let y_breaks = breaks(&y_events);

    let nx = x_breaks.len() - 1;
    let ny = y_breaks.len() - 1;
    let mut values = vec![ZERO; nx * ny];
    // Number of events with lambda <= left edge, per cell.
    let count_upto = |events: &[(f64, f64, &ComplexMatrix)], edge: f64| -> usize {
        events.partition_point(|e| e.0 <= edge)
    };
    for ix in 0..nx {
        let cx = count_upto(&x_events, x_breaks[ix]);
        if cx == 0 {
            continue;
        }
        for iy in 0..ny {
            let cy = count_upto(&y_events, y_breaks[iy]);
            if cy == 0 {
                continue;
            }
            values[ix * ny + iy] = cum[(cx - 1) * ey + (cy - 1)];
        }
    }
    Ok(SpectralShiftField {
        x_breaks,
        y_breaks,
        values,
    })
}

/// The shift field of a perturbed system. The value is real here (the
/// system's sandwich projections reduce the tuples); imaginary mass above
/// 1e-10 is a numerical failure and anything below is discarded after the
/// check.
pub fn xi_field(sys: &PerturbedSystem) -> Result<SpectralShiftField> {
    xi_field_parts(
        &sys.sd1,
        &sys.sd1_0,
        &sys.sd2,
        &sys.sd2_0,
        &sys.p,
        &sys.q,
        &sys.interval,
    )?
    .into_real_checked(tol::XI_IMAG_TOL)
}

/// A complex measure on the rectangle given by a piecewise-constant density.
#[derive(Debug, Clone)]
pub struct BorelMeasure2D {
    pub density: SpectralShiftField,
    pub total_variation: f64,
}

pub fn measure_from_xi(xi: &SpectralShiftField) -> BorelMeasure2D {
    BorelMeasure2D {
        density: xi.clone(),
        total_variation: xi.total_variation(),
    }
}

/// The pair phi1 = -1/2 integral_a^y psi(x, t) dt,
/// phi2 = +1/2 integral_a^x psi(t, y) dt, together with its source psi.
/// Gauge terms (an x-only summand on phi1, a y-only summand on phi2) may be
/// installed afterwards; the trace expressions do not see them.
#[derive(Debug, Clone)]
pub struct AntiderivativePair {
    pub phi1: ScalarField2D,
    pub phi2: ScalarField2D,
    pub psi: ScalarField2D,
}

pub fn antiderivatives_from_psi(psi: &ScalarField2D) -> Result<AntiderivativePair> {
    let domain = psi.domain();
    match psi {
        ScalarField2D::Polynomial { poly, .. } => {
            let phi1 = poly
                .antiderivative_y_from(domain.y.a())
                .scale(Complex64::new(-0.5, 0.0));
            let phi2 = poly
                .antiderivative_x_from(domain.x.a())
                .scale(Complex64::new(0.5, 0.0));
            Ok(AntiderivativePair {
                phi1: ScalarField2D::polynomial(phi1, domain),
                phi2: ScalarField2D::polynomial(phi2, domain),
                psi: psi.clone(),
            })
        }
        ScalarField2D::Sampled {
            x_knots, y_knots, ..
        } => {
            let ny = y_knots.len();
            let mut v1 = vec![ZERO; x_knots.len() * ny];
            let mut v2 = vec![ZERO; x_knots.len() * ny];
            for (ix, &x) in x_knots.iter().enumerate() {
                for (iy, &y) in y_knots.iter().enumerate() {
                    v1[ix * ny + iy] = psi.integral_y(x, domain.y.a(), y)? * (-0.5);
                    v2[ix * ny + iy] = psi.integral_x(y, domain.x.a(), x)? * 0.5;
                }
            }
            Ok(AntiderivativePair {
                phi1: ScalarField2D::sampled(x_knots.clone(), y_knots.clone(), v1, domain)?,
                phi2: ScalarField2D::sampled(x_knots.clone(), y_knots.clone(), v2, domain)?,
                psi: psi.clone(),
            })
        }
    }
}

impl AntiderivativePair {
    /// Adds gauge terms: `g1` (x only) to phi1 and `g2` (y only) to phi2.
    pub fn with_gauge(&self, g1: &Poly2, g2: &Poly2) -> Result<AntiderivativePair> {
        if g1.terms().any(|(_, j, _)| j != 0) {
            return Err(Error::invalid("g1 must depend on x only"));
        }
        if g2.terms().any(|(i, _, _)| i != 0) {
            return Err(Error::invalid("g2 must depend on y only"));
        }
        Ok(AntiderivativePair {
            phi1: self.phi1.add_poly(g1),
            phi2: self.phi2.add_poly(g2),
            psi: self.psi.clone(),
        })
    }

    /// Checks d(phi2)/dx - d(phi1)/dy = psi: exactly for polynomials, by
    /// central differences at cell midpoints for sampled fields.
    pub fn verify(&self, tolerance: f64) -> Result<()> {
        match (&self.phi1, &self.phi2, &self.psi) {
            (
                ScalarField2D::Polynomial { poly: p1, .. },
                ScalarField2D::Polynomial { poly: p2, .. },
                ScalarField2D::Polynomial { poly: psi, .. },
            ) => {
                let lhs = p2.derivative_x().add(&p1.derivative_y().scale(-ONE));
                let diff = lhs.add(&psi.scale(-ONE));
                let worst = diff
                    .terms()
                    .map(|(_, _, c)| c.norm())
                    .fold(0.0_f64, f64::max);
                if worst > tolerance {
                    return Err(Error::numerical(format!(
                        "antiderivative pair violates the defining relation: coefficient defect {worst:.3e}"
                    )));
                }
                Ok(())
            }
            _ => {
                let domain = self.psi.domain();
                let n = 24;
                let hx = domain.x.length() / (4.0 * n as f64);
                let hy = domain.y.length() / (4.0 * n as f64);
                let mut worst = 0.0_f64;
                for i in 0..n {
                    let x = domain.x.a() + domain.x.length() * (i as f64 + 0.5) / n as f64;
                    for j in 0..n {
                        let y = domain.y.a() + domain.y.length() * (j as f64 + 0.5) / n as f64;
                        let ddx = (self.phi2.eval(x + hx, y)? - self.phi2.eval(x - hx, y)?)
                            / (2.0 * hx);
                        let ddy = (self.phi1.eval(x, y + hy)? - self.phi1.eval(x, y - hy)?)
                            / (2.0 * hy);
                        worst = worst.max((ddx - ddy - self.psi.eval(x, y)?).norm());
                    }
                }
                if worst > tolerance {
                    return Err(Error::numerical(format!(
                        "antiderivative pair violates the defining relation: sampled defect {worst:.3e}"
                    )));
                }
                Ok(())
            }
        }
    }
}

/// Closed-form value of the trace expression for polynomial test pairs
/// (p1, p2): monomial-by-monomial operator sums, traced. Terms whose
/// operator differences vanish identically (j = 0 in the first sum, r = 0
/// in the second) are skipped.
pub fn lhs_closed_form_poly(
    sys: &PerturbedSystem,
    p1: &ScalarField2D,
    p2: &ScalarField2D,
) -> Result<Complex64> {
    let (p1, p2) = match (p1.as_polynomial(), p2.as_polynomial()) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            return Err(Error::domain(
                "closed form needs polynomial fields",
            ))
        }
    };
    let h1 = sys.tuple1.operator(0).matrix();
    let h2 = sys.tuple1.operator(1).matrix();
    let h1_0 = sys.tuple0.operator(0).matrix();
    let h2_0 = sys.tuple0.operator(1).matrix();
    let pm = &sys.p;
    let qm = &sys.q;

    let max_pow = |poly: &Poly2| -> (u32, u32) {
        let mut mi = 0;
        let mut mj = 0;
        for (i, j, _) in poly.terms() {
            mi = mi.max(i);
            mj = mj.max(j);
        }
        (mi, mj)
    };
    let (i_max, j_max) = max_pow(p1);
    let (r_max, s_max) = max_pow(p2);

    let pow_table = |m: &ComplexMatrix, up_to: u32| -> Vec<ComplexMatrix> {
        let mut t = vec![ComplexMatrix::identity(m.dim()).unwrap()];
        for k in 1..=up_to {
            let next = t[(k - 1) as usize].mul(m);
            t.push(next);
        }
        t
    };
    let top = (i_max + 1).max(r_max);
    let h1_pows = pow_table(h1, top);
    let h1_0_pows = pow_table(h1_0, top);
    let side = j_max.max(s_max + 1);
    let h2_pows = pow_table(h2, side);
    let h2_0_pows = pow_table(h2_0, side);

    let mut acc = ZERO;
    for (i, j, c) in p1.terms() {
        if j == 0 {
            continue;
        }
        let left = pm
            .mul(&h2_0_pows[j as usize].sub(&h2_pows[j as usize]))
            .mul(qm);
        let right = h1_pows[(i + 1) as usize].sub(&h1_0_pows[(i + 1) as usize]);
        acc += c / (i as f64 + 1.0) * trace_product(&left, &right);
    }
    for (r, s, d) in p2.terms() {
        if r == 0 {
            continue;
        }
        let left = qm
            .mul(&h1_pows[r as usize].sub(&h1_0_pows[r as usize]))
            .mul(pm);
        let right = h2_pows[(s + 1) as usize].sub(&h2_0_pows[(s + 1) as usize]);
        acc += d / (s as f64 + 1.0) * trace_product(&left, &right);
    }
    Ok(acc)
}

/// Both evaluations of the spectral-integral form.
#[derive(Debug, Clone, Copy)]
pub struct SpectralIntegralForms {
    /// Two-difference form (the returned value of the operation).
    pub two_term: Complex64,
    /// Four single line integrals, summed under one trace.
    pub four_term: Complex64,
}

/// The trace of the Stokes-like line-integral expression, evaluated in both
/// its four-term and two-difference forms; the two must agree within 1e-10
/// relative, which is asserted here.
pub fn lhs_spectral_integral(
    sys: &PerturbedSystem,
    pair: &AntiderivativePair,
) -> Result<SpectralIntegralForms> {
    let phi1 = &pair.phi1;
    let phi2 = &pair.phi2;
    let anchor_x = phi1.domain().x.a();
    let anchor_y = phi2.domain().y.a();
    let pm = &sys.p;
    let qm = &sys.q;

    // Two-term form.
    let term1 = line_integral_general(&sys.sd1_0, &sys.sd1, |alpha| {
        let t_new = phi_line_operator(phi1, &sys.sd2_0, anchor_x, alpha)?;
        let t_old = phi_line_operator(phi1, &sys.sd2, anchor_x, alpha)?;
        Ok(pm.mul(&t_new.sub(&t_old)).mul(qm))
    })?;
    let term2 = line_integral_general(&sys.sd2_0, &sys.sd2, |alpha| {
        let t_new = phi_line_operator_y(phi2, &sys.sd1, anchor_y, alpha)?;
        let t_old = phi_line_operator_y(phi2, &sys.sd1_0, anchor_y, alpha)?;
        Ok(qm.mul(&t_new.sub(&t_old)).mul(pm))
    })?;
    let two_term = term1.add(&term2).trace();

    // Four-term form: each line integral with a single functional-calculus
    // integrand.
    let l1 = line_integral_general(&sys.sd1_0, &sys.sd1, |alpha| {
        Ok(pm
            .mul(&phi_line_operator(phi1, &sys.sd2_0, anchor_x, alpha)?)
            .mul(qm))
    })?;
    let l3 = line_integral_general(&sys.sd1, &sys.sd1_0, |alpha| {
        Ok(pm
            .mul(&phi_line_operator(phi1, &sys.sd2, anchor_x, alpha)?)
            .mul(qm))
    })?;
    let l2 = line_integral_general(&sys.sd2_0, &sys.sd2, |alpha| {
        Ok(qm
            .mul(&phi_line_operator_y(phi2, &sys.sd1, anchor_y, alpha)?)
            .mul(pm))
    })?;
    let l4 = line_integral_general(&sys.sd2, &sys.sd2_0, |alpha| {
        Ok(qm
            .mul(&phi_line_operator_y(phi2, &sys.sd1_0, anchor_y, alpha)?)
            .mul(pm))
    })?;
    let four_term = l1.add(&l2).add(&l3).add(&l4).trace();

    let scale = two_term.norm().max(four_term.norm()).max(1.0);
    if (four_term - two_term).norm() > tol::FOUR_TERM_TOL * scale {
        return Err(Error::numerical(format!(
            "four-term and two-term forms disagree: {:.3e}",
            (four_term - two_term).norm()
        )));
    }
    Ok(SpectralIntegralForms {
        two_term,
        four_term,
    })
}

/// Integral of psi against a shift field.
pub fn rhs_xi_integral(psi: &ScalarField2D, xi: &SpectralShiftField) -> Result<Complex64> {
    xi.integrate_against(psi)
}

/// The divided-difference pairing over the two joint spectral measures; the
/// sandwich projections are folded into the first perturbation.
pub fn rhs_divided_difference(psi: &ScalarField2D, sys: &PerturbedSystem) -> Result<Complex64> {
    let jsd0 = joint_eigh(&sys.tuple0, sys.group_tol)?;
    let jsd1 = joint_eigh(&sys.tuple1, sys.group_tol)?;
    let v1 = sys.q.mul(&sys.v[0]).mul(&sys.p);
    let v2 = sys.v[1].clone();
    doi_pairing(
        &v1,
        &v2,
        &jsd0,
        &jsd1,
        psi,
        default_coincidence_tol(&sys.interval),
    )
}

/// Spectral decomposition of a full-space Hermitian matrix compressed to a
/// corner (the span of orthonormal `columns`), with atom projections lifted
/// back to the ambient space. Only corner eigenvalues appear; the
/// complement carries no atoms.
pub fn corner_decomposition(
    h: &ComplexMatrix,
    columns: &[Vec<Complex64>],
    group_tol: f64,
) -> Result<SpectralDecomposition> {
    let dim = h.dim();
    let d = columns.len();
    if d == 0 {
        return Err(Error::invalid("empty corner"));
    }
    let images: Vec<Vec<Complex64>> = columns.iter().map(|c| h.matvec(c)).collect();
    let mut compressed = ComplexMatrix::zeros(d)?;
    for (j, img) in images.iter().enumerate() {
        for (i, col) in columns.iter().enumerate() {
            compressed.set(i, j, vec_dot(col, img));
        }
    }
    let defect = compressed.sub(&compressed.adjoint()).op_norm();
    if defect > 1e-8 * h.op_norm().max(1.0) {
        return Err(Error::numerical(format!(
            "corner compression not Hermitian: defect {defect:.3e}"
        )));
    }
    let (vals, vecs) = crate::eigen::jacobi_with_vectors(&compressed.hermitian_part())?;

    let mut atoms: Vec<SpectralAtom> = Vec::new();
    let mut start = 0;
    while start < d {
        let mut end = start + 1;
        while end < d && vals[end] - vals[end - 1] <= group_tol {
            end += 1;
        }
        let mut projection = ComplexMatrix::zeros_unchecked(dim);
        let mut sum = 0.0;
        for k in start..end {
            sum += vals[k];
            // Lift the corner eigenvector into the ambient space.
            let mut w = vec![ZERO; dim];
            for (u, col) in columns.iter().enumerate() {
                let c = vecs.get(u, k);
                for r in 0..dim {
                    w[r] += c * col[r];
                }
            }
            for a in 0..dim {
                for b in 0..dim {
                    let v = projection.get(a, b) + w[a] * w[b].conj();
                    projection.set(a, b, v);
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
    SpectralDecomposition::from_atoms(atoms, Interval::containing(lo, hi), dim)
}

/// One level of the reduction experiment.
#[derive(Debug, Clone)]
pub struct ReductionLevelRecord {
    pub n: usize,
    pub corner_dim0: usize,
    pub corner_dim1: usize,
    /// integral of psi d(mu_N).
    pub integral: Complex64,
    pub target_error: f64,
    /// || P_N (H_j^(N) - H_j^0(N)) P_N^0 - P_N V_j P_N^0 ||_2 per j.
    pub deviation_v: [f64; 2],
    /// || P_N^0 (H_j^(N) - H_j^0(N)) P_N ||_2 per j (feeds the C_j bound).
    pub cross_norm: [f64; 2],
    pub bound: f64,
    pub bound_ok: bool,
    pub saturated: bool,
}

/// Full report of the reduction experiment for one basis choice.
#[derive(Debug, Clone)]
pub struct ReductionReport {
    pub basis_label: String,
    pub target: Complex64,
    pub psi_sup: f64,
    pub c_constants: [f64; 2],
    pub truncation_residual: f64,
    pub records: Vec<ReductionLevelRecord>,
}

impl ReductionReport {
    /// Max increase of the target error across consecutive levels (0 when
    /// nonincreasing).
    pub fn max_error_increase(&self) -> f64 {
        self.records
            .windows(2)
            .map(|w| (w[1].target_error - w[0].target_error).max(0.0))
            .fold(0.0, f64::max)
    }

    pub fn final_error(&self) -> f64 {
        self.records.last().map(|r| r.target_error).unwrap_or(0.0)
    }

    /// The experiment is inconclusive (rather than failed) when the corner
    /// ladder never saturated and the recorded truncation residual is above
    /// tolerance: the convergence target cannot be certified then.
    pub fn inconclusive(&self) -> bool {
        let saturated = self.records.last().map(|r| r.saturated).unwrap_or(false);
        !saturated && self.truncation_residual > 1e-12
    }
}

/// Options for the reduction experiment.
#[derive(Debug, Clone, Copy)]
pub struct ReductionOptions {
    pub berg: BergOptions,
    /// Grouping tolerance of the compressed decompositions.
    pub group_tol: f64,
}

impl Default for ReductionOptions {
    fn default() -> Self {
        ReductionOptions {
            berg: BergOptions::default(),
            group_tol: 0.0,
        }
    }
}

/// Rebuilds the trace identity from compressed operators: for every level N
/// the two tuples are corner-compressed separately, xi_N is formed from the
/// compressed decompositions with the corner projections as sandwich, and
/// the integral of psi d(mu_N) is compared against the full-system closed
/// form. Also records the Hilbert-Schmidt deviations of the compressed
/// differences from V_j and checks the uniform bound
/// |integral| <= C_1 C_2 sup|psi| with C_j the max cross norm.
pub fn berg_reduction_experiment(
    sys: &PerturbedSystem,
    basis: &OrthonormalBasis,
    n_list: &[usize],
    pair: &AntiderivativePair,
    options: ReductionOptions,
) -> Result<ReductionReport> {
    if pair.psi.as_polynomial().is_none() {
        return Err(Error::domain(
            "the reduction experiment needs a polynomial psi",
        ));
    }
    let target = lhs_closed_form_poly(sys, &pair.phi1, &pair.phi2)?;
    let psi_sup = pair.psi.sup_abs();

    let seq0 = BergSequence::build(&sys.tuple0, basis, n_list, options.berg)?;
    let seq1 = BergSequence::build(&sys.tuple1, basis, n_list, options.berg)?;

    let mut records = Vec::new();
    let mut c = [0.0_f64; 2];
    for (level0, level1) in seq0.levels.iter().zip(&seq1.levels) {
        let rec = reduce_level(sys, &seq0, &seq1, level0, level1, pair, target, &options)?;
        c[0] = c[0].max(rec.cross_norm[0]);
        c[1] = c[1].max(rec.cross_norm[1]);
        records.push(rec);
    }
    let bound = c[0] * c[1] * psi_sup;
    for rec in &mut records {
        rec.bound = bound;
        rec.bound_ok = rec.integral.norm() <= bound + 1e-12;
    }
    Ok(ReductionReport {
        basis_label: basis.label().to_string(),
        target,
        psi_sup,
        c_constants: c,
        truncation_residual: seq0.truncation_residual.max(seq1.truncation_residual),
        records,
    })
}

#[allow(clippy::too_many_arguments)]
fn reduce_level(
    sys: &PerturbedSystem,
    seq0: &BergSequence,
    seq1: &BergSequence,
    level0: &BergLevel,
    level1: &BergLevel,
    pair: &AntiderivativePair,
    target: Complex64,
    options: &ReductionOptions,
) -> Result<ReductionLevelRecord> {
    let p0 = &level0.corner.projection; // P_N^0: middle sandwich
    let p1 = &level1.corner.projection; // P_N: outer sandwich

    // Corner-supported compressed operators at original scale.
    let mut compressed0 = Vec::new();
    let mut compressed1 = Vec::new();
    let mut sds0 = Vec::new();
    let mut sds1 = Vec::new();
    for j in 0..2 {
        let h0 = seq0.unrescaled_approximant(level0, j)?;
        let h1 = seq1.unrescaled_approximant(level1, j)?;
        let sd0 = corner_decomposition(&h0, level0.corner.basis_columns(), options.group_tol)?;
        let sd1 = corner_decomposition(&h1, level1.corner.basis_columns(), options.group_tol)?;
        compressed0.push(p0.mul(&h0).mul(p0));
        compressed1.push(p1.mul(&h1).mul(p1));
        sds0.push(sd0);
        sds1.push(sd1);
    }

    // The field needs an interval covering full and compressed spectra.
    let mut hull = *sys.interval();
    for sd in sds0.iter().chain(&sds1) {
        hull = hull.expand_to(sd.min_eigenvalue());
        hull = hull.expand_to(sd.max_eigenvalue());
    }
    let xi_n = xi_field_parts(&sds1[0], &sds0[0], &sds1[1], &sds0[1], p0, p1, &hull)?;
    let integral = rhs_xi_integral(&pair.psi, &xi_n)?;

    let mut deviation_v = [0.0_f64; 2];
    let mut cross_norm = [0.0_f64; 2];
    for j in 0..2 {
        let diff = compressed1[j].sub(&compressed0[j]);
        let dev = p1
            .mul(&diff)
            .mul(p0)
            .sub(&p1.mul(sys.perturbation(j)).mul(p0));
        deviation_v[j] = dev.frobenius_norm();
        cross_norm[j] = p0.mul(&diff).mul(p1).frobenius_norm();
    }

    Ok(ReductionLevelRecord {
        n: level0.n,
        corner_dim0: level0.corner.dim,
        corner_dim1: level1.corner.dim,
        integral,
        target_error: (integral - target).norm(),
        deviation_v,
        cross_norm,
        bound: 0.0,
        bound_ok: true,
        saturated: level0.saturated && level1.saturated,
    })
}
