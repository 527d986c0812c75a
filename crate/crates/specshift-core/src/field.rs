//! Bivariate scalar fields on a rectangle: exact polynomials or grid samples
//! with bilinear interpolation. All one- and two-dimensional integrals have
//! closed forms (polynomial antiderivatives, per-cell trapezoid / corner
//! averages), so no quadrature error enters the identity checks downstream.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::interval::Interval;

/// Product domain [a,b] x [c,d].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x: Interval,
    pub y: Interval,
}

impl Rect {
    pub fn new(x: Interval, y: Interval) -> Self {
        Rect { x, y }
    }

    pub fn square(i: Interval) -> Self {
        Rect { x: i, y: i }
    }
}

/// Bivariate polynomial sum of c[(i,j)] x^i y^j with complex coefficients.
/// Terms live in a BTreeMap so iteration order is deterministic.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly2 {
    terms: BTreeMap<(u32, u32), Complex64>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Poly2::default()
    }

    pub fn constant(c: Complex64) -> Self {
        let mut p = Poly2::zero();
        p.add_term(0, 0, c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (u32, u32, Complex64)>) -> Result<Self> {
        let mut p = Poly2::zero();
        for (i, j, c) in terms {
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(Error::non_finite("polynomial coefficient"));
            }
            p.add_term(i, j, c);
        }
        Ok(p)
    }

    /// Monomial x^i y^j with coefficient c.
    pub fn monomial(i: u32, j: u32, c: Complex64) -> Self {
        let mut p = Poly2::zero();
        p.add_term(i, j, c);
        p
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: Complex64) {
        let entry = self.terms.entry((i, j)).or_insert(Complex64::new(0.0, 0.0));
        *entry += c;
        if entry.norm() == 0.0 {
            self.terms.remove(&(i, j));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, Complex64)> + '_ {
        self.terms.iter().map(|(&(i, j), &c)| (i, j, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|&(i, j)| i + j).max().unwrap_or(0)
    }

    pub fn eval(&self, x: f64, y: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&(i, j), &c) in &self.terms {
            acc += c * x.powi(i as i32) * y.powi(j as i32);
        }
        acc
    }

    pub fn add(&self, other: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (i, j, c) in other.terms() {
            out.add_term(i, j, c);
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> Poly2 {
        let mut out = Poly2::zero();
        for (i, j, c) in self.terms() {
            out.add_term(i, j, c * s);
        }
        out
    }

    pub fn derivative_x(&self) -> Poly2 {
        let mut out = Poly2::zero();
        for (i, j, c) in self.terms() {
            if i > 0 {
                out.add_term(i - 1, j, c * i as f64);
            }
        }
        out
    }

    pub fn derivative_y(&self) -> Poly2 {
        let mut out = Poly2::zero();
        for (i, j, c) in self.terms() {
            if j > 0 {
                out.add_term(i, j - 1, c * j as f64);
            }
        }
        out
    }

    /// Polynomial (x, y) -> integral of self(t, y) dt from `anchor` to x.
    pub fn antiderivative_x_from(&self, anchor: f64) -> Poly2 {
        let mut out = Poly2::zero();
        for (i, j, c) in self.terms() {
            let coeff = c / (i as f64 + 1.0);
            out.add_term(i + 1, j, coeff);
            out.add_term(0, j, -coeff * anchor.powi(i as i32 + 1));
        }
        out
    }

    /// Polynomial (x, y) -> integral of self(x, t) dt from `anchor` to y.
    pub fn antiderivative_y_from(&self, anchor: f64) -> Poly2 {
        let mut out = Poly2::zero();
        for (i, j, c) in self.terms() {
            let coeff = c / (j as f64 + 1.0);
            out.add_term(i, j + 1, coeff);
            out.add_term(i, 0, -coeff * anchor.powi(j as i32 + 1));
        }
        out
    }

    /// Exact signed integral of self(t, y) dt from x0 to x1 at fixed y.
    pub fn integral_x(&self, y: f64, x0: f64, x1: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&(i, j), &c) in &self.terms {
            let k = i as i32 + 1;
            let w = (x1.powi(k) - x0.powi(k)) / k as f64;
            acc += c * w * y.powi(j as i32);
        }
        acc
    }

    /// Exact signed integral of self(x, t) dt from y0 to y1 at fixed x.
    pub fn integral_y(&self, x: f64, y0: f64, y1: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&(i, j), &c) in &self.terms {
            let k = j as i32 + 1;
            let w = (y1.powi(k) - y0.powi(k)) / k as f64;
            acc += c * x.powi(i as i32) * w;
        }
        acc
    }

    /// Exact signed double integral over [x0,x1] x [y0,y1] (orientation via
    /// the bounds).
    pub fn integral_rect(&self, x0: f64, x1: f64, y0: f64, y1: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&(i, j), &c) in &self.terms {
            let kx = i as i32 + 1;
            let ky = j as i32 + 1;
            let wx = (x1.powi(kx) - x0.powi(kx)) / kx as f64;
            let wy = (y1.powi(ky) - y0.powi(ky)) / ky as f64;
            acc += c * wx * wy;
        }
        acc
    }
}

/// A bivariate function on a rectangle: exact polynomial, or grid-sampled
/// with bilinear interpolation between knots.
#[derive(Debug, Clone)]
pub enum ScalarField2D {
    Polynomial {
        poly: Poly2,
        domain: Rect,
    },
    Sampled {
        x_knots: Vec<f64>,
        y_knots: Vec<f64>,
        /// Row-major: values[ix * y_knots.len() + iy].
        values: Vec<Complex64>,
        domain: Rect,
    },
}

impl ScalarField2D {
    pub fn polynomial(poly: Poly2, domain: Rect) -> Self {
        ScalarField2D::Polynomial { poly, domain }
    }

    pub fn constant(c: Complex64, domain: Rect) -> Self {
        Self::polynomial(Poly2::constant(c), domain)
    }

    /// Grid-sampled field. Knots must strictly increase and cover the
    /// domain; values are indexed row-major by (x index, y index).
    pub fn sampled(
        x_knots: Vec<f64>,
        y_knots: Vec<f64>,
        values: Vec<Complex64>,
        domain: Rect,
    ) -> Result<Self> {
        if x_knots.len() < 2 || y_knots.len() < 2 {
            return Err(Error::invalid("need at least two knots per axis"));
        }
        for ks in [&x_knots, &y_knots] {
            for w in ks.windows(2) {
                if !(w[0] < w[1]) {
                    return Err(Error::invalid("knots must strictly increase"));
                }
            }
        }
        if values.len() != x_knots.len() * y_knots.len() {
            return Err(Error::invalid("value grid does not match knots"));
        }
        for v in &values {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::non_finite("sampled value"));
            }
        }
        if x_knots[0] > domain.x.a()
            || *x_knots.last().unwrap() < domain.x.b()
            || y_knots[0] > domain.y.a()
            || *y_knots.last().unwrap() < domain.y.b()
        {
            return Err(Error::domain("knots do not cover the domain"));
        }
        Ok(ScalarField2D::Sampled {
            x_knots,
            y_knots,
            values,
            domain,
        })
    }

    pub fn domain(&self) -> Rect {
        match self {
            ScalarField2D::Polynomial { domain, .. } => *domain,
            ScalarField2D::Sampled { domain, .. } => *domain,
        }
    }

    pub fn as_polynomial(&self) -> Option<&Poly2> {
        match self {
            ScalarField2D::Polynomial { poly, .. } => Some(poly),
            _ => None,
        }
    }

    pub fn eval(&self, x: f64, y: f64) -> Result<Complex64> {
        match self {
            ScalarField2D::Polynomial { poly, .. } => Ok(poly.eval(x, y)),
            ScalarField2D::Sampled {
                x_knots,
                y_knots,
                values,
                ..
            } => {
                let (ix, tx) = locate(x_knots, x)?;
                let (iy, ty) = locate(y_knots, y)?;
                let ny = y_knots.len();
                let f00 = values[ix * ny + iy];
                let f10 = values[(ix + 1) * ny + iy];
                let f01 = values[ix * ny + iy + 1];
                let f11 = values[(ix + 1) * ny + iy + 1];
                Ok(f00 * (1.0 - tx) * (1.0 - ty)
                    + f10 * tx * (1.0 - ty)
                    + f01 * (1.0 - tx) * ty
                    + f11 * tx * ty)
            }
        }
    }

    /// Signed integral of self(t, y) dt from x0 to x1 at fixed y.
    pub fn integral_x(&self, y: f64, x0: f64, x1: f64) -> Result<Complex64> {
        match self {
            ScalarField2D::Polynomial { poly, .. } => Ok(poly.integral_x(y, x0, x1)),
            ScalarField2D::Sampled { x_knots, .. } => {
                let (lo, hi, sign) = orient(x0, x1);
                let cuts = span_cuts(x_knots, lo, hi)?;
                let mut acc = Complex64::new(0.0, 0.0);
                for w in cuts.windows(2) {
                    let fa = self.eval(w[0], y)?;
                    let fb = self.eval(w[1], y)?;
                    acc += (fa + fb) * (0.5 * (w[1] - w[0]));
                }
                Ok(acc * sign)
            }
        }
    }

    /// Signed integral of self(x, t) dt from y0 to y1 at fixed x.
    pub fn integral_y(&self, x: f64, y0: f64, y1: f64) -> Result<Complex64> {
        match self {
            ScalarField2D::Polynomial { poly, .. } => Ok(poly.integral_y(x, y0, y1)),
            ScalarField2D::Sampled { y_knots, .. } => {
                let (lo, hi, sign) = orient(y0, y1);
                let cuts = span_cuts(y_knots, lo, hi)?;
                let mut acc = Complex64::new(0.0, 0.0);
                for w in cuts.windows(2) {
                    let fa = self.eval(x, w[0])?;
                    let fb = self.eval(x, w[1])?;
                    acc += (fa + fb) * (0.5 * (w[1] - w[0]));
                }
                Ok(acc * sign)
            }
        }
    }

    /// Signed double integral over the oriented rectangle [x0,x1] x [y0,y1].
    /// Bilinear cells integrate exactly as corner-average times area.
    pub fn integral_rect(&self, x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Complex64> {
        match self {
            ScalarField2D::Polynomial { poly, .. } => Ok(poly.integral_rect(x0, x1, y0, y1)),
            ScalarField2D::Sampled {
                x_knots, y_knots, ..
            } => {
                let (xlo, xhi, sx) = orient(x0, x1);
                let (ylo, yhi, sy) = orient(y0, y1);
                let xcuts = span_cuts(x_knots, xlo, xhi)?;
                let ycuts = span_cuts(y_knots, ylo, yhi)?;
                let mut acc = Complex64::new(0.0, 0.0);
                for wx in xcuts.windows(2) {
                    for wy in ycuts.windows(2) {
                        let area = (wx[1] - wx[0]) * (wy[1] - wy[0]);
                        let corners = self.eval(wx[0], wy[0])?
                            + self.eval(wx[1], wy[0])?
                            + self.eval(wx[0], wy[1])?
                            + self.eval(wx[1], wy[1])?;
                        acc += corners * (0.25 * area);
                    }
                }
                Ok(acc * (sx * sy))
            }
        }
    }

    /// Sup of |self| over the domain. Exact (knot maximum) for sampled
    /// fields; a dense grid estimate for polynomials.
    pub fn sup_abs(&self) -> f64 {
        match self {
            ScalarField2D::Polynomial { poly, domain } => {
                let n = 200;
                let mut best = 0.0_f64;
                for i in 0..=n {
                    let x = domain.x.a() + domain.x.length() * i as f64 / n as f64;
                    for j in 0..=n {
                        let y = domain.y.a() + domain.y.length() * j as f64 / n as f64;
                        best = best.max(poly.eval(x, y).norm());
                    }
                }
                best
            }
            ScalarField2D::Sampled { values, .. } => {
                values.iter().map(|v| v.norm()).fold(0.0, f64::max)
            }
        }
    }

    /// Pointwise sum with a polynomial (gauge terms, mostly). Sampled fields
    /// absorb the polynomial into their knot values.
    pub fn add_poly(&self, p: &Poly2) -> ScalarField2D {
        match self {
            ScalarField2D::Polynomial { poly, domain } => ScalarField2D::Polynomial {
                poly: poly.add(p),
                domain: *domain,
            },
            ScalarField2D::Sampled {
                x_knots,
                y_knots,
                values,
                domain,
            } => {
                let ny = y_knots.len();
                let mut out = values.clone();
                for (ix, &x) in x_knots.iter().enumerate() {
                    for (iy, &y) in y_knots.iter().enumerate() {
                        out[ix * ny + iy] += p.eval(x, y);
                    }
                }
                ScalarField2D::Sampled {
                    x_knots: x_knots.clone(),
                    y_knots: y_knots.clone(),
                    values: out,
                    domain: *domain,
                }
            }
        }
    }
}

fn orient(a: f64, b: f64) -> (f64, f64, f64) {
    if a <= b {
        (a, b, 1.0)
    } else {
        (b, a, -1.0)
    }
}

/// Knot positions restricted to [lo, hi], with lo and hi appended.
fn span_cuts(knots: &[f64], lo: f64, hi: f64) -> Result<Vec<f64>> {
    if lo < knots[0] - 1e-12 || hi > knots[knots.len() - 1] + 1e-12 {
        return Err(Error::domain(format!(
            "integration range [{lo}, {hi}] leaves the sampled grid"
        )));
    }
    let mut cuts = vec![lo];
    for &k in knots {
        if k > lo && k < hi {
            cuts.push(k);
        }
    }
    cuts.push(hi);
    Ok(cuts)
}

/// Cell index and barycentric coordinate of x in the knot vector.
fn locate(knots: &[f64], x: f64) -> Result<(usize, f64)> {
    let n = knots.len();
    if x < knots[0] - 1e-12 || x > knots[n - 1] + 1e-12 {
        return Err(Error::domain(format!(
            "evaluation point {x} outside sampled grid [{}, {}]",
            knots[0],
            knots[n - 1]
        )));
    }
    let x = x.clamp(knots[0], knots[n - 1]);
    // Last cell owns its right endpoint.
    let mut idx = match knots.binary_search_by(|k| k.partial_cmp(&x).unwrap()) {
        Ok(i) => i,
        Err(i) => i.saturating_sub(1),
    };
    if idx >= n - 1 {
        idx = n - 2;
    }
    let t = (x - knots[idx]) / (knots[idx + 1] - knots[idx]);
    Ok((idx, t))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn unit_rect() -> Rect {
        Rect::square(Interval::new(0.0, 1.0).unwrap())
    }

    #[test]
    fn poly_eval_and_derivatives() {
        // p = 2 x^2 y + 3 y^2
        let p = Poly2::from_terms([(2, 1, c(2.0)), (0, 2, c(3.0))]).unwrap();
        assert!((p.eval(2.0, 1.5) - c(2.0 * 4.0 * 1.5 + 3.0 * 2.25)).norm() < 1e-13);
        let dx = p.derivative_x();
        assert!((dx.eval(2.0, 1.5) - c(4.0 * 2.0 * 1.5)).norm() < 1e-13);
        let dy = p.derivative_y();
        assert!((dy.eval(2.0, 1.5) - c(2.0 * 4.0 + 6.0 * 1.5)).norm() < 1e-13);
    }

    #[test]
    fn poly_antiderivative_roundtrip() {
        let p = Poly2::from_terms([(1, 2, c(1.5)), (0, 0, c(-2.0))]).unwrap();
        let f = p.antiderivative_x_from(0.3);
        // d/dx F = p and F(anchor, y) = 0.
        let back = f.derivative_x();
        assert!((back.eval(0.7, -0.4) - p.eval(0.7, -0.4)).norm() < 1e-13);
        assert!(f.eval(0.3, 5.0).norm() < 1e-13);
    }

    #[test]
    fn poly_rect_integral_signed() {
        let p = Poly2::constant(c(1.0));
        let v = p.integral_rect(1.0, 0.0, 0.0, 2.0);
        assert!((v - c(-2.0)).norm() < 1e-14);
    }

    #[test]
    fn sampled_matches_polynomial_for_bilinear() {
        // f(x,y) = 1 + 2x + 3y + 4xy is exactly bilinear; the sampled field
        // must reproduce its values and integrals exactly.
        let p = Poly2::from_terms([
            (0, 0, c(1.0)),
            (1, 0, c(2.0)),
            (0, 1, c(3.0)),
            (1, 1, c(4.0)),
        ])
        .unwrap();
        let knots = vec![0.0, 0.3, 0.55, 1.0];
        let mut values = Vec::new();
        for &x in &knots {
            for &y in &knots {
                values.push(p.eval(x, y));
            }
        }
        let field =
            ScalarField2D::sampled(knots.clone(), knots.clone(), values, unit_rect()).unwrap();
        let exact = ScalarField2D::polynomial(p, unit_rect());
        for (x, y) in [(0.1, 0.9), (0.3, 0.3), (0.77, 0.12)] {
            let a = field.eval(x, y).unwrap();
            let b = exact.eval(x, y).unwrap();
            assert!((a - b).norm() < 1e-13);
        }
        let ia = field.integral_rect(0.1, 0.9, 0.2, 0.8).unwrap();
        let ib = exact.integral_rect(0.1, 0.9, 0.2, 0.8).unwrap();
        assert!((ia - ib).norm() < 1e-13);
        let la = field.integral_x(0.4, 0.05, 0.95).unwrap();
        let lb = exact.integral_x(0.4, 0.05, 0.95).unwrap();
        assert!((la - lb).norm() < 1e-13);
    }

    #[test]
    fn sampled_rejects_out_of_domain() {
        let knots = vec![0.0, 1.0];
        let values = vec![c(0.0); 4];
        let f = ScalarField2D::sampled(knots.clone(), knots, values, unit_rect()).unwrap();
        assert!(f.eval(1.5, 0.5).is_err());
    }

    #[test]
    fn knots_must_cover_domain() {
        let knots = vec![0.2, 1.0];
        let values = vec![c(0.0); 4];
        assert!(ScalarField2D::sampled(knots.clone(), knots, values, unit_rect()).is_err());
    }
}
