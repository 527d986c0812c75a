//! The trace-identity suite: cross-path agreement of the four evaluators on
//! seeded perturbed systems, the worked diagonal case, zero-perturbation
//! cancellation and gauge invariance of the spectral-integral form.

use num_complex::Complex64;

use specshift_core::field::{Poly2, Rect, ScalarField2D};
use specshift_core::hermitian::{CommutingTuple, HermitianOperator};
use specshift_core::interval::Interval;
use specshift_core::matrix::ComplexMatrix;
use specshift_core::trace::{
    antiderivatives_from_psi, lhs_closed_form_poly, lhs_spectral_integral, measure_from_xi,
    rhs_divided_difference, rhs_xi_integral, xi_field, PerturbedSystem, SpectralShiftField,
};

use crate::config::ExperimentConfig;
use crate::gen::{gen_perturbed_system, random_poly};
use crate::report::{details, num, Artifact, CaseRecord};
use crate::rng::{stream, Purpose};
use crate::suites::fmt;

/// All evaluator outputs for one system and one polynomial test pair.
struct PathValues {
    closed: Complex64,
    two_term: Complex64,
    four_term: Complex64,
    xi_integral: Complex64,
    divided_difference: Complex64,
}

impl PathValues {
    fn compute(
        sys: &PerturbedSystem,
        p1: &Poly2,
        p2: &Poly2,
    ) -> anyhow::Result<(PathValues, SpectralShiftField)> {
        let domain = Rect::square(*sys.interval());
        let psi_poly = p2
            .derivative_x()
            .add(&p1.derivative_y().scale(Complex64::new(-1.0, 0.0)));
        let psi = ScalarField2D::polynomial(psi_poly, domain);
        let p1f = ScalarField2D::polynomial(p1.clone(), domain);
        let p2f = ScalarField2D::polynomial(p2.clone(), domain);
        let closed = lhs_closed_form_poly(sys, &p1f, &p2f)?;
        let pair = antiderivatives_from_psi(&psi)?;
        let forms = lhs_spectral_integral(sys, &pair)?;
        let xi = xi_field(sys)?;
        let xi_integral = rhs_xi_integral(&psi, &xi)?;
        let divided_difference = rhs_divided_difference(&psi, sys)?;
        Ok((
            PathValues {
                closed,
                two_term: forms.two_term,
                four_term: forms.four_term,
                xi_integral,
                divided_difference,
            },
            xi,
        ))
    }

    fn all(&self) -> [(&'static str, Complex64); 5] {
        [
            ("closed_form", self.closed),
            ("two_term", self.two_term),
            ("four_term", self.four_term),
            ("xi_integral", self.xi_integral),
            ("divided_difference", self.divided_difference),
        ]
    }

    /// Max pairwise deviation normalized by the allowed tolerance
    /// max(rel * magnitude, abs floor); <= 1 passes.
    fn normalized_deviation(&self, rel: f64, abs_floor: f64) -> f64 {
        let vals = self.all();
        let mut worst = 0.0_f64;
        for (i, (_, a)) in vals.iter().enumerate() {
            for (_, b) in &vals[i + 1..] {
                let allow = (rel * a.norm().max(b.norm())).max(abs_floor);
                worst = worst.max((a - b).norm() / allow);
            }
        }
        worst
    }
}

fn diag_pair(d1: &[f64], d2: &[f64]) -> anyhow::Result<CommutingTuple> {
    Ok(CommutingTuple::new_default(vec![
        HermitianOperator::certify_default(&ComplexMatrix::diag(d1)?)?,
        HermitianOperator::certify_default(&ComplexMatrix::diag(d2)?)?,
    ])?)
}

/// The dim-2 worked example: H1_0 = H2_0 = 0, H1 = diag(1,2), H2 = diag(3,4),
/// psi = 1; every path must give 11 and xi must be the indicator sum
/// 1_{[0,1)x[0,3)} + 1_{[0,2)x[0,4)}.
fn worked_diagonal_case(cfg: &ExperimentConfig) -> anyhow::Result<(Vec<CaseRecord>, Artifact)> {
    let sys = PerturbedSystem::new(
        diag_pair(&[0.0, 0.0], &[0.0, 0.0])?,
        diag_pair(&[1.0, 2.0], &[3.0, 4.0])?,
        Interval::new(-1.0, 5.0)?,
    )?;
    // psi = 1 comes from p2 = x, p1 = 0.
    let p1 = Poly2::zero();
    let p2 = Poly2::monomial(1, 0, Complex64::new(1.0, 0.0));
    let (values, xi) = PathValues::compute(&sys, &p1, &p2)?;

    let mut records = Vec::new();
    let mut path_dev = 0.0_f64;
    let mut detail_pairs: Vec<(&str, serde_json::Value)> = Vec::new();
    for (name, v) in values.all() {
        path_dev = path_dev.max((v - Complex64::new(11.0, 0.0)).norm());
        detail_pairs.push((name, num(v.re)));
    }
    records.push(
        CaseRecord::new(cfg.seed, "worked-diagonal/value-11", path_dev, 1e-10)
            .with_details(details(&detail_pairs)),
    );

    let expect = |x: f64, y: f64| -> f64 {
        let mut v = 0.0;
        if (0.0..1.0).contains(&x) && (0.0..3.0).contains(&y) {
            v += 1.0;
        }
        if (0.0..2.0).contains(&x) && (0.0..4.0).contains(&y) {
            v += 1.0;
        }
        v
    };
    let mut cell_dev = 0.0_f64;
    for (xl, xr, yl, yr, v) in xi.cells() {
        cell_dev = cell_dev.max((v - expect(0.5 * (xl + xr), 0.5 * (yl + yr))).norm());
    }
    records.push(CaseRecord::new(
        cfg.seed,
        "worked-diagonal/xi-cells",
        cell_dev,
        1e-12,
    ));
    // Total variation equals the integral here (xi >= 0): 11.
    let mu = measure_from_xi(&xi);
    records.push(CaseRecord::new(
        cfg.seed,
        "worked-diagonal/total-variation",
        (mu.total_variation - 11.0).abs(),
        1e-10,
    ));

    Ok((records, xi_to_csv(&xi)))
}

fn xi_to_csv(xi: &SpectralShiftField) -> Artifact {
    let mut csv = String::from("x_lo,x_hi,y_lo,y_hi,xi_re,xi_im\n");
    for (xl, xr, yl, yr, v) in xi.cells() {
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt(xl),
            fmt(xr),
            fmt(yl),
            fmt(yr),
            fmt(v.re),
            fmt(v.im)
        ));
    }
    Artifact {
        filename: "xi_grid.csv",
        content: csv,
    }
}

pub fn run(cfg: &ExperimentConfig) -> anyhow::Result<(Vec<CaseRecord>, Vec<Artifact>)> {
    let interval = Interval::new(cfg.interval.0, cfg.interval.1)?;
    let (mut records, xi_artifact) = worked_diagonal_case(cfg)?;

    // Cross-path agreement on seeded systems.
    for case in 0..cfg.cases as u64 {
        let dim = 2 + ((cfg.seed.wrapping_add(5 * case)) % 15) as usize; // 2..=16
        let sys = gen_perturbed_system(
            cfg.seed,
            case,
            dim,
            cfg.epsilon,
            cfg.spectrum_law,
            &interval,
        )?;
        let mut poly_rng = stream(cfg.seed, Purpose::Polynomial, case);
        let p1 = random_poly(&mut poly_rng, cfg.poly_degree);
        let p2 = random_poly(&mut poly_rng, cfg.poly_degree);
        let (values, _) = PathValues::compute(&sys, &p1, &p2)?;
        let dev = values.normalized_deviation(cfg.rel_tol, cfg.abs_floor);
        let mut detail_pairs: Vec<(&str, serde_json::Value)> =
            vec![("dim", num(dim as f64))];
        for (name, v) in values.all() {
            detail_pairs.push((name, serde_json::json!([v.re, v.im])));
        }
        records.push(
            CaseRecord::new(cfg.seed, format!("case{case:03}/three-path"), dev, 1.0)
                .with_details(details(&detail_pairs)),
        );
    }

    // Zero perturbation: every path vanishes.
    for case in 0..3u64 {
        let dim = 3 + (case as usize) * 4;
        let sys = gen_perturbed_system(cfg.seed, case, dim, 0.0, cfg.spectrum_law, &interval)?;
        let mut poly_rng = stream(cfg.seed, Purpose::Polynomial, 1000 + case);
        let p1 = random_poly(&mut poly_rng, cfg.poly_degree.min(3));
        let p2 = random_poly(&mut poly_rng, cfg.poly_degree.min(3));
        let (values, _) = PathValues::compute(&sys, &p1, &p2)?;
        let worst = values
            .all()
            .iter()
            .map(|(_, v)| v.norm())
            .fold(0.0, f64::max);
        records.push(CaseRecord::new(
            cfg.seed,
            format!("zero-perturbation/case{case}"),
            worst,
            1e-12,
        ));
    }

    // Gauge invariance of the spectral-integral form.
    for case in 0..3u64 {
        let dim = 4 + (case as usize) * 3;
        let sys = gen_perturbed_system(
            cfg.seed,
            2000 + case,
            dim,
            cfg.epsilon.max(0.2),
            cfg.spectrum_law,
            &interval,
        )?;
        let mut poly_rng = stream(cfg.seed, Purpose::Polynomial, 2000 + case);
        let psi_poly = random_poly(&mut poly_rng, cfg.poly_degree.min(3));
        let psi = ScalarField2D::polynomial(psi_poly, Rect::square(interval));
        let pair = antiderivatives_from_psi(&psi)?;
        let mut g1 = Poly2::zero();
        let mut g2 = Poly2::zero();
        for d in 0..=3u32 {
            use rand::Rng;
            g1.add_term(d, 0, Complex64::new(poly_rng.gen::<f64>() - 0.5, 0.0));
            g2.add_term(0, d, Complex64::new(poly_rng.gen::<f64>() - 0.5, 0.0));
        }
        let gauged = pair.with_gauge(&g1, &g2)?;
        let a = lhs_spectral_integral(&sys, &pair)?.two_term;
        let b = lhs_spectral_integral(&sys, &gauged)?.two_term;
        records.push(CaseRecord::new(
            cfg.seed,
            format!("gauge-invariance/case{case}"),
            (a - b).norm(),
            1e-10,
        ));
    }

    Ok((records, vec![xi_artifact]))
}
