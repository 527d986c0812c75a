//! Property tests for the module invariants: random inputs are built from
//! proptest-drawn entries, oracles are independent evaluation paths
//! (reconstruction, trace algebra, literal enumeration).

use num_complex::Complex64;
use proptest::prelude::*;

use specshift_core::eigen::{
    eigh, eigh_default, hermitian_eigenvalues, joint_eigh,
};
use specshift_core::field::{Poly2, Rect, ScalarField2D};
use specshift_core::hermitian::{CommutingTuple, HermitianOperator};
use specshift_core::integrals::{
    divided_difference_kernel, doi_pairing, line_integral, rs_integral_exact,
    rs_integral_partition, EvalRule, OperatorCurve, Partition,
};
use specshift_core::interval::Interval;
use specshift_core::matrix::{hs_inner, trace_product, ComplexMatrix};
use specshift_core::spectral::{dyadic_partial_sum, dyadic_partial_sum_scalar};
use specshift_core::trace::{
    antiderivatives_from_psi, lhs_closed_form_poly, lhs_spectral_integral, measure_from_xi,
    rhs_divided_difference, rhs_xi_integral, xi_field, PerturbedSystem,
};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Dense complex matrix with entries in the unit square.
fn matrix_strategy(dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), dim * dim).prop_map(move |entries| {
        ComplexMatrix::new(dim, entries.into_iter().map(|(re, im)| c(re, im)).collect()).unwrap()
    })
}

fn hermitian_strategy(dim: usize) -> impl Strategy<Value = HermitianOperator> {
    matrix_strategy(dim)
        .prop_map(|m| HermitianOperator::certify_default(&m.hermitian_part()).unwrap())
}

/// Unitary via Gram-Schmidt of a random matrix blended with the identity
/// (the blend keeps the columns independent).
fn unitary_from(m: &ComplexMatrix) -> ComplexMatrix {
    let dim = m.dim();
    let blended = m.add(&ComplexMatrix::identity(dim).unwrap().scale_re(3.0));
    let mut cols: Vec<Vec<Complex64>> = Vec::new();
    for j in 0..dim {
        let mut v: Vec<Complex64> = (0..dim).map(|i| blended.get(i, j)).collect();
        for _ in 0..2 {
            for q in &cols {
                let w: Complex64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (r, x) in v.iter_mut().enumerate() {
                    *x -= w * q[r];
                }
            }
        }
        let n: f64 = v.iter().map(|e| e.norm_sqr()).sum::<f64>().sqrt();
        if n < 1e-9 {
            v = (0..dim)
                .map(|i| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) })
                .collect();
        } else {
            for x in v.iter_mut() {
                *x /= n;
            }
        }
        cols.push(v);
    }
    let mut u = ComplexMatrix::zeros(dim).unwrap();
    for (j, col) in cols.iter().enumerate() {
        for i in 0..dim {
            u.set(i, j, col[i]);
        }
    }
    u
}

fn conjugated(u: &ComplexMatrix, d: &[f64]) -> HermitianOperator {
    let m = u
        .mul(&ComplexMatrix::diag(d).unwrap())
        .mul(&u.adjoint())
        .hermitian_part();
    HermitianOperator::certify_default(&m).unwrap()
}

/// A commuting pair with unit-interval spectra plus the raw data.
fn commuting_pair_strategy(dim: usize) -> impl Strategy<Value = CommutingTuple> {
    (
        matrix_strategy(dim),
        prop::collection::vec(0.02..0.98f64, dim),
        prop::collection::vec(0.02..0.98f64, dim),
    )
        .prop_map(move |(m, d1, d2)| {
            let u = unitary_from(&m);
            CommutingTuple::new_default(vec![conjugated(&u, &d1), conjugated(&u, &d2)]).unwrap()
        })
}

fn system_strategy(dim: usize) -> impl Strategy<Value = PerturbedSystem> {
    (commuting_pair_strategy(dim), commuting_pair_strategy(dim)).prop_map(|(t0, t1)| {
        PerturbedSystem::new(t0, t1, Interval::new(0.0, 1.0).unwrap()).unwrap()
    })
}

fn poly_strategy(max_degree: u32) -> impl Strategy<Value = Poly2> {
    let monomials: Vec<(u32, u32)> = (0..=max_degree)
        .flat_map(|i| (0..=(max_degree - i)).map(move |j| (i, j)))
        .collect();
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), monomials.len()).prop_map(move |coef| {
        let mut p = Poly2::zero();
        for ((i, j), (re, im)) in monomials.iter().zip(coef) {
            p.add_term(*i, *j, c(re, im));
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn eigh_resolves_identity_and_reconstructs(h in hermitian_strategy(6)) {
        let sd = eigh_default(&h).unwrap();
        sd.validate(Some(h.matrix())).unwrap();
        let mut sum = ComplexMatrix::zeros(6).unwrap();
        for atom in sd.atoms() {
            sum = sum.add(&atom.projection);
        }
        let identity_defect = sum.sub(&ComplexMatrix::identity(6).unwrap()).op_norm();
        prop_assert!(identity_defect <= 1e-10);
        let rec = sd.reconstruct().sub(h.matrix()).op_norm();
        prop_assert!(rec <= 1e-10 * h.op_norm().max(1.0));
    }

    #[test]
    fn schatten_norm_nonincreasing_in_p(h in hermitian_strategy(5)) {
        let ps = [1.0, 1.5, 2.0, 3.0, 7.0, f64::INFINITY];
        let mut last = f64::INFINITY;
        for (k, &p) in ps.iter().enumerate() {
            let v = h.schatten_norm(p).unwrap();
            if k > 0 {
                prop_assert!(v <= last * (1.0 + 1e-10), "p={p}: {v} > {last}");
            }
            last = v;
        }
        // Cross-check p = 2 against the trace oracle Tr(H^2).
        let tr = trace_product(h.matrix(), h.matrix()).re;
        let s2 = h.schatten_norm(2.0).unwrap();
        prop_assert!((s2 * s2 - tr).abs() <= 1e-10 * tr.abs().max(1.0));
    }

    #[test]
    fn hs_inner_conjugate_symmetric(a in matrix_strategy(4), b in matrix_strategy(4)) {
        let ab = hs_inner(&a, &b).unwrap();
        let ba = hs_inner(&b, &a).unwrap();
        prop_assert!((ab - ba.conj()).norm() <= 1e-13 * ab.norm().max(1.0));
    }

    #[test]
    fn joint_eigh_reconstructs_coordinates(t in commuting_pair_strategy(5)) {
        let jsd = joint_eigh(&t, 1e-9).unwrap();
        jsd.validate(Some(&t)).unwrap();
        let scale = t.operators().iter().map(|o| o.op_norm()).fold(1.0, f64::max);
        for (coord, op) in t.operators().iter().enumerate() {
            let rec = jsd.reconstruct_coordinate(coord).sub(op.matrix()).op_norm();
            prop_assert!(rec <= 1e-10 * scale);
        }
    }

    #[test]
    fn dyadic_partial_sums_bounded(
        m in matrix_strategy(5),
        d in prop::collection::vec(0.0..=1.0f64, 5),
        depth in 1u32..=12,
    ) {
        let u = unitary_from(&m);
        let a = conjugated(&u, &d);
        let sd = eigh(&a, 0.0).unwrap();
        let s = dyadic_partial_sum(&sd, depth).unwrap();
        let err = sd.reconstruct().sub(&s).op_norm();
        prop_assert!(err <= 0.5f64.powi(depth as i32) + 1e-13, "err {err:e}");
        // Collapse identity per atom.
        for atom in sd.atoms() {
            let lo = dyadic_partial_sum_scalar(atom.eigenvalue.clamp(0.0, 1.0), depth);
            let floor = specshift_core::spectral::dyadic_floor_form_scalar(
                atom.eigenvalue.clamp(0.0, 1.0),
                depth,
            );
            prop_assert!((lo - floor).abs() <= 1e-15);
        }
    }

    #[test]
    fn cumulative_projector_monotone(
        h in hermitian_strategy(5),
        x1 in -1.5..1.5f64,
        x2 in -1.5..1.5f64,
    ) {
        let (lo, hi) = if x1 <= x2 { (x1, x2) } else { (x2, x1) };
        let sd = eigh_default(&h).unwrap();
        let diff = sd.cumulative_projector(hi).sub(&sd.cumulative_projector(lo));
        let min_eig = hermitian_eigenvalues(&diff.hermitian_part()).unwrap()[0];
        prop_assert!(min_eig >= -1e-12);
    }

    #[test]
    fn partition_sums_converge_with_mesh(
        m in matrix_strategy(6),
        d in prop::collection::vec(0.05..0.95f64, 6),
        levels in 2u32..=9,
    ) {
        let u = unitary_from(&m);
        let a = conjugated(&u, &d);
        let sd = eigh(&a, 0.0).unwrap();
        let curve = OperatorCurve::new(
            |alpha| Ok(ComplexMatrix::identity(6)?.scale_re(alpha)),
            1.0,
            1.0,
        );
        let interval = Interval::new(0.0, 1.0).unwrap();
        let exact = rs_integral_exact(&curve, &sd).unwrap();
        let partition = Partition::dyadic(&interval, levels, EvalRule::Right).unwrap();
        let approx = rs_integral_partition(&curve, &sd, &partition).unwrap();
        let err = approx.sub(&exact).op_norm();
        let mesh = partition.mesh();
        prop_assert!(err <= mesh + 1e-13);
        // Shape of the refinement estimate for index-1 curves.
        prop_assert!(err <= curve.holder_constant * mesh.sqrt() * interval.length().sqrt() + 1e-13);
    }

    #[test]
    fn line_integral_antisymmetric_under_endpoint_swap(
        t in commuting_pair_strategy(4),
        p in poly_strategy(3),
    ) {
        let a_sd = eigh(t.operator(0), 1e-9).unwrap();
        let b_sd = eigh(t.operator(1), 1e-9).unwrap();
        let phi = ScalarField2D::polynomial(p, Rect::square(Interval::new(0.0, 1.0).unwrap()));
        let ab = line_integral(&a_sd, &b_sd, &phi, &a_sd).unwrap();
        let ba = line_integral(&b_sd, &a_sd, &phi, &a_sd).unwrap();
        prop_assert!(ab.add(&ba).op_norm() <= 1e-11 * ab.op_norm().max(1.0));
    }

    #[test]
    fn kernel_argument_symmetry(
        p in poly_strategy(3),
        x1 in 0.0..1.0f64,
        x2 in 0.0..1.0f64,
        y1 in 0.0..1.0f64,
        y2 in 0.0..1.0f64,
    ) {
        let psi = ScalarField2D::polynomial(p, Rect::square(Interval::new(0.0, 1.0).unwrap()));
        let k0 = divided_difference_kernel(&psi, x1, x2, y1, y2, 1e-9).unwrap();
        let kx = divided_difference_kernel(&psi, x2, x1, y1, y2, 1e-9).unwrap();
        let ky = divided_difference_kernel(&psi, x1, x2, y2, y1, 1e-9).unwrap();
        prop_assert!((k0 - kx).norm() <= 1e-10 * k0.norm().max(1.0));
        prop_assert!((k0 - ky).norm() <= 1e-10 * k0.norm().max(1.0));
    }

    #[test]
    fn doi_with_unit_kernel_collapses_to_trace(
        t0 in commuting_pair_strategy(4),
        t1 in commuting_pair_strategy(4),
        v in matrix_strategy(4),
    ) {
        let jsd0 = joint_eigh(&t0, 1e-9).unwrap();
        let jsd1 = joint_eigh(&t1, 1e-9).unwrap();
        let psi = ScalarField2D::constant(c(1.0, 0.0), Rect::square(Interval::new(0.0, 1.0).unwrap()));
        let v1 = v.hermitian_part();
        let v2 = t1.operator(1).matrix().clone();
        let got = doi_pairing(&v1, &v2, &jsd0, &jsd1, &psi, 1e-9).unwrap();
        let want = trace_product(&v1, &v2);
        prop_assert!((got - want).norm() <= 1e-10 * want.norm().max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn three_paths_agree_on_random_systems(
        sys in system_strategy(5),
        p1 in poly_strategy(3),
        p2 in poly_strategy(3),
    ) {
        let domain = Rect::square(*sys.interval());
        let psi_poly = p2.derivative_x().add(&p1.derivative_y().scale(c(-1.0, 0.0)));
        let psi = ScalarField2D::polynomial(psi_poly, domain);
        let closed = lhs_closed_form_poly(
            &sys,
            &ScalarField2D::polynomial(p1, domain),
            &ScalarField2D::polynomial(p2, domain),
        )
        .unwrap();
        let forms = lhs_spectral_integral(&sys, &antiderivatives_from_psi(&psi).unwrap()).unwrap();
        let xi = xi_field(&sys).unwrap();
        let from_xi = rhs_xi_integral(&psi, &xi).unwrap();
        let dd = rhs_divided_difference(&psi, &sys).unwrap();
        let vals = [closed, forms.two_term, forms.four_term, from_xi, dd];
        for (i, a) in vals.iter().enumerate() {
            for b in &vals[i+1..] {
                let allow = (1e-8 * a.norm().max(b.norm())).max(1e-10);
                prop_assert!((a - b).norm() <= allow, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn evaluators_linear_in_psi(
        sys in system_strategy(4),
        pa in poly_strategy(2),
        pb in poly_strategy(2),
        wa in -1.0..1.0f64,
        wb in -1.0..1.0f64,
    ) {
        let domain = Rect::square(*sys.interval());
        let w1 = c(wa, 0.3);
        let w2 = c(wb, -0.4);
        let combined = pa.scale(w1).add(&pb.scale(w2));
        let xi = xi_field(&sys).unwrap();
        let f = |p: &Poly2| ScalarField2D::polynomial(p.clone(), domain);
        let ia = rhs_xi_integral(&f(&pa), &xi).unwrap();
        let ib = rhs_xi_integral(&f(&pb), &xi).unwrap();
        let ic = rhs_xi_integral(&f(&combined), &xi).unwrap();
        prop_assert!((ic - (w1 * ia + w2 * ib)).norm() <= 1e-9 * ic.norm().max(1.0));
        let da = rhs_divided_difference(&f(&pa), &sys).unwrap();
        let db = rhs_divided_difference(&f(&pb), &sys).unwrap();
        let dc = rhs_divided_difference(&f(&combined), &sys).unwrap();
        prop_assert!((dc - (w1 * da + w2 * db)).norm() <= 1e-9 * dc.norm().max(1.0));
    }

    #[test]
    fn real_psi_gives_real_traces(
        sys in system_strategy(4),
        p in poly_strategy(3),
    ) {
        // Strip imaginary parts to get a real psi.
        let mut real = Poly2::zero();
        for (i, j, w) in p.terms() {
            real.add_term(i, j, c(w.re, 0.0));
        }
        let domain = Rect::square(*sys.interval());
        let psi = ScalarField2D::polynomial(real, domain);
        let xi = xi_field(&sys).unwrap();
        let a = rhs_xi_integral(&psi, &xi).unwrap();
        let b = rhs_divided_difference(&psi, &sys).unwrap();
        let scale = a.norm().max(b.norm()).max(1.0);
        prop_assert!(a.im.abs() <= 1e-10 * scale, "xi path imag {:e}", a.im);
        prop_assert!(b.im.abs() <= 1e-10 * scale, "dd path imag {:e}", b.im);
    }

    #[test]
    fn total_variation_bounded(sys in system_strategy(5)) {
        let xi = xi_field(&sys).unwrap();
        let mu = measure_from_xi(&xi);
        let hs = (sys.dim() as f64).sqrt(); // ||I||_2 for P = Q = I
        let area = sys.interval().length() * sys.interval().length();
        prop_assert!(mu.total_variation <= 4.0 * hs * hs * area + 1e-10);
    }
}
