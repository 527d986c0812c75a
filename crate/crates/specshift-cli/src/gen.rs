//! Seeded generators: Haar-style unitaries, spectra under the supported
//! laws, commuting pairs, perturbed systems and random polynomial test
//! functions. Everything is a pure function of (seed, case) through the
//! stream-splitting rule in [`crate::rng`].

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use specshift_core::eigen::eigh;
use specshift_core::error::{Error, Result};
use specshift_core::field::Poly2;
use specshift_core::hermitian::{CommutingTuple, HermitianOperator};
use specshift_core::interval::Interval;
use specshift_core::matrix::ComplexMatrix;
use specshift_core::trace::PerturbedSystem;

use crate::config::SpectrumLaw;
use crate::rng::{stream, Purpose};

fn gaussian_matrix(rng: &mut ChaCha8Rng, dim: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim).expect("dim >= 1");
    for i in 0..dim {
        for j in 0..dim {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            m.set(i, j, Complex64::new(re, im));
        }
    }
    m
}

/// Haar-style unitary: modified Gram-Schmidt (with re-orthogonalization) of
/// a complex Gaussian matrix.
pub fn haar_unitary(rng: &mut ChaCha8Rng, dim: usize) -> ComplexMatrix {
    let g = gaussian_matrix(rng, dim);
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut v: Vec<Complex64> = (0..dim).map(|i| g.get(i, j)).collect();
        for _ in 0..2 {
            for q in &cols {
                let c: Complex64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (r, x) in v.iter_mut().enumerate() {
                    *x -= c * q[r];
                }
            }
        }
        let n: f64 = v.iter().map(|e| e.norm_sqr()).sum::<f64>().sqrt();
        if n < 1e-8 {
            // Degenerate draw; fall back to a coordinate direction.
            v = vec![Complex64::new(0.0, 0.0); dim];
            v[j] = Complex64::new(1.0, 0.0);
        } else {
            for x in v.iter_mut() {
                *x /= n;
            }
        }
        cols.push(v);
    }
    let mut u = ComplexMatrix::zeros(dim).expect("dim >= 1");
    for (j, col) in cols.iter().enumerate() {
        for i in 0..dim {
            u.set(i, j, col[i]);
        }
    }
    u
}

/// Eigenvalues under a spectrum law, strictly inside the interval.
pub fn spectrum(rng: &mut ChaCha8Rng, law: SpectrumLaw, dim: usize, interval: &Interval) -> Vec<f64> {
    let (a, b) = (interval.a(), interval.b());
    let len = interval.length();
    let margin = 0.02 * len;
    match law {
        SpectrumLaw::Uniform => (0..dim)
            .map(|_| a + margin + (len - 2.0 * margin) * rng.gen::<f64>())
            .collect(),
        SpectrumLaw::DyadicRational => {
            // Eigenvalues of the form m / 2^10 strictly inside (a, b).
            let lo = (a * 1024.0).floor() as i64;
            let hi = (b * 1024.0).ceil() as i64;
            (0..dim)
                .map(|_| loop {
                    let m = rng.gen_range(lo..=hi);
                    let l = m as f64 / 1024.0;
                    if l > a && l < b {
                        break l;
                    }
                })
                .collect()
        }
        SpectrumLaw::Clustered => {
            let centers: Vec<f64> = (0..dim.div_ceil(4).max(1))
                .map(|_| a + margin + (len - 2.0 * margin) * rng.gen::<f64>())
                .collect();
            (0..dim)
                .map(|_| {
                    let c = centers[rng.gen_range(0..centers.len())];
                    let jitter = (rng.gen::<f64>() - 0.5) * 2e-6 * len;
                    (c + jitter).clamp(a + margin, b - margin)
                })
                .collect()
        }
    }
}

fn conjugate_diag(u: &ComplexMatrix, d: &[f64]) -> Result<HermitianOperator> {
    let m = u
        .mul(&ComplexMatrix::diag(d)?)
        .mul(&u.adjoint())
        .hermitian_part();
    HermitianOperator::certify_default(&m)
}

/// A commuting pair sharing one seeded unitary: U diag(d1) U*, U diag(d2) U*.
/// Exact commutation by construction; deterministic in (seed, case).
pub fn gen_commuting_pair(
    seed: u64,
    case: u64,
    dim: usize,
    law: SpectrumLaw,
    interval: &Interval,
) -> Result<CommutingTuple> {
    let u = haar_unitary(&mut stream(seed, Purpose::BaseUnitary, case), dim);
    let d1 = spectrum(&mut stream(seed, Purpose::SpectrumA, case), law, dim, interval);
    let d2 = spectrum(&mut stream(seed, Purpose::SpectrumB, case), law, dim, interval);
    CommutingTuple::new_default(vec![conjugate_diag(&u, &d1)?, conjugate_diag(&u, &d2)?])
}

/// exp(eps K) for a skew-Hermitian direction K, via the eigendecomposition
/// of the Hermitian matrix i K.
fn unitary_flow(k_skew: &ComplexMatrix, eps: f64) -> Result<ComplexMatrix> {
    let m = k_skew.scale(Complex64::new(0.0, 1.0)).hermitian_part();
    let h = HermitianOperator::certify_default(&m)?;
    let sd = eigh(&h, 0.0)?;
    sd.apply_function(|l| (Complex64::new(0.0, -eps * l)).exp())
}

/// Two commuting pairs with the second one exp-interpolated away from the
/// first: the perturbed unitary is exp(eps K) U and the perturbed spectra
/// are shifted by eps times a seeded direction, so every ||V_j||_2 scales
/// with eps and eps = 0 reproduces the unperturbed tuple exactly.
pub fn gen_perturbed_system(
    seed: u64,
    case: u64,
    dim: usize,
    eps: f64,
    law: SpectrumLaw,
    interval: &Interval,
) -> Result<PerturbedSystem> {
    if eps < 0.0 {
        return Err(Error::invalid("epsilon must be >= 0"));
    }
    let tuple0 = gen_commuting_pair(seed, case, dim, law, interval)?;
    if eps == 0.0 {
        return PerturbedSystem::new(tuple0.clone(), tuple0, *interval);
    }

    let u0 = haar_unitary(&mut stream(seed, Purpose::BaseUnitary, case), dim);
    let d1 = spectrum(&mut stream(seed, Purpose::SpectrumA, case), law, dim, interval);
    let d2 = spectrum(&mut stream(seed, Purpose::SpectrumB, case), law, dim, interval);

    let g = gaussian_matrix(&mut stream(seed, Purpose::PerturbationDirection, case), dim);
    let mut skew = g.sub(&g.adjoint()).scale_re(0.5);
    let n = skew.op_norm();
    if n > 0.0 {
        skew = skew.scale_re(1.0 / n);
    }
    let u1 = unitary_flow(&skew, eps)?.mul(&u0);

    let mut drift = stream(seed, Purpose::PerturbationSpectrum, case);
    let len = interval.length();
    let margin = 0.02 * len;
    let shift = |d: &[f64], rng: &mut ChaCha8Rng| -> Vec<f64> {
        d.iter()
            .map(|&x| {
                let delta = (rng.gen::<f64>() - 0.5) * 0.5 * len;
                (x + eps * delta).clamp(interval.a() + margin, interval.b() - margin)
            })
            .collect()
    };
    let e1 = shift(&d1, &mut drift);
    let e2 = shift(&d2, &mut drift);
    let tuple1 =
        CommutingTuple::new_default(vec![conjugate_diag(&u1, &e1)?, conjugate_diag(&u1, &e2)?])?;
    PerturbedSystem::new(tuple0, tuple1, *interval)
}

/// Random bivariate polynomial: all monomials of total degree <= max_degree
/// with complex coefficients uniform in the unit square.
pub fn random_poly(rng: &mut ChaCha8Rng, max_degree: u32) -> Poly2 {
    let mut p = Poly2::zero();
    for i in 0..=max_degree {
        for j in 0..=(max_degree - i) {
            let re = 2.0 * rng.gen::<f64>() - 1.0;
            let im = 2.0 * rng.gen::<f64>() - 1.0;
            p.add_term(i, j, Complex64::new(re, im));
        }
    }
    p
}
