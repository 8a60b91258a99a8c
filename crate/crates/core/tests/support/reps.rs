//! Representations used across the test suites.

#![allow(dead_code)]

use num_complex::Complex64;
use zeta_lab_core::hyperbolic::SurfacePresentation;
use zeta_lab_core::representation::{validate, CMatrix, FlatRepresentation};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn affine_images(scales: &[Complex64], shifts: &[Complex64]) -> Vec<CMatrix> {
    scales
        .iter()
        .zip(shifts)
        .map(|(&x, &u)| CMatrix::from_row_slice(2, 2, &[x, u, c(0.0, 0.0), c(1.0, 0.0)]))
        .collect()
}

fn relator_shift(pres: &SurfacePresentation, scales: &[Complex64], shifts: &[Complex64]) -> Complex64 {
    let m = affine_images(scales, shifts);
    let mut acc = CMatrix::identity(2, 2);
    for l in pres.relator.letters() {
        let g = &m[l.generator()];
        acc = if l.is_inverse() {
            acc * g.clone().try_inverse().unwrap()
        } else {
            acc * g
        };
    }
    acc[(0, 1)]
}

/// Affine representation `a_i ↦ [[x_i, u_i], [0, 1]]`. The relator image is
/// `[[1, f(u)], [0, 1]]` with f linear, so the last shift is solved for.
/// Not semisimple, hence not conjugate to a unitary representation.
pub fn affine(pres: &SurfacePresentation, scales: &[Complex64; 4], shifts: &[Complex64; 3]) -> FlatRepresentation {
    let mut u = vec![shifts[0], shifts[1], shifts[2], c(0.0, 0.0)];
    let f0 = relator_shift(pres, scales, &u);
    let mut e = vec![c(0.0, 0.0); 4];
    e[3] = c(1.0, 0.0);
    let f1 = relator_shift(pres, scales, &e);
    u[3] = -f0 / f1;
    validate(pres, affine_images(scales, &u), 2).expect("affine representation satisfies the relator")
}

/// The dim-2 non-unitary perturbation used in the acceptance suite.
pub fn perturbed_dim2(pres: &SurfacePresentation) -> FlatRepresentation {
    affine(
        pres,
        &[c(1.1, 0.2), c(1.0, 0.0), c(0.9, 0.0), c(1.0, 0.0)],
        &[c(0.1, 0.0), c(0.0, 0.05), c(-0.07, 0.0)],
    )
}

/// Scalar representation with χ(a₁) = 1.3.
pub fn scalar_13(pres: &SurfacePresentation) -> FlatRepresentation {
    let one = c(1.0, 0.0);
    FlatRepresentation::scalar(pres, &[c(1.3, 0.0), one, one, one]).unwrap()
}
